// Copyright 2026 The skewrig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skewrig/bignum.hpp"
#include "skewrig/contfrac.hpp"

namespace skewrig::diophantine {

/// Exact: ||q alpha|| brackets summed as big fixed-point integers.
/// Fast: 128-bit fixed-point rotation with a certified error bound.
/// Auto: Exact while every q in range is <= exact_limit.
enum class SumPath { Auto, Exact, Fast };

struct SumOptions {
  SumPath path = SumPath::Auto;
  unsigned precision_bits = 256;
  unsigned threads = 1;
  std::uint64_t exact_limit = 10000;
};

struct SumReport {
  std::size_t k = 0;
  std::optional<double> c;
  std::optional<double> eps;
  BigInt q_k;
  double value = 0.0;        ///< midpoint of the certified enclosure
  double error_bound = 0.0;  ///< |true sum - value| <= error_bound
  double normalized_ratio = 0.0;
  std::uint64_t term_count = 0;
  bool exact_path = false;
  /// Exact path: the sum over negative q was computed separately and agrees
  /// term by term with the positive side.
  bool symmetric = true;
};

/// sum_{0<|q|<q_k} 1/||q alpha||^2; ratio = value / q_k^2.
SumReport sum_inverse_sq(const contfrac::IrrationalSpec& spec, std::size_t k,
                         const SumOptions& opts = {});

/// sum_{q_k<=|q|<q_{k+1}} q^-2 min(1/||q alpha||^2, c^2); ratio = value q_k / c.
SumReport sum_slice_min(const contfrac::IrrationalSpec& spec, std::size_t k, double c,
                        const SumOptions& opts = {});

/// sum_{0<|q|<q_k} 1/||q alpha||; ratio = value / (q_k log(q_k + 1)).
SumReport sum_inverse_l1(const contfrac::IrrationalSpec& spec, std::size_t k,
                         const SumOptions& opts = {});

/// sum_{q_k<=|q|<q_{k+1}} |q|^-(1+eps) min(1/||q alpha||, c);
/// ratio = value q_k^eps / log(c + 1). Always evaluated on the fast path.
SumReport sum_slice_min_l1(const contfrac::IrrationalSpec& spec, std::size_t k, double c,
                           double eps, const SumOptions& opts = {});

/// Exact block sums of the positive half of sum_slice_min over
/// [j q_k, (j+1) q_k) for j = 1..a_{k+1}-1 followed by the tail
/// [a_{k+1} q_k, q_{k+1}). Values are enclosures in units of 2^-scale_bits.
struct BlockDecomposition {
  unsigned scale_bits = 0;
  std::vector<BigInt> block_lo, block_hi;
  BigInt total_lo, total_hi;  ///< computed over the whole slice in one pass
};
BlockDecomposition slice_blocks(const contfrac::IrrationalSpec& spec, std::size_t k, double c,
                                unsigned precision_bits = 256);

/// Lower bound 2 (q_k / (q_k + q_{k-1}))^2 on the sum_inverse_sq ratio.
double inverse_sq_ratio_floor(const contfrac::IrrationalSpec& spec, std::size_t k);

// ---------------------------------------------------------------------------
// Bounded-variation test functions and the Denjoy-Koksma check.

/// min(T^2, 1/||z||^2); integral 4T - 4, variation 2T^2 - 8 (T >= 2).
struct CappedInverseSquare {
  BigRational threshold;
};
/// min(T, 1/||z||); integral 2 + 2 log(T/2), variation 2T - 4 (T >= 2).
struct CappedInverse {
  BigRational threshold;
};
/// mean + sum_k (a_k cos 2 pi k z + b_k sin 2 pi k z).
struct TrigTerm {
  int k = 1;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};
struct TrigPoly {
  double mean = 0.0;
  std::vector<TrigTerm> terms;
};
/// Periodic linear interpolation through (z_i, v_i), 0 <= z_0 < ... < 1.
struct PiecewiseLinear {
  std::vector<std::pair<BigRational, BigRational>> knots;
};

class BVFunction {
 public:
  using Variant = std::variant<CappedInverseSquare, CappedInverse, TrigPoly, PiecewiseLinear>;

  static BVFunction capped_inverse_square(BigRational threshold);
  static BVFunction capped_inverse(BigRational threshold);
  static BVFunction trig(TrigPoly poly);
  static BVFunction cosine() { return trig({0.0, {{1, 1.0, 0.0}}}); }
  static BVFunction constant(double value) { return trig({value, {}}); }
  static BVFunction piecewise_linear(std::vector<std::pair<BigRational, BigRational>> knots);

  const Variant& variant() const { return value_; }
  const std::string& name() const { return name_; }

  /// Rational enclosure of the integral over the circle.
  const Interval& integral() const { return integral_; }
  /// Total variation over one period (exact, or a declared upper bound
  /// for trigonometric polynomials).
  const BigRational& variation() const { return variation_; }

  /// Evaluation at z in [0, 1).
  double operator()(double z) const;
  /// Lipschitz constant on the circle.
  double lipschitz() const;
  /// Upper bound on |f(z)| over the circle.
  double sup_abs() const;
  /// Exact value at a rational point (piecewise-linear functions only).
  BigRational eval_exact(const BigRational& z) const;

 private:
  BVFunction(Variant v, std::string name, Interval integral, BigRational variation);

  Variant value_;
  std::string name_;
  Interval integral_;
  BigRational variation_;
  double cap_ = 0.0;
  std::vector<double> knot_z_, knot_v_;
};

/// |f(0)| + q_k |integral f| + Var f for min((2 q_k)^2, 1/||z||^2),
/// i.e. 4 q_k^2 + q_k (8 q_k - 4) + (8 q_k^2 - 8).
BigInt inverse_sq_budget(const BigInt& q_k);

struct DKResult {
  std::size_t n = 0;
  BigInt q_n;
  double lhs = 0.0;        ///< |sum_{j<q_n} f(x + j alpha) - q_n integral f|
  double lhs_upper = 0.0;  ///< certified upper bound on lhs
  double bound = 0.0;      ///< Var f
  bool pass = false;       ///< lhs_upper <= Var f, no extra tolerance
  bool exact_path = false;
};

DKResult denjoy_koksma_check(const BVFunction& f, const contfrac::IrrationalSpec& spec,
                             std::size_t n, const BigRational& x, const SumOptions& opts = {});

/// A fixed test function, or min((s q_n)^2, 1/||z||^2) whose cap follows
/// the checkpoint q_n.
class DKFamily {
 public:
  static DKFamily fixed(BVFunction f);
  static DKFamily inverse_sq_at_scale(unsigned scale = 2);

  bool adaptive() const { return !f_.has_value(); }
  unsigned scale() const { return scale_; }
  BVFunction at(const BigInt& q_n) const;
  std::string name() const;

 private:
  std::optional<BVFunction> f_;
  unsigned scale_ = 0;
};

/// All n in [0, n_max] from a single orbit pass (the Birkhoff sums at
/// q_0 <= q_1 <= ... are prefixes of one orbit); result[i][n] belongs to
/// families[i].
std::vector<std::vector<DKResult>> denjoy_koksma_batch(std::span<const DKFamily> families,
                                                       const contfrac::IrrationalSpec& spec,
                                                       std::size_t n_max, const BigRational& x,
                                                       const SumOptions& opts = {});

/// Several starting points at once; result[x][family][n].
std::vector<std::vector<std::vector<DKResult>>> denjoy_koksma_batch(
    std::span<const DKFamily> families, const contfrac::IrrationalSpec& spec, std::size_t n_max,
    std::span<const BigRational> xs, const SumOptions& opts = {});

std::vector<DKResult> denjoy_koksma_scan(const DKFamily& family,
                                         const contfrac::IrrationalSpec& spec, std::size_t n_max,
                                         const BigRational& x, const SumOptions& opts = {});

/// sum_inverse_sq for every k in [k_min, k_max] from one pass.
std::vector<SumReport> sum_inverse_sq_scan(const contfrac::IrrationalSpec& spec,
                                           std::size_t k_min, std::size_t k_max,
                                           const SumOptions& opts = {});

/// sum_slice_min over one slice for several caps at once.
std::vector<SumReport> sum_slice_min_multi(const contfrac::IrrationalSpec& spec, std::size_t k,
                                           std::span<const double> cs,
                                           const SumOptions& opts = {});

}  // namespace skewrig::diophantine
