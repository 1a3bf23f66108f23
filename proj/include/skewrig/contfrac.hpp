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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skewrig/bignum.hpp"

namespace skewrig {

/// Closed rational interval [lo, hi].
struct Interval {
  BigRational lo;
  BigRational hi;

  BigRational width() const { return hi - lo; }
  bool contains(const BigRational& x) const { return lo <= x && x <= hi; }
};

/// An element (a + b*sqrt(d)) / c of a real quadratic field, c > 0.
/// With b == 0 it is an ordinary rational.
class SurdValue {
 public:
  SurdValue(BigInt a, BigInt b, BigInt d, BigInt c);

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& d() const { return d_; }
  const BigInt& c() const { return c_; }

  BigInt floor() const;
  int sign() const;
  SurdValue operator-(const BigRational& r) const;
  SurdValue operator+(const BigRational& r) const { return *this - BigRational(-r); }
  SurdValue negated() const { return SurdValue(-a_, -b_, d_, c_); }
  SurdValue scaled(const BigInt& k) const { return SurdValue(a_ * k, b_ * k, d_, c_); }

  /// Rational bracket of width at most 2^-bits.
  Interval bracket(unsigned bits) const;
  double to_double() const;
  std::string to_string() const;

  /// Exact three-way comparison; both operands must share d (or be rational).
  friend int compare(const SurdValue& x, const SurdValue& y);
  friend int compare(const SurdValue& x, const BigRational& r) { return (x - r).sign(); }

 private:
  BigInt a_, b_, d_, c_;
};

/// floor((a + b*sqrt(d)) / c) exactly; d must be a non-square when b != 0.
BigInt floor_surd(const BigInt& a, const BigInt& b, const BigInt& d, const BigInt& c);

namespace contfrac {

/// (a + b*sqrt(d)) / c with d > 0 not a perfect square.
struct QuadraticSurd {
  BigInt a, b, d, c;
};

/// Partial quotients given explicitly. `rule(i)` supplies a_i for
/// i >= prefix.size(); an empty rule means only the prefix is known.
struct ExplicitCF {
  std::vector<BigInt> prefix;
  std::function<BigInt(std::size_t)> rule;
};

/// A decimal string `digits` with |alpha - digits| <= error.
struct DecimalApprox {
  std::string digits;
  BigRational error;
};

class IrrationalSpec {
 public:
  using Variant = std::variant<QuadraticSurd, ExplicitCF, DecimalApprox>;

  static IrrationalSpec surd(BigInt a, BigInt b, BigInt d, BigInt c);
  static IrrationalSpec explicit_cf(std::vector<BigInt> prefix,
                                    std::function<BigInt(std::size_t)> rule = {});
  /// Prefix followed by a repeating block, e.g. [1; 2, 2, ...].
  static IrrationalSpec periodic_cf(std::vector<BigInt> prefix, std::vector<BigInt> period);
  static IrrationalSpec decimal(std::string digits, BigRational error);

  static IrrationalSpec golden();  ///< (1 + sqrt 5) / 2
  static IrrationalSpec sqrt2();
  static IrrationalSpec e(unsigned digits = 300);

  const Variant& variant() const { return value_; }
  const std::string& label() const { return label_; }
  bool is_surd() const { return std::holds_alternative<QuadraticSurd>(value_); }
  bool is_decimal() const { return std::holds_alternative<DecimalApprox>(value_); }

  /// alpha itself, when it is a quadratic surd.
  std::optional<SurdValue> exact() const;

  /// Rational interval containing alpha of width <= 2^-bits.
  /// Throws PrecisionExhausted when the representation cannot deliver it.
  Interval bracket(unsigned bits) const;

  /// Partial quotient a_i for explicit expansions (no certification needed).
  BigInt explicit_quotient(std::size_t i) const;

 private:
  IrrationalSpec(Variant v, std::string label);

  Variant value_;
  std::string label_;
  BigRational decimal_value_;  // parsed digits, DecimalApprox only
};

/// Parses `golden`, `sqrt2`, `e`, `surd:a,b,d,c`, `cf:a0,a1,...`,
/// `dec:<digits>@<err>`.
IrrationalSpec parse_alpha(const std::string& text);

/// floor(e * 10^digits) rendered as "2.718...", i.e. e truncated.
std::string e_decimal_digits(unsigned digits);

/// Partial quotients a_0 .. a_{n_terms} (n_terms + 1 entries).
std::vector<BigInt> expand(const IrrationalSpec& spec, std::size_t n_terms);

struct Convergent {
  std::size_t n = 0;
  BigInt p;
  BigInt q;
};

/// p_n / q_n for n = 0..n_max from a_0..a_{n_max}.
std::vector<Convergent> convergents(std::span<const BigInt> quotients, std::size_t n_max);

/// q_0 .. q_{n_max} as machine integers. Throws InvalidArgument when a
/// denominator exceeds 2^62.
std::vector<std::int64_t> denominators(const IrrationalSpec& spec, std::size_t n_max);

/// Bracket of ||q alpha||. For quadratic surds `value` holds the exact
/// element of Q(sqrt d).
struct NormValue {
  BigRational lo;
  BigRational hi;
  bool exact_flag = false;
  std::optional<SurdValue> value;

  double approx() const;
};

/// ||q alpha|| with q >= 1; bracket width <= 2^-precision_bits.
NormValue dist_nearest_int(const BigInt& q, const IrrationalSpec& spec, unsigned precision_bits);

/// ||x + q alpha|| for any integer q and rational shift x.
NormValue dist_nearest_int(const BigInt& q, const BigRational& shift, const IrrationalSpec& spec,
                           unsigned precision_bits);

/// Bracket of frac(x + q alpha) in [0, 1]; width <= 2^-precision_bits.
/// For surds the exact value is returned in `exact`.
struct FracValue {
  Interval bracket;
  std::optional<SurdValue> exact;
};
FracValue frac(const BigInt& q, const BigRational& shift, const IrrationalSpec& spec,
               unsigned precision_bits);

/// Outcome of the q_{k+1} >= q_k^2 growth test over a finite horizon.
struct GrowthClass {
  bool case1 = false;
  std::vector<std::size_t> indices;  ///< qualifying k (Case 1 only)
};

/// Case 1 when at least `min_hits` indices 1 <= k <= horizon with q_k >= 2
/// satisfy q_{k+1} >= q_k^2; Case 2 otherwise.
GrowthClass classify_growth(std::span<const BigInt> quotients, std::size_t horizon,
                            std::size_t min_hits = 3);

}  // namespace contfrac
}  // namespace skewrig
