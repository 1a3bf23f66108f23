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

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skewrig/rotation.hpp"

namespace skewrig {

/// c_q for one positive frequency q; c_{-q} is its conjugate.
struct Mode {
  std::int64_t q = 0;
  std::complex<double> c;
};

/// |c_q| <= A / |q|^exponent.
struct PowerEnvelope {
  double A = 1.0;
  double exponent = 2.0;
};

/// |c_q| <= 1 / (|q| psi(|q|)), psi nondecreasing and unbounded.
struct PsiEnvelope {
  std::string label;
  std::function<double(double)> psi;
};

using Envelope = std::variant<std::monostate, PowerEnvelope, PsiEnvelope>;

/// Real trigonometric polynomial c_0 + sum_{q != 0} c_q e(qx) with
/// Hermitian coefficients. Only q > 0 is stored, sorted by q.
class FourierObservable {
 public:
  FourierObservable() = default;
  /// Throws InvalidArgument on q <= 0, duplicate q, non-finite values, or a
  /// coefficient above the declared envelope.
  FourierObservable(double c0, std::vector<Mode> modes, Envelope envelope = {});

  static FourierObservable constant(double c0) { return FourierObservable(c0, {}); }
  /// cos(2 pi x): c_{+-1} = 1/2.
  static FourierObservable cosine(double amplitude = 1.0, double c0 = 0.0);
  /// |c_q| = A q^-exponent for 1 <= q <= modes with phases from a seeded
  /// 64-bit Mersenne twister.
  static FourierObservable random_envelope(double A, double exponent, std::uint64_t seed,
                                           std::int64_t modes = 50, double c0 = 0.0);

  double mean() const { return c0_; }
  std::span<const Mode> modes() const { return modes_; }
  std::int64_t q_max() const { return modes_.empty() ? 0 : modes_.back().q; }
  const Envelope& envelope() const { return envelope_; }
  bool trivial() const { return modes_.empty(); }

  /// Declared bound on |c_q| (q > 0); +inf without an envelope.
  double envelope_at(std::int64_t q) const;

  FourierObservable mean_zero() const { return FourierObservable(0.0, modes_, envelope_); }
  FourierObservable with_mean(double c0) const { return FourierObservable(c0, modes_, envelope_); }

  double operator()(double x) const { return at_phase(FixedRotation::from_unit(x)); }
  /// phi at the point with 128-bit phase x; q x is formed exactly.
  double at_phase(u128 x) const;
  /// phi - c_0 at x.
  double oscillation_at(u128 x) const;

  /// sum over q != 0 of |c_q|, i.e. a bound on sup |phi - c_0|.
  double coeff_l1() const { return 2.0 * suffix_l1_.front(); }
  /// sum over |q| > Q of |c_q| (stored modes).
  double tail_l1(std::int64_t Q) const;
  /// sup |phi'| <= 2 pi sum |q| |c_q|.
  double lipschitz() const { return lipschitz_; }
  /// Total variation bound sum_{q > 0} 8 q |c_q|.
  double variation_bound() const { return variation_; }

  std::string describe() const;

 private:
  double c0_ = 0.0;
  std::vector<Mode> modes_;
  Envelope envelope_;
  std::vector<double> suffix_l1_{0.0};
  double lipschitz_ = 0.0;
  double variation_ = 0.0;
};

/// Parses `zero`, `cos`, `trig:q1=re,im;q2=re,im;c0=v`,
/// `envelope:A,exponent,seed[,modes[,c0]]` and `file:<path>`. The file
/// holds JSON, either a list of [q, re, im] triples or an object with
/// "c0", "coeffs" and optional "envelope": {"A", "exponent"}.
FourierObservable parse_phi(const std::string& text);

}  // namespace skewrig
