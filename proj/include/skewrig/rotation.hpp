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

#include <cmath>
#include <cstdint>

#include "skewrig/bignum.hpp"
#include "skewrig/contfrac.hpp"

namespace skewrig {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

/// Rotation by alpha on the circle with alpha mod 1 stored as a 128-bit
/// binary fraction. frac(x + m alpha) is computed as an exact wrapping
/// product, so orbits never drift. With the stored step within e of
/// alpha mod 1, frac(m alpha) is within (|m| + 1) * e (e = 2^-128 unless
/// alpha itself is only known more coarsely).
class FixedRotation {
 public:
  explicit FixedRotation(const contfrac::IrrationalSpec& spec);

  static FixedRotation from_step(u128 step) { return FixedRotation(step); }

  u128 step() const { return step_; }

  u128 phase(std::int64_t m) const { return step_ * static_cast<u128>(static_cast<i128>(m)); }
  /// Phase of (a * b) alpha without forming a * b.
  u128 phase(std::int64_t a, std::int64_t b) const {
    return phase(a) * static_cast<u128>(static_cast<i128>(b));
  }

  double frac(std::int64_t m) const { return to_unit(phase(m)); }
  double signed_frac(std::int64_t m) const { return to_signed(phase(m)); }
  double dist(std::int64_t m) const { return std::fabs(signed_frac(m)); }
  double alpha() const { return to_unit(step_); }

  /// frac(x + m alpha) for x in [0, 1).
  double rotate(double x, std::int64_t m) const { return to_unit(from_unit(x) + phase(m)); }

  /// Upper bound on |frac(m alpha) - true value| before conversion to double.
  double phase_error(double abs_m) const { return (abs_m + 1.0) * step_error_; }
  /// |stored step - alpha mod 1|, at least 2^-128.
  double step_error() const { return step_error_; }

  static u128 from_unit(double x);
  static u128 from_rational(const BigRational& x);
  // Conversions go through signed 64-bit integers (cheap on x86-64); the
  // lowest two bits are dropped, an error below 2^-125.
  static double to_unit(u128 v) {
    return static_cast<double>(static_cast<std::int64_t>(v >> 65)) * 0x1p-63 +
           static_cast<double>(static_cast<std::int64_t>((v >> 2) & kLow63)) * 0x1p-126;
  }
  /// Representative in [-1/2, 1/2).
  static double to_signed(u128 v) {
    const std::int64_t hi = static_cast<std::int64_t>(static_cast<i128>(v) >> 64);
    return static_cast<double>(hi) * 0x1p-64 +
           static_cast<double>(static_cast<std::int64_t>(static_cast<std::uint64_t>(v) >> 1)) *
               0x1p-127;
  }
  /// ||v|| as a double.
  static double to_dist(u128 v) {
    const u128 a = (static_cast<i128>(v) < 0) ? static_cast<u128>(-v) : v;
    return to_unit(a);
  }
  /// ||v|| from the high word only; absolute error below 2^-64 plus one
  /// rounding.
  static double to_dist_coarse(u128 v) {
    return std::fabs(static_cast<double>(static_cast<std::int64_t>(v >> 64))) * 0x1p-64;
  }
  /// frac(v) from the high word only; same error as to_dist_coarse.
  static double to_unit_coarse(u128 v) {
    return static_cast<double>(static_cast<std::int64_t>(v >> 65)) * 0x1p-63;
  }

 private:
  static constexpr u128 kLow63 = (static_cast<u128>(1) << 63) - 1;

  explicit FixedRotation(u128 step) : step_(step) {}

  u128 step_;
  double step_error_ = 0x1p-128;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace skewrig
