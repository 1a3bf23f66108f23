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

#include "skewrig/rotation.hpp"

#include "skewrig/errors.hpp"

namespace skewrig {

namespace {

u128 low128(const BigInt& n) {
  // n mod 2^128 as two 64-bit limbs.
  BigInt m = n % pow2(128);
  if (sgn(m) < 0) m += pow2(128);
  const BigInt hi = m >> 64;
  const BigInt lo = m - (hi << 64);
  return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
         static_cast<u128>(mpz_get_ui(lo.get_mpz_t()));
}

}  // namespace

FixedRotation::FixedRotation(const contfrac::IrrationalSpec& spec) : step_(0) {
  unsigned bits = 160;
  for (;;) {
    try {
      const Interval iv = spec.bracket(bits);
      step_ = from_rational(iv.lo);
      if (bits < 160) step_error_ = std::ldexp(1.0, -static_cast<int>(bits)) + 0x1p-128;
      return;
    } catch (const PrecisionExhausted&) {
      if (bits <= 40) throw;
      bits -= 8;
    }
  }
}

u128 FixedRotation::from_rational(const BigRational& x) {
  const BigRational scaled = x * BigRational(pow2(128));
  return low128(floor(scaled));
}

u128 FixedRotation::from_unit(double x) {
  x -= std::floor(x);
  if (x >= 1.0) x = 0.0;
  // x * 2^64 < 2^64 is exact up to the double's own resolution.
  const double hi = std::floor(std::ldexp(x, 64));
  const double rest = std::ldexp(x, 64) - hi;
  u128 v = static_cast<u128>(static_cast<std::uint64_t>(hi)) << 64;
  v |= static_cast<u128>(static_cast<std::uint64_t>(std::ldexp(rest, 64)));
  return v;
}

}  // namespace skewrig
