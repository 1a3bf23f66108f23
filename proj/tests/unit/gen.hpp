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

// Seeded generators for property tests.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skewrig/bignum.hpp"
#include "skewrig/contfrac.hpp"
#include "skewrig/fourier.hpp"

namespace skewrig::testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  /// p/q in [0, 1) with q <= max_den.
  BigRational rational(std::int64_t max_den) {
    const std::int64_t q = integer(1, max_den);
    BigRational r(integer(0, q - 1), q);
    r.canonicalize();
    return r;
  }
  /// Random trig polynomial with up to max_q modes and |c_q| <= scale / q^2.
  FourierObservable trig(std::int64_t max_q, double scale, double c0 = 0.0) {
    std::vector<Mode> modes;
    const std::int64_t m = integer(1, max_q);
    for (std::int64_t q = 1; q <= m; ++q) {
      if (q > 1 && uniform() < 0.3) continue;
      const double mag = scale * uniform(0.1, 1.0) / static_cast<double>(q * q);
      const double th = uniform(0.0, 6.283185307179586);
      modes.push_back({q, std::polar(mag, th)});
    }
    return FourierObservable(c0, std::move(modes));
  }
  /// A quadratic surd (a + b sqrt d) / c with small entries.
  contfrac::IrrationalSpec surd() {
    static const int squarefree[] = {2, 3, 5, 6, 7, 10, 11, 13};
    const int d = squarefree[integer(0, 7)];
    const std::int64_t b = integer(1, 3) * (uniform() < 0.5 ? -1 : 1);
    return contfrac::IrrationalSpec::surd(BigInt(integer(-5, 5)), BigInt(b), BigInt(d),
                                          BigInt(integer(1, 7)));
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace skewrig::testgen
