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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skewrig/contfrac.hpp"
#include "skewrig/fourier.hpp"

namespace skewrig::mobius {

class MobiusTable {
 public:
  MobiusTable() = default;
  explicit MobiusTable(std::vector<std::int8_t> mu) : mu_(std::move(mu)) {}

  std::size_t size() const { return mu_.empty() ? 0 : mu_.size() - 1; }
  /// mu(n) for 1 <= n <= size().
  int operator()(std::size_t n) const { return mu_[n]; }
  std::span<const std::int8_t> values() const { return {mu_.data() + 1, size()}; }

 private:
  std::vector<std::int8_t> mu_;  // index 0 unused
};

/// Linear sieve for mu(1..N).
MobiusTable sieve(std::size_t N);

/// mu(n) by trial division.
int mobius_trial(std::uint64_t n);

/// M(N) = sum_{n <= N} mu(n).
std::int64_t mertens(const MobiusTable& table, std::size_t N);

struct Checkpoint {
  std::size_t N = 0;
  std::complex<double> average;  ///< (1/N) sum_{n <= N} f(T^n(x0, y0)) mu(n)
};

struct DecayProfile {
  std::vector<Checkpoint> checkpoints;
};

/// One orbit pass for f = e(a x + b y). Both coordinates advance as exact
/// 128-bit phases, so x_N is x0 + N alpha up to the stored step error.
/// Uses `table` when it covers max(checkpoints), else sieves.
DecayProfile disjointness_sum(const contfrac::IrrationalSpec& alpha, const FourierObservable& phi,
                              std::int64_t a, std::int64_t b, double x0, double y0,
                              std::vector<std::size_t> checkpoints,
                              const MobiusTable* table = nullptr);

}  // namespace skewrig::mobius
