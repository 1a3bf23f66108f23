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

#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "skewrig/mobius.hpp"

using namespace skewrig;

TEST_CASE("mu on 1..10") {
  const auto t = mobius::sieve(10);
  const int want[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
  for (std::size_t n = 1; n <= 10; ++n) CHECK(t(n) == want[n - 1]);
}

TEST_CASE("sieve agrees with trial division") {
  const auto t = mobius::sieve(20000);
  for (std::size_t n = 1; n <= 20000; ++n) REQUIRE(t(n) == mobius::mobius_trial(n));
}

TEST_CASE("Mertens values") {
  const auto t = mobius::sieve(1000000);
  CHECK(mobius::mertens(t, 10000) == -23);  // sympy
  CHECK(mobius::mertens(t, 1000000) == 212);
}

TEST_CASE("property: multiplicativity on coprime pairs") {
  testgen::Gen g(51);
  for (int i = 0; i < 200; ++i) {
    const auto a = static_cast<std::uint64_t>(g.integer(1, 3000));
    const auto b = static_cast<std::uint64_t>(g.integer(1, 3000));
    if (std::gcd(a, b) != 1) continue;
    CHECK(mobius::mobius_trial(a * b) == mobius::mobius_trial(a) * mobius::mobius_trial(b));
  }
}

TEST_CASE("disjointness averages: checkpoints are prefixes") {
  const auto alpha = contfrac::IrrationalSpec::golden();
  const auto phi = FourierObservable::cosine(0.5);
  const auto full = mobius::disjointness_sum(alpha, phi, 1, 1, 0.0, 0.0, {100, 1000});
  const auto part = mobius::disjointness_sum(alpha, phi, 1, 1, 0.0, 0.0, {100});
  REQUIRE(full.checkpoints.size() == 2);
  CHECK(std::abs(full.checkpoints[0].average - part.checkpoints[0].average) < 1e-15);
  // f = 1 reduces to the Mertens average.
  const auto flat = mobius::disjointness_sum(alpha, phi, 0, 0, 0.0, 0.0, {10000});
  CHECK(flat.checkpoints[0].average.real() == doctest::Approx(-23.0 / 10000.0));
}
