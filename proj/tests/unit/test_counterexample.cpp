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
#include "skewrig/counterexample.hpp"
#include "skewrig/errors.hpp"

using namespace skewrig;
using contfrac::IrrationalSpec;
namespace ce = skewrig::counterexample;

TEST_CASE("normalizing constant for golden") {
  // mpmath: 1 + 32 (sum_{k=2}^{64} (log F_k)^-2 + (4 / ln^2 2) / 63)
  const auto cp = ce::build(IrrationalSpec::golden(), 26);
  CHECK(cp.C == doctest::Approx(144.45477391092123).epsilon(1e-12));
  CHECK(cp.variation_bound < 1.0);
  CHECK(cp.q.size() == 27);
}

TEST_CASE("lower bound table: frozen row and small-case regime") {
  const auto cp = ce::build(IrrationalSpec::golden(), 26);
  const auto rows = ce::lower_bound_table(cp, 8, 24);
  REQUIRE(rows.size() == 17);
  // mpmath Parseval sum over the 25 modes at r = 89; the table adds a tail bound.
  const auto& r10 = rows[2];
  CHECK(r10.q_n == 89);
  CHECK(r10.D_hat >= 2.612979684574294e-05);
  CHECK(r10.D_hat == doctest::Approx(2.612979684574294e-05).epsilon(1e-3));
  for (const auto& r : rows) {
    CHECK(r.small_case);
    CHECK(r.max_abs_S < 0.5);
    CHECK(r.normalized == doctest::Approx(r.D_hat * std::pow(std::log(double(r.q_n)), 4)));
  }
}

TEST_CASE("counterexample arguments") {
  CHECK_THROWS_AS(ce::build(IrrationalSpec::golden(), 2), InvalidArgument);
  const auto cp = ce::build(IrrationalSpec::golden(), 12);
  CHECK_THROWS_AS(ce::lower_bound_table(cp, 8, 12), InvalidArgument);
}
