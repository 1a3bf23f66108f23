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
#include "skewrig/contfrac.hpp"
#include "skewrig/diophantine.hpp"
#include "skewrig/errors.hpp"

using namespace skewrig;
using contfrac::IrrationalSpec;
namespace dio = skewrig::diophantine;

TEST_CASE("inverse square sum: frozen values") {
  // mpmath, 60 digits
  const auto g3 = dio::sum_inverse_sq(IrrationalSpec::golden(), 3);
  CHECK(g3.q_k == 3);
  CHECK(g3.value == doctest::Approx(49.596747752497687).epsilon(1e-13));
  CHECK(g3.normalized_ratio == doctest::Approx(5.5107497502775207).epsilon(1e-13));
  const auto g10 = dio::sum_inverse_sq(IrrationalSpec::golden(), 10);
  CHECK(g10.value == doctest::Approx(61359.284713608635).epsilon(1e-12));
  const auto s10 = dio::sum_inverse_sq(IrrationalSpec::sqrt2(), 10);
  CHECK(s10.q_k == 5741);
  CHECK(s10.value == doctest::Approx(225281145.07065807).epsilon(1e-12));
}

TEST_CASE("inverse l1 sum: frozen values") {
  CHECK(dio::sum_inverse_l1(IrrationalSpec::golden(), 3).value ==
        doctest::Approx(13.708203932499369).epsilon(1e-13));
  CHECK(dio::sum_inverse_l1(IrrationalSpec::sqrt2(), 10).value ==
        doctest::Approx(196746.33427585986).epsilon(1e-12));
}

TEST_CASE("exact and fast paths agree within the reported error") {
  dio::SumOptions exact, fast;
  exact.path = dio::SumPath::Exact;
  fast.path = dio::SumPath::Fast;
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const auto a = dio::sum_inverse_sq(spec, 9, exact);
    const auto b = dio::sum_inverse_sq(spec, 9, fast);
    CHECK(a.exact_path);
    CHECK_FALSE(b.exact_path);
    CHECK(std::fabs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-9 * a.value);
    const auto c = dio::sum_slice_min(spec, 9, 3.0, exact);
    const auto d = dio::sum_slice_min(spec, 9, 3.0, fast);
    CHECK(std::fabs(c.value - d.value) <= c.error_bound + d.error_bound + 1e-9 * c.value);
  }
}

TEST_CASE("exact path is symmetric in q") {
  dio::SumOptions exact;
  exact.path = dio::SumPath::Exact;
  CHECK(dio::sum_inverse_sq(IrrationalSpec::sqrt2(), 8, exact).symmetric);
}

TEST_CASE("inverse square ratio stays above its floor") {
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    for (std::size_t k = 3; k <= 14; ++k) {
      CHECK(dio::sum_inverse_sq(spec, k).normalized_ratio >= dio::inverse_sq_ratio_floor(spec, k));
    }
  }
}

TEST_CASE("slice sums: cap scaling") {
  const auto spec = IrrationalSpec::golden();
  const std::vector<double> cs{1.0, 5.0, 89.0};
  const auto rows = dio::sum_slice_min_multi(spec, 10, cs);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value <= rows[1].value);
  CHECK(rows[1].value <= rows[2].value);
  for (const auto& r : rows) CHECK(r.normalized_ratio > 0.0);
}

TEST_CASE("property: Denjoy-Koksma holds for random rational starts") {
  testgen::Gen g(21);
  const std::vector<dio::BVFunction> fs{
      dio::BVFunction::cosine(),
      dio::BVFunction::capped_inverse(BigRational(50)),
      dio::BVFunction::piecewise_linear({{BigRational(0), BigRational(0)},
                                         {BigRational(1, 2), BigRational(1)}}),
  };
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    for (int trial = 0; trial < 10; ++trial) {
      const BigRational x = g.rational(1000);
      for (const auto& f : fs) {
        const std::size_t n = static_cast<std::size_t>(g.integer(1, 10));
        const auto r = dio::denjoy_koksma_check(f, spec, n, x);
        CHECK_MESSAGE(r.pass, f.name(), " n=", n);
        CHECK(r.lhs <= r.lhs_upper);
      }
    }
  }
}

TEST_CASE("Denjoy-Koksma: constants have zero discrepancy") {
  const auto r = dio::denjoy_koksma_check(dio::BVFunction::constant(2.5), IrrationalSpec::golden(), 8,
                                          BigRational(1, 3));
  CHECK(r.lhs == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.pass);
}

TEST_CASE("BV functions: variation and integral") {
  const auto pl = dio::BVFunction::piecewise_linear(
      {{BigRational(0), BigRational(0)}, {BigRational(1, 2), BigRational(1)}});
  CHECK(pl.variation() == 2);
  CHECK(pl.integral().contains(BigRational(1, 2)));
  CHECK(pl.eval_exact(BigRational(1, 4)) == BigRational(1, 2));
  CHECK(dio::BVFunction::cosine().variation() == 4);
}

TEST_CASE("invalid slice arguments") {
  CHECK_THROWS_AS(dio::sum_slice_min(IrrationalSpec::golden(), 5, -1.0), InvalidArgument);
}
