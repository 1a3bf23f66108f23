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
#include "skewrig/bignum.hpp"
#include "skewrig/contfrac.hpp"
#include "skewrig/errors.hpp"

using namespace skewrig;
using contfrac::IrrationalSpec;

namespace {

// Euclid on a rational truncation; agrees with alpha's expansion while
// both ends of the bracket share the same quotients.
std::vector<BigInt> euclid(BigRational x, std::size_t n) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i <= n; ++i) {
    const BigInt a = floor(x);
    out.push_back(a);
    x -= a;
    if (x == 0) break;
    x = 1 / x;
  }
  return out;
}

}  // namespace

TEST_CASE("golden ratio expansion is all ones with Fibonacci denominators") {
  const auto a = contfrac::expand(IrrationalSpec::golden(), 30);
  REQUIRE(a.size() == 31);
  for (const auto& v : a) CHECK(v == 1);
  const auto cv = contfrac::convergents(a, 30);
  BigInt f0 = 1, f1 = 1;
  for (std::size_t n = 0; n <= 30; ++n) {
    CHECK(cv[n].q == f0);
    CHECK(cv[n].p == f1);
    const BigInt t = f0 + f1;
    f0 = f1;
    f1 = t;
  }
}

TEST_CASE("sqrt2 expansion [1; 2, 2, ...] and Pell denominators") {
  const auto a = contfrac::expand(IrrationalSpec::sqrt2(), 40);
  CHECK(a[0] == 1);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] == 2);
  const auto q = contfrac::denominators(IrrationalSpec::sqrt2(), 40);
  CHECK(q[40] == 1746860020068409LL);
}

TEST_CASE("e expansion follows [2; 1, 2, 1, 1, 4, 1, ...]") {
  const auto a = contfrac::expand(IrrationalSpec::e(), 40);
  CHECK(a[0] == 2);
  for (std::size_t i = 1; i <= 40; ++i) {
    const BigInt want = (i % 3 == 2) ? BigInt(2 * (i + 1) / 3) : BigInt(1);
    CHECK(a[i] == want);
  }
  const auto cv = contfrac::convergents(a, 40);
  CHECK(cv[40].q.get_str() == "2111421691000680031");
}

TEST_CASE("expansion matches Euclid on truncations") {
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2(), IrrationalSpec::e()}) {
    const Interval b = spec.bracket(400);
    const auto lo = euclid(b.lo, 40), hi = euclid(b.hi, 40);
    const auto a = contfrac::expand(spec, 40);
    REQUIRE(lo.size() == 41);
    for (std::size_t i = 0; i <= 40; ++i) {
      CHECK(lo[i] == hi[i]);
      CHECK(a[i] == lo[i]);
    }
  }
}

TEST_CASE("property: determinant identity for random surds") {
  testgen::Gen g(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto spec = g.surd();
    const auto a = contfrac::expand(spec, 25);
    const auto cv = contfrac::convergents(a, 25);
    for (std::size_t n = 1; n <= 25; ++n) {
      const BigInt det = cv[n].p * cv[n - 1].q - cv[n - 1].p * cv[n].q;
      CHECK(det == ((n % 2 == 1) ? 1 : -1));
    }
  }
}

TEST_CASE("property: brackets 1/(q_{n+1} + q_n) < ||q_n alpha|| < 1/q_{n+1} hold exactly") {
  testgen::Gen g(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = g.surd();
    const auto a = contfrac::expand(spec, 20);
    const auto cv = contfrac::convergents(a, 20);
    for (std::size_t n = 1; n < 20; ++n) {
      const auto d = contfrac::dist_nearest_int(cv[n].q, spec, 256);
      REQUIRE(d.value.has_value());
      const BigRational upper(1, cv[n + 1].q), lower(1, cv[n + 1].q + cv[n].q);
      CHECK(compare(*d.value, upper) < 0);
      CHECK(compare(*d.value, lower) > 0);
    }
  }
}

TEST_CASE("dist_nearest_int brackets are narrow and ordered") {
  const auto d = contfrac::dist_nearest_int(BigInt(89), IrrationalSpec::golden(), 256);
  CHECK(d.lo <= d.hi);
  CHECK(to_double(d.hi - d.lo) < 1e-60);
  CHECK(d.approx() == doctest::Approx(0.00502499874064149).epsilon(1e-13));
}

TEST_CASE("decimal input runs out of digits") {
  const auto spec = IrrationalSpec::decimal("3.1415926535897932384626433832795028841971",
                                           BigRational(1, BigInt("10000000000000000000000000000000000000000")));
  CHECK(contfrac::expand(spec, 10)[1] == 7);
  CHECK_THROWS_AS(contfrac::expand(spec, 80), PrecisionExhausted);
}

TEST_CASE("parse_alpha forms") {
  CHECK(contfrac::parse_alpha("surd:1,1,5,2").is_surd());
  CHECK(contfrac::expand(contfrac::parse_alpha("cf:0;1,2"), 4)[3] == 1);
  CHECK_THROWS_AS(contfrac::parse_alpha("pi"), InvalidArgument);
  CHECK_THROWS_AS(contfrac::parse_alpha("surd:1,2,4,1"), NotIrrational);
}

TEST_CASE("growth classification: bounded quotients are not case 1") {
  const auto a = contfrac::expand(IrrationalSpec::golden(), 30);
  CHECK_FALSE(contfrac::classify_growth(a, 29).case1);
}
