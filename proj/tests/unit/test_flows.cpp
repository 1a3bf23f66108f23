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
#include "skewrig/errors.hpp"
#include "skewrig/flows.hpp"

using namespace skewrig;
using contfrac::IrrationalSpec;
namespace fl = skewrig::flows;

namespace {

fl::RoofFunction roof_cos(double amp, double beta) {
  return fl::RoofFunction(FourierObservable::cosine(amp, beta));
}

}  // namespace

TEST_CASE("roof validation") {
  CHECK_THROWS_AS(roof_cos(1.0, 0.5), InvalidArgument);
  const auto r = roof_cos(0.3, 1.0);
  CHECK(r.min_value() > 0.69);
  CHECK(r.min_value() <= 0.7);
  CHECK(r.beta() == 1.0);
}

TEST_CASE("property: semigroup") {
  testgen::Gen g(61);
  const FixedRotation rot(IrrationalSpec::golden());
  const auto roof = roof_cos(0.3, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = g.uniform();
    const fl::SpecialFlowPoint p{x, g.uniform(0.0, 0.7)};
    const double t = g.uniform(-50, 50), s = g.uniform(-50, 50);
    const auto a = fl::special_flow_step(rot, roof, fl::special_flow_step(rot, roof, p, t), s);
    const auto b = fl::special_flow_step(rot, roof, p, t + s);
    CHECK(fl::quotient_distance(rot, roof, a, b) < 1e-9);
  }
}

TEST_CASE("property: step brackets and displacement budget") {
  testgen::Gen g(62);
  const FixedRotation rot(IrrationalSpec::sqrt2());
  const auto roof = roof_cos(0.2, 1.5);
  for (int i = 0; i < 100; ++i) {
    const fl::SpecialFlowPoint p{g.uniform(), g.uniform(0.0, 1.2)};
    const double t = g.uniform(-3, 3);
    const auto st = fl::special_flow_step_detail(rot, roof, p, t);
    CHECK(st.S_N <= p.s + t);
    CHECK(p.s + t < st.S_next);
    CHECK(fl::quotient_distance(rot, roof, st.point, p) <= std::fabs(t) + 1e-12);
  }
}

TEST_CASE("long jumps agree with the Birkhoff sum") {
  const FixedRotation rot(IrrationalSpec::golden());
  const auto roof = roof_cos(0.3, 1.0);
  const auto st = fl::special_flow_step_detail(rot, roof, {0.2, 0.0}, 1e6);
  CHECK(st.S_N == doctest::Approx(fl::roof_sum(rot, roof, 0.2, st.N)));
  CHECK(std::llabs(st.N - 1000000) < 10);
}

TEST_CASE("constant roof is a linear flow") {
  const FixedRotation rot(IrrationalSpec::golden());
  const fl::RoofFunction roof(FourierObservable::constant(2.0));
  const auto p = fl::special_flow_step(rot, roof, {0.1, 0.5}, 7.0);
  CHECK(p.s == doctest::Approx(1.5));
  CHECK(p.x == doctest::Approx(rot.rotate(0.1, 3)));
}

TEST_CASE("flow rigidity with t / (q beta) = 1 / q") {
  const auto rows = fl::flow_rigidity(IrrationalSpec::golden(), roof_cos(0.3, 1.0), 1.0, 5e-6, 4, 12);
  for (const auto& r : rows) {
    CHECK(r.v_n == r.q_n);
    CHECK(r.j_n == 1);
    CHECK(r.time_error < 1e-9);
    CHECK(r.measured <= r.bound + 1e-9);
  }
}

TEST_CASE("Rokhlin extension with linear flow is a skew product") {
  const auto f = FourierObservable::cosine(0.5);
  const auto rows = fl::rokhlin_rigidity(IrrationalSpec::golden(), f, fl::LinearFlow{1.0}, 4, 12, 0.005);
  for (const auto& r : rows) {
    CHECK(r.measured <= r.bound + 1e-12);
    CHECK(r.rotation > 0.0);
  }
  CHECK(std::get<fl::LinearFlow>(fl::parse_flow("linear:2.5")).c == 2.5);
  CHECK_THROWS_AS(fl::parse_flow("warp"), InvalidArgument);
}
