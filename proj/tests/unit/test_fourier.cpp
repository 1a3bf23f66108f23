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
#include <fstream>

#include "doctest.h"
#include "gen.hpp"
#include "skewrig/errors.hpp"
#include "skewrig/fourier.hpp"

using namespace skewrig;

TEST_CASE("cosine evaluates to cos(2 pi x)") {
  const auto c = FourierObservable::cosine();
  for (double x : {0.0, 0.1, 0.25, 0.7}) CHECK(c(x) == doctest::Approx(std::cos(2 * M_PI * x)));
  CHECK(c.coeff_l1() == doctest::Approx(1.0));
  CHECK(c.lipschitz() == doctest::Approx(2 * M_PI));
  CHECK(c.variation_bound() == doctest::Approx(4.0));
}

TEST_CASE("property: evaluation is real and matches the mode sum") {
  testgen::Gen g(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto phi = g.trig(12, 1.0, g.uniform(-1, 1));
    const double x = g.uniform();
    double want = phi.mean();
    for (const auto& m : phi.modes()) {
      want += 2.0 * std::real(m.c * std::polar(1.0, 2 * M_PI * static_cast<double>(m.q) * x));
    }
    CHECK(phi(x) == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::fabs(phi(x) - phi.mean()) <= phi.coeff_l1() + 1e-12);
  }
}

TEST_CASE("random envelope family respects its envelope") {
  const auto phi = FourierObservable::random_envelope(1.0, 1.5, 7);
  CHECK(phi.modes().size() == 50);
  for (const auto& m : phi.modes()) {
    CHECK(std::abs(m.c) <= phi.envelope_at(m.q));
    CHECK(std::abs(m.c) == doctest::Approx(std::pow(static_cast<double>(m.q), -1.5)));
  }
  const auto again = FourierObservable::random_envelope(1.0, 1.5, 7);
  CHECK(again.modes()[17].c == phi.modes()[17].c);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(FourierObservable(0.0, {{0, {1.0, 0.0}}}), InvalidArgument);
  CHECK_THROWS_AS(FourierObservable(0.0, {{1, {1.0, 0.0}}, {1, {0.5, 0.0}}}), InvalidArgument);
  CHECK_THROWS_AS(FourierObservable(0.0, {{2, {1.0, 0.0}}}, PowerEnvelope{1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(FourierObservable(NAN, {}), InvalidArgument);
}

TEST_CASE("parse_phi forms") {
  CHECK(parse_phi("zero").trivial());
  CHECK(parse_phi("cos")(0.0) == doctest::Approx(1.0));
  const auto t = parse_phi("trig:1=0.5,0;-2=0,0.25;c0=0.3");
  CHECK(t.mean() == doctest::Approx(0.3));
  REQUIRE(t.modes().size() == 2);
  CHECK(t.modes()[1].c.imag() == doctest::Approx(-0.25));
  CHECK(parse_phi("envelope:1,2,5,10").modes().size() == 10);
  CHECK_THROWS_AS(parse_phi("nonsense"), InvalidArgument);
}

TEST_CASE("parse_phi reads JSON files") {
  const std::string path = "fourier_test_phi.json";
  {
    std::ofstream out(path);
    out << R"({"c0": 0.1, "coeffs": [[1, 0.5, 0.0], [3, 0.0, 0.1]], "envelope": {"A": 1, "exponent": 2}})";
  }
  const auto phi = parse_phi("file:" + path);
  CHECK(phi.mean() == doctest::Approx(0.1));
  CHECK(phi.q_max() == 3);
  std::remove(path.c_str());
}
