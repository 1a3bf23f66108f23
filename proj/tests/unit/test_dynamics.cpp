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
#include "skewrig/dynamics.hpp"
#include "skewrig/errors.hpp"

using namespace skewrig;
using contfrac::IrrationalSpec;
namespace dyn = skewrig::dynamics;

namespace {

double circle_gap(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("frozen Birkhoff sum and D-hat values") {
  // mpmath, 60 digits
  const FixedRotation rot(IrrationalSpec::golden());
  const auto c = FourierObservable::cosine();
  CHECK(dyn::birkhoff_direct(c, rot, 0.1, 13) == doctest::Approx(0.041434851163518286).epsilon(1e-12));
  const auto h = dyn::rigidity_l2_hat(rot, c, 5);
  CHECK(h.value == doctest::Approx(0.053096517235679699).epsilon(1e-12));
  CHECK(h.tail == 0.0);
}

TEST_CASE("property: r-fold map equals the cocycle") {
  testgen::Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = g.trig(6, 0.5, g.uniform(-1, 1));
    const FixedRotation rot(g.surd());
    const std::int64_t r = g.integer(1, 200);
    dyn::Point p{g.uniform(), g.uniform()};
    const dyn::Point p0 = p;
    for (std::int64_t i = 0; i < r; ++i) p = dyn::apply(rot, phi, p);
    CHECK(circle_gap(p.x, rot.rotate(p0.x, r)) < 1e-12);
    const double y = p0.y + dyn::birkhoff_direct(phi, rot, p0.x, r);
    CHECK(circle_gap(p.y, y - std::floor(y)) < 1e-9);
  }
}

TEST_CASE("property: Fourier and direct Birkhoff sums agree") {
  testgen::Gen g(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto phi = g.trig(10, 1.0, g.uniform(-1, 1));
    const FixedRotation rot(g.surd());
    const std::int64_t r = g.integer(1, 5000);
    const double x = g.uniform();
    const auto f = dyn::birkhoff_fourier(phi, rot, x, r);
    CHECK(f.value == doctest::Approx(dyn::birkhoff_direct(phi, rot, x, r)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("property: Parseval and quadrature agree for small Birkhoff sums") {
  testgen::Gen g(43);
  const FixedRotation rot(IrrationalSpec::golden());
  const auto q = contfrac::denominators(IrrationalSpec::golden(), 12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = g.trig(8, 0.05);
    const std::int64_t r = q[static_cast<std::size_t>(g.integer(4, 12))];
    const auto hat = dyn::rigidity_l2_hat(rot, phi, r);
    const auto quad = dyn::rigidity_l2_direct(rot, phi, r, 1024);
    CHECK(quad.value == doctest::Approx(hat.value).epsilon(1e-3));
  }
}

TEST_CASE("sup bound dominates the L2 distance") {
  const FixedRotation rot(IrrationalSpec::sqrt2());
  const auto phi = FourierObservable::random_envelope(0.2, 1.5, 3);
  for (std::int64_t r : {5, 12, 29, 70, 169}) {
    const auto s = dyn::rigidity_sup(rot, phi, r, 512);
    CHECK(std::sqrt(dyn::rigidity_l2_direct(rot, phi, r, 512).value) <= s.value + 1e-12);
  }
}

TEST_CASE("geometric factor at r = 1 is one") {
  const FixedRotation rot(IrrationalSpec::golden());
  for (std::int64_t q : {1, 2, 7}) CHECK(std::abs(dyn::geometric_factor(rot, q, 1)) == doctest::Approx(1.0));
}

TEST_CASE("ell search") {
  const auto spec = IrrationalSpec::golden();
  const auto e = dyn::choose_ell(spec, 11, 0.25, 0.0005);
  CHECK(e.ell == 1);
  CHECK(e.residual == doctest::Approx(0.0));
  // c0 = 1/3, q_n = 1: ell = 3 is the first exact hit.
  const auto t = dyn::choose_ell_q(1, 1, 1.0 / 3.0, [](std::size_t, std::int64_t) {
    return dyn::EllBounds{10.0, 1e-9};
  });
  CHECK(t.ell == 3);
  CHECK_FALSE(t.relaxed);
  CHECK_THROWS_AS(dyn::choose_ell_q(1, 1, 0.3, [](std::size_t, std::int64_t) {
                    return dyn::EllBounds{0.5, 0.1};
                  }),
                  NoSolution);
}

TEST_CASE("rigidity sequence for cos: decaying and within range") {
  dyn::RigidityConfig cfg;
  cfg.n_min = 3;
  cfg.n_max = 12;
  const auto seq = dyn::build_rigidity_sequence(IrrationalSpec::golden(), FourierObservable::cosine(), cfg);
  REQUIRE(seq.entries.size() == 10);
  CHECK_FALSE(seq.out_of_hypothesis);
  for (std::size_t i = 1; i < seq.entries.size(); ++i) {
    CHECK(seq.entries[i].D_l2_hat < seq.entries[i - 1].D_l2_hat);
    CHECK(seq.entries[i].D_sup <= 1.0);
  }
  cfg.eps = 0.5;
  CHECK(dyn::build_rigidity_sequence(IrrationalSpec::golden(), FourierObservable::cosine(), cfg)
            .out_of_hypothesis);
  cfg.n_min = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("PR check: quadrature sum obeys the k^2 scaling") {
  dyn::RigidityConfig cfg;
  cfg.n_min = 4;
  cfg.n_max = 10;
  for (const auto& row : dyn::pr_rigidity_check(IrrationalSpec::golden(), FourierObservable::cosine(), cfg, 1, 1)) {
    CHECK(row.scaling_ok);
    CHECK(row.direct_sum <= row.bound_sum * (1 + 1e-9) + 1e-12);
  }
}

TEST_CASE("property: equidistribution bound") {
  testgen::Gen g(44);
  const FixedRotation rot(IrrationalSpec::sqrt2());
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = dyn::equidistribution_check(rot, g.uniform(), g.integer(1, 3000), g.integer(1, 5));
    CHECK(r.pass);
  }
}
