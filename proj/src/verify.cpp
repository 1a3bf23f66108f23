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

#include "skewrig/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "skewrig/contfrac.hpp"
#include "skewrig/counterexample.hpp"
#include "skewrig/diophantine.hpp"
#include "skewrig/dynamics.hpp"
#include "skewrig/flows.hpp"
#include "skewrig/fourier.hpp"
#include "skewrig/mobius.hpp"
#include "skewrig/rotation.hpp"

namespace skewrig::verify {

using contfrac::IrrationalSpec;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

class Suite {
 public:
  explicit Suite(std::string module) : module_(std::move(module)) {}

  template <class F>
  void run(std::vector<Check>& out, const std::string& name, F&& body) {
    Check c{module_, name, false, {}};
    try {
      body(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(c));
  }

 private:
  std::string module_;
};

u128 dist128(u128 v) {
  const u128 neg = static_cast<u128>(0) - v;
  return v < neg ? v : neg;
}

// Last quarter of the series never exceeds 1.1 x the max of the rest.
bool stabilizes(const std::vector<double>& v) {
  if (v.size() < 4) return false;
  const std::size_t cut = v.size() - v.size() / 4;
  const double head = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut));
  const double tail = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(cut), v.end());
  return tail <= 1.1 * head;
}

void contfrac_checks(std::vector<Check>& out, const VerifyOptions& opt) {
  Suite s("contfrac");
  const IrrationalSpec specs[] = {IrrationalSpec::golden(), IrrationalSpec::sqrt2(),
                                  IrrationalSpec::e()};
  s.run(out, "p1_recurrence_n40", [&](Check& c) {
    std::size_t bad = 0;
    for (const auto& sp : specs) {
      const auto a = contfrac::expand(sp, 40);
      const auto cv = contfrac::convergents(a, 40);
      for (std::size_t n = 1; n <= 40; ++n) {
        const BigInt pp = n >= 2 ? cv[n - 2].p : BigInt(1);
        const BigInt qq = n >= 2 ? cv[n - 2].q : BigInt(0);
        if (cv[n].q != a[n] * cv[n - 1].q + qq || cv[n].p != a[n] * cv[n - 1].p + pp) ++bad;
        const BigInt det = cv[n].p * cv[n - 1].q - cv[n - 1].p * cv[n].q;
        if (det != ((n % 2 == 1) ? 1 : -1)) ++bad;
      }
    }
    c.pass = bad == 0;
    c.detail = "violations=" + std::to_string(bad);
  });
  s.run(out, "golden_fibonacci", [&](Check& c) {
    const auto q = contfrac::denominators(specs[0], 40);
    std::int64_t f0 = 1, f1 = 1;
    bool ok = q[0] == 1;
    for (std::size_t n = 1; n <= 40; ++n) {
      ok = ok && q[n] == f1;
      const std::int64_t f2 = f0 + f1;
      f0 = f1;
      f1 = f2;
    }
    c.pass = ok;
    c.detail = "q_40=" + std::to_string(q[40]);
  });
  s.run(out, "p2_brackets_exact_n40", [&](Check& c) {
    std::size_t bad = 0, checked = 0;
    for (int i = 0; i < 2; ++i) {
      const auto cv = contfrac::convergents(contfrac::expand(specs[i], 41), 41);
      for (std::size_t n = 1; n <= 40; ++n) {
        const auto nv = contfrac::dist_nearest_int(cv[n].q, specs[i], opt.precision_bits);
        const BigRational lo(1, cv[n + 1].q + cv[n].q), hi(1, cv[n + 1].q);
        const bool ok = nv.value ? (compare(*nv.value, lo) > 0 && compare(*nv.value, hi) < 0)
                                 : (nv.lo > lo && nv.hi < hi);
        bad += ok ? 0 : 1;
        ++checked;
      }
    }
    c.pass = bad == 0;
    c.detail = "checked=" + std::to_string(checked) + " violations=" + std::to_string(bad);
  });
  s.run(out, "p3_best_approximation_n10", [&](Check& c) {
    std::size_t bad = 0;
    for (int i = 0; i < 2; ++i) {
      const FixedRotation rot(specs[i]);
      const auto q = contfrac::denominators(specs[i], 11);
      for (std::size_t n = 1; n <= 10; ++n) {
        const u128 best = dist128(rot.phase(q[n]));
        for (std::int64_t m = 1; m < q[n + 1]; ++m) {
          if (dist128(rot.phase(m)) < best) ++bad;
        }
      }
    }
    c.pass = bad == 0;
    c.detail = "violations=" + std::to_string(bad);
  });
}

void diophantine_checks(std::vector<Check>& out, const VerifyOptions& opt) {
  Suite s("diophantine");
  diophantine::SumOptions so;
  so.precision_bits = opt.precision_bits;
  so.threads = opt.threads;
  const IrrationalSpec specs[] = {IrrationalSpec::golden(), IrrationalSpec::sqrt2()};
  s.run(out, "inverse_sq_ratio_floor_k3_14", [&](Check& c) {
    std::size_t bad = 0;
    double worst = 1e300;
    for (const auto& sp : specs) {
      for (const auto& r : diophantine::sum_inverse_sq_scan(sp, 3, 14, so)) {
        const double floor = diophantine::inverse_sq_ratio_floor(sp, r.k);
        worst = std::min(worst, r.normalized_ratio / floor);
        if (!(r.normalized_ratio >= floor)) ++bad;
      }
    }
    c.pass = bad == 0;
    c.detail = "min_ratio_over_floor=" + fmt(worst);
  });
  s.run(out, "exact_path_symmetry_k10", [&](Check& c) {
    diophantine::SumOptions ex = so;
    ex.path = diophantine::SumPath::Exact;
    bool ok = true;
    for (const auto& sp : specs) {
      const auto r = diophantine::sum_inverse_sq(sp, 10, ex);
      ok = ok && r.exact_path && r.symmetric;
    }
    c.pass = ok;
  });
  s.run(out, "exact_fast_agree_k12", [&](Check& c) {
    diophantine::SumOptions ex = so, fa = so;
    ex.path = diophantine::SumPath::Exact;
    fa.path = diophantine::SumPath::Fast;
    double worst = 0.0;
    bool ok = true;
    for (const auto& sp : specs) {
      const auto a = diophantine::sum_inverse_sq(sp, 12, ex);
      const auto b = diophantine::sum_inverse_sq(sp, 12, fa);
      const double gap = std::fabs(a.value - b.value);
      ok = ok && gap <= a.error_bound + b.error_bound;
      worst = std::max(worst, gap / a.value);
    }
    c.pass = ok;
    c.detail = "max_rel_gap=" + fmt(worst);
  });
  s.run(out, "denjoy_koksma_n12", [&](Check& c) {
    using diophantine::BVFunction;
    using diophantine::DKFamily;
    const std::vector<DKFamily> fam = {
        DKFamily::fixed(BVFunction::cosine()), DKFamily::inverse_sq_at_scale(2),
        DKFamily::fixed(BVFunction::capped_inverse(BigRational(100))),
        DKFamily::fixed(BVFunction::piecewise_linear(
            {{BigRational(0), BigRational(0)}, {BigRational(1, 2), BigRational(1)}})),
        DKFamily::fixed(BVFunction::piecewise_linear({{BigRational(0), BigRational(0)},
                                                      {BigRational(1, 5), BigRational(3)},
                                                      {BigRational(1, 3), BigRational(-1)},
                                                      {BigRational(3, 4), BigRational(1, 2)}}))};
    std::vector<BigRational> xs;
    for (int i = 0; i < 5; ++i) xs.emplace_back(2 * i + 1, 11);
    std::size_t bad = 0, total = 0;
    double worst = 0.0;
    for (const auto& sp : specs) {
      for (const auto& per_x : diophantine::denjoy_koksma_batch(fam, sp, 12, xs, so)) {
        for (const auto& per_f : per_x) {
          for (const auto& r : per_f) {
            ++total;
            if (!r.pass) ++bad;
            if (r.bound > 0) worst = std::max(worst, r.lhs_upper / r.bound);
          }
        }
      }
    }
    c.pass = bad == 0;
    c.detail = "cases=" + std::to_string(total) + " violations=" + std::to_string(bad) +
               " max_lhs_over_var=" + fmt(worst);
  });
}

void dynamics_checks(std::vector<Check>& out) {
  Suite s("dynamics");
  const IrrationalSpec g = IrrationalSpec::golden();
  const FixedRotation rot(g);
  const FourierObservable phi =
      parse_phi("trig:1=0.2,0.1;2=-0.05,0.03;5=0.01,-0.02;c0=0.3");
  std::mt19937_64 rng(20260101);
  auto unif = [&] { return static_cast<double>(rng() >> 11) * 0x1p-53; };

  s.run(out, "apply_cos_wraps", [&](Check& c) {
    const auto p = dynamics::apply(rot, FourierObservable::cosine(), {0.0, 0.25});
    c.pass = std::fabs(p.y - 0.25) < 1e-15 && std::fabs(p.x - rot.alpha()) < 1e-15;
    c.detail = "y=" + fmt(p.y);
  });
  s.run(out, "apply_iterate_matches_birkhoff", [&](Check& c) {
    dynamics::Point p{0.123, 0.456};
    for (int i = 0; i < 50; ++i) p = dynamics::apply(rot, phi, p);
    const double s50 = dynamics::birkhoff_direct(phi, rot, 0.123, 50);
    double d = p.y - (0.456 + s50);
    d -= std::nearbyint(d);
    c.pass = std::fabs(d) < 1e-12;
    c.detail = "gap=" + fmt(std::fabs(d));
  });
  s.run(out, "cocycle_identity", [&](Check& c) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto m = static_cast<std::int64_t>(rng() % 1000 + 1);
      const auto n = static_cast<std::int64_t>(rng() % 1000 + 1);
      const double x = unif();
      const double lhs = dynamics::birkhoff_direct(phi, rot, x, m + n);
      const double rhs = dynamics::birkhoff_direct(phi, rot, x, m) +
                         dynamics::birkhoff_direct(phi, rot, rot.rotate(x, m), n);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
    c.pass = worst <= 1e-12;
    c.detail = "max_gap=" + fmt(worst);
  });
  s.run(out, "fourier_matches_direct", [&](Check& c) {
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const auto r = static_cast<std::int64_t>(rng() % 1000 + 1);
      const double x = unif();
      worst = std::max(worst, std::fabs(dynamics::birkhoff_direct(phi, rot, x, r) -
                                        dynamics::birkhoff_fourier(phi, rot, x, r).value));
    }
    c.pass = worst <= 1e-9;
    c.detail = "max_gap=" + fmt(worst);
  });
  s.run(out, "denjoy_koksma_trig", [&](Check& c) {
    const FourierObservable z = phi.mean_zero();
    const auto q = contfrac::denominators(g, 20);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 20; ++n) {
      const auto sup = dynamics::rigidity_sup(rot, z, q[n], 256);
      worst = std::max(worst, (sup.grid_abs + sup.slack) / z.variation_bound());
    }
    c.pass = worst <= 1.0;
    c.detail = "max_sup_over_var=" + fmt(worst);
  });
  s.run(out, "choose_ell_minimal", [&](Check& c) {
    const BigRational c0 = from_double(kInvSqrt2);
    const auto q = contfrac::denominators(g, 30);
    std::size_t bad = 0;
    for (std::size_t n = 2; n <= 30; ++n) {
      const auto got = dynamics::choose_ell_q(q[n], n, kInvSqrt2, dynamics::delta_rule(0.5));
      const double L = std::floor(std::pow(static_cast<double>(q[n]), 0.5));
      const double tau = std::pow(static_cast<double>(q[n]), -0.5);
      std::int64_t want = 0;
      for (std::int64_t l = 1; l <= static_cast<std::int64_t>(L); ++l) {
        const BigRational t = c0 * BigRational(BigInt(static_cast<long>(q[n] * l)));
        BigRational f = t - BigRational(floor(t));
        if (f > BigRational(1, 2)) f = BigRational(1) - f;
        if (to_double(f) < tau) {
          want = l;
          break;
        }
      }
      if (want != 0 && (got.ell != want || got.relaxed)) ++bad;
      if (want == 0 && !got.relaxed) ++bad;
    }
    c.pass = bad == 0;
    c.detail = "mismatches=" + std::to_string(bad);
  });
  s.run(out, "choose_ell_zero_mean", [&](Check& c) {
    const auto quarter = dynamics::choose_ell(g, 11, 0.25, 0.05);  // q_11 = 144
    c.pass = dynamics::choose_ell(g, 12, 0.0, 0.05).ell == 1 && quarter.ell == 1 &&
             quarter.residual == 0.0;
  });
  s.run(out, "l2_hat_cos_golden_r5", [&](Check& c) {
    const double v = dynamics::rigidity_l2_hat(rot, FourierObservable::cosine(), 5).value;
    c.pass = std::fabs(v - 0.0531) < 5e-4;
    c.detail = "value=" + fmt(v);
  });
  s.run(out, "direct_dominated_by_hat", [&](Check& c) {
    dynamics::RigidityConfig cfg;
    cfg.eps = 0.5;
    cfg.n_min = 2;
    cfg.n_max = 24;
    std::size_t bad = 0;
    for (double c0 : {0.0, kInvSqrt2}) {
      const auto seq = dynamics::build_rigidity_sequence(
          g, FourierObservable::random_envelope(1.0, 1.5, 7, 50, c0), cfg);
      for (const auto& e : seq.entries) {
        if (e.D_l2_direct > e.D_l2_hat + e.D_l2_direct_error + 1e-12) ++bad;
      }
    }
    c.pass = bad == 0;
    c.detail = "violations=" + std::to_string(bad);
  });
  s.run(out, "rigidity_bounded", [&](Check& c) {
    dynamics::RigidityConfig cfg;
    cfg.eps = 0.5;
    cfg.n_min = 2;
    cfg.n_max = 30;
    bool ok = true;
    std::string d;
    for (double c0 : {0.0, kInvSqrt2}) {
      const auto seq = dynamics::build_rigidity_sequence(
          g, FourierObservable::random_envelope(1.0, 1.5, 11, 50, c0), cfg);
      std::vector<double> v;
      for (const auto& e : seq.entries) {
        v.push_back(e.D_l2_hat * std::pow(static_cast<double>(e.r_n), cfg.eps / 100.0));
      }
      ok = ok && stabilizes(v);
      d += " max=" + fmt(*std::max_element(v.begin(), v.end()));
    }
    c.pass = ok;
    c.detail = d.substr(1);
  });
  s.run(out, "scaling_inequality_k10", [&](Check& c) {
    const auto f = FourierObservable::random_envelope(0.3, 1.5, 5, 20, 0.0);
    const auto q = contfrac::denominators(g, 10);
    const double base = dynamics::character_displacement(rot, f, q[10], 1, 1, 1024);
    bool ok = true;
    for (std::int64_t k = 2; k <= 10; ++k) {
      const double m = dynamics::character_displacement(rot, f, k * q[10], 1, 1, 1024);
      ok = ok && m <= static_cast<double>(k * k) * base + 1e-9;
    }
    c.pass = ok;
    c.detail = "base=" + fmt(base);
  });
  s.run(out, "pr_sum_decreases", [&](Check& c) {
    dynamics::RigidityConfig cfg;
    cfg.eps = 0.005;
    cfg.n_min = 4;
    cfg.n_max = 24;
    const auto rows = dynamics::pr_rigidity_check(
        g, FourierObservable::random_envelope(0.3, 1.5, 5, 20, 0.0), cfg, 1, 1);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.scaling_ok;
    ok = ok && rows.back().direct_sum < rows.front().direct_sum;
    c.pass = ok;
    c.detail = "first=" + fmt(rows.front().direct_sum) + " last=" + fmt(rows.back().direct_sum);
  });
  s.run(out, "equidistribution", [&](Check& c) {
    bool ok = true;
    for (std::int64_t q : {1, 2, 3, 7, -5}) {
      for (std::int64_t N : {1, 10, 1000, 100000}) {
        ok = ok && dynamics::equidistribution_check(rot, 0.3, N, q).pass;
      }
    }
    c.pass = ok;
  });
}

void counterexample_checks(std::vector<Check>& out) {
  Suite s("counterexample");
  for (const IrrationalSpec& sp : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const std::string tag = "_" + sp.label();
    s.run(out, "table" + tag, [&](Check& c) {
      const auto cp = counterexample::build(sp, 26);
      const auto rows = counterexample::lower_bound_table(cp, 8, 24);
      std::vector<double> norm;
      bool small_S = true, deduction = true;
      for (const auto& r : rows) {
        norm.push_back(r.normalized);
        small_S = small_S && r.max_abs_S < 0.5;
        if (!r.small_case) deduction = deduction && r.next_below_double.value_or(false);
      }
      std::vector<double> sorted = norm;
      std::sort(sorted.begin(), sorted.end());
      const double median = sorted[sorted.size() / 2];
      const double lo = sorted.front();
      c.pass = cp.variation_bound < 0.5 && small_S && deduction && lo >= 0.25 * median;
      c.detail = "C=" + fmt(cp.C) + " var=" + fmt(cp.variation_bound) + " min_norm=" + fmt(lo) +
                 " median=" + fmt(median);
    });
  }
  s.run(out, "truncation_monotone", [&](Check& c) {
    const auto g = IrrationalSpec::golden();
    const auto a = counterexample::build(g, 20);
    const auto b = counterexample::build(g, 26);
    std::vector<Mode> head(b.phi.modes().begin(), b.phi.modes().begin() + 19);
    const FourierObservable short_phi(0.0, head);
    const FixedRotation rot(g);
    bool ok = a.C == b.C;
    for (std::size_t n = 8; n <= 18; ++n) {
      const auto q = b.q[n];
      ok = ok && dynamics::rigidity_l2_hat(rot, short_phi, q).value <=
                     dynamics::rigidity_l2_hat(rot, b.phi, q).value;
    }
    c.pass = ok;
  });
}

void mobius_checks(std::vector<Check>& out) {
  Suite s("mobius");
  const auto table = mobius::sieve(1000000);
  s.run(out, "sieve_matches_trial_1e4", [&](Check& c) {
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= 10000; ++n) bad += table(n) != mobius::mobius_trial(n) ? 1 : 0;
    const int first[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (std::size_t n = 1; n <= 10; ++n) bad += table(n) != first[n - 1] ? 1 : 0;
    c.pass = bad == 0;
    c.detail = "mismatches=" + std::to_string(bad);
  });
  s.run(out, "mertens_1e6", [&](Check& c) {
    const auto m = mobius::mertens(table, 1000000);
    c.pass = std::abs(m) <= 1000;
    c.detail = "M=" + std::to_string(m);
  });
  s.run(out, "squarefree_density_1e6", [&](Check& c) {
    std::int64_t sf = 0;
    for (auto v : table.values()) sf += v != 0 ? 1 : 0;
    const double ratio = static_cast<double>(sf) / (6.0 / (std::numbers::pi * std::numbers::pi) * 1e6);
    c.pass = std::fabs(ratio - 1.0) < 0.01;
    c.detail = "ratio=" + fmt(ratio);
  });
  s.run(out, "checkpoint_prefix_consistent", [&](Check& c) {
    const auto g = IrrationalSpec::golden();
    const auto phi = parse_phi("trig:1=0.5,0;2=0,0.25");
    const auto longer = mobius::disjointness_sum(g, phi, 1, 1, 0.1, 0.2, {1000, 20000}, &table);
    const auto shorter = mobius::disjointness_sum(g, phi, 1, 1, 0.1, 0.2, {1000}, &table);
    c.pass = longer.checkpoints[0].average == shorter.checkpoints[0].average;
    for (const auto& cp : longer.checkpoints) c.pass = c.pass && std::abs(cp.average) <= 1.0;
  });
  s.run(out, "mertens_character", [&](Check& c) {
    const auto prof = mobius::disjointness_sum(IrrationalSpec::golden(), FourierObservable(), 0,
                                               0, 0.0, 0.0, {100000}, &table);
    const double want = static_cast<double>(mobius::mertens(table, 100000)) / 1e5;
    c.pass = std::fabs(prof.checkpoints[0].average.real() - want) < 1e-12;
    c.detail = "avg=" + fmt(prof.checkpoints[0].average.real());
  });
}

void flows_checks(std::vector<Check>& out) {
  Suite s("flows");
  const auto g = IrrationalSpec::golden();
  const FixedRotation rot(g);
  const flows::RoofFunction roof(FourierObservable::cosine(0.3, 1.0));
  std::mt19937_64 rng(99);
  auto unif = [&] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
  s.run(out, "semigroup_100", [&](Check& c) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = unif();
      const flows::SpecialFlowPoint p{x, unif() * roof(FixedRotation::from_unit(x))};
      const double t1 = (2 * unif() - 1) * 1000, t2 = (2 * unif() - 1) * 1000;
      const auto a = flows::special_flow_step(rot, roof, flows::special_flow_step(rot, roof, p, t1), t2);
      const auto b = flows::special_flow_step(rot, roof, p, t1 + t2);
      worst = std::max(worst, flows::quotient_distance(rot, roof, a, b));
    }
    c.pass = worst <= 1e-9;
    c.detail = "max_gap=" + fmt(worst);
  });
  s.run(out, "displacement_budget", [&](Check& c) {
    double worst = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double x = unif();
      const flows::SpecialFlowPoint p{x, unif() * roof(FixedRotation::from_unit(x))};
      const double t = (2 * unif() - 1) * 3.0;
      const auto img = flows::special_flow_step(rot, roof, p, t);
      worst = std::max(worst, flows::quotient_distance(rot, roof, img, p) - std::fabs(t));
    }
    c.pass = worst <= 1e-12;
    c.detail = "max_excess=" + fmt(worst);
  });
  s.run(out, "n_search_and_idempotence", [&](Check& c) {
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
      const double x = unif();
      const flows::SpecialFlowPoint p{x, 5.0 * (2 * unif() - 1)};
      const auto st = flows::special_flow_step_detail(rot, roof, p, 40.0 * unif());
      ok = ok && st.S_N <= p.s + 40.0 && st.point.s >= 0.0;
      const auto can = flows::canonicalize(rot, roof, st.point);
      ok = ok && can.x == st.point.x && can.s == st.point.s;
    }
    const flows::RoofFunction one(FourierObservable::constant(1.0));
    const auto st = flows::special_flow_step_detail(rot, one, {0.2, 0.5}, 7.25);
    ok = ok && st.N == 7 && std::fabs(st.point.s - 0.75) < 1e-12 &&
         std::fabs(st.point.x - rot.rotate(0.2, 7)) < 1e-15;
    c.pass = ok;
  });
  s.run(out, "flow_rigidity_stabilizes", [&](Check& c) {
    const auto rows = flows::flow_rigidity(g, roof, 1.0, 0.0005, 3, 22);
    std::vector<double> v;
    bool ok = true;
    for (const auto& r : rows) {
      v.push_back(r.normalized);
      ok = ok && r.measured <= r.bound + 1e-12;
    }
    c.pass = ok && stabilizes(v);
    c.detail = "last=" + fmt(v.back());
  });
  s.run(out, "rokhlin_matches_sup", [&](Check& c) {
    const auto f = FourierObservable::random_envelope(0.2, 1.5, 3, 30, 0.0);
    const auto rows = flows::rokhlin_rigidity(g, f, flows::LinearFlow{1.0}, 3, 25, 0.5);
    double worst = 0.0;
    for (const auto& r : rows) {
      if (r.sup_S >= 0.5) continue;
      const double s = dynamics::rigidity_sup(rot, f, r.q_n, 1024).value;
      worst = std::max(worst, std::fabs(r.bound - s) / s);
    }
    const auto id = flows::rokhlin_rigidity(g, f, flows::LinearFlow{0.0}, 3, 10, 0.5);
    bool ok = worst <= 1e-6;
    for (const auto& r : id) ok = ok && r.measured == r.rotation && r.bound == r.rotation;
    c.pass = ok;
    c.detail = "max_rel_gap=" + fmt(worst);
  });
  s.run(out, "rokhlin_linear_is_skew_product", [&](Check& c) {
    const auto f = parse_phi("trig:1=0.2,0.1;3=0,0.05");
    dynamics::Point a{0.3, 0.6}, b{0.3, 0.6};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      a = flows::rokhlin_apply(rot, f, flows::LinearFlow{1.0}, a);
      b = dynamics::apply(rot, f, b);
      double d = a.y - b.y;
      worst = std::max({worst, std::fabs(d - std::nearbyint(d)), std::fabs(a.x - b.x)});
    }
    c.pass = worst < 1e-12;
    c.detail = "max_gap=" + fmt(worst);
  });
}

}  // namespace

std::vector<Check> run_all(const VerifyOptions& options) {
  std::vector<Check> out;
  contfrac_checks(out, options);
  diophantine_checks(out, options);
  dynamics_checks(out);
  counterexample_checks(out);
  mobius_checks(out);
  flows_checks(out);
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string format_report(const std::vector<Check>& checks) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.module << ' ' << c.name;
    if (!c.detail.empty()) os << ' ' << c.detail;
    os << '\n';
    passed += c.pass ? 1 : 0;
  }
  os << "summary " << passed << '/' << checks.size() << " passed\n";
  return os.str();
}

}  // namespace skewrig::verify
