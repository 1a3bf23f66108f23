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

// Acceptance criteria 1-12; one PASS/FAIL line each.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skewrig/contfrac.hpp"
#include "skewrig/counterexample.hpp"
#include "skewrig/diophantine.hpp"
#include "skewrig/dynamics.hpp"
#include "skewrig/flows.hpp"
#include "skewrig/fourier.hpp"
#include "skewrig/mobius.hpp"
#include "skewrig/rotation.hpp"
#include "skewrig/verify.hpp"

using namespace skewrig;
using contfrac::IrrationalSpec;
namespace dio = skewrig::diophantine;
namespace dyn = skewrig::dynamics;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using verify::fmt;

bool stabilizes(const std::vector<double>& v, double* head_out = nullptr, double* tail_out = nullptr) {
  if (v.size() < 4) return false;
  const auto cut = static_cast<std::ptrdiff_t>(v.size() - v.size() / 4);
  const double head = *std::max_element(v.begin(), v.begin() + cut);
  const double tail = *std::max_element(v.begin() + cut, v.end());
  if (head_out) *head_out = head;
  if (tail_out) *tail_out = tail;
  return tail <= 1.1 * head;
}

std::vector<BigInt> euclid(BigRational x, std::size_t n) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i <= n && x != 0; ++i) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    out.push_back(a);
    x -= a;
    if (x != 0) x = 1 / x;
  }
  return out;
}

// Rational enclosures built without the library: decimal truncation of
// sqrt via mpz_sqrt, and the factorial series for e.
std::pair<BigRational, BigRational> oracle_bracket(const std::string& name) {
  const BigInt scale = BigInt("1" + std::string(200, '0'));
  if (name == "e") {
    BigRational s = 0, term = 1;
    for (int k = 0; k <= 150; ++k) {
      s += term;
      term /= k + 1;
    }
    return {s, s + 2 * term};
  }
  const int d = name == "golden" ? 5 : 2;
  BigInt r;
  const BigInt sq = d * scale * scale;
  mpz_sqrt(r.get_mpz_t(), sq.get_mpz_t());
  BigRational lo(r, scale), hi(r + 1, scale);
  lo.canonicalize();
  hi.canonicalize();
  if (name == "golden") return {(1 + lo) / 2, (1 + hi) / 2};
  return {lo, hi};
}

Outcome c1() {
  std::size_t mismatches = 0, p1_bad = 0, p2_bad = 0, p2_checked = 0;
  for (const std::string name : {"golden", "sqrt2", "e"}) {
    const auto spec = contfrac::parse_alpha(name);
    const auto a = contfrac::expand(spec, 40);
    const auto cv = contfrac::convergents(a, 40);
    const auto [lo, hi] = oracle_bracket(name);
    const auto el = euclid(lo, 40), eh = euclid(hi, 40);
    for (std::size_t n = 0; n <= 40; ++n) {
      if (n >= el.size() || n >= eh.size() || el[n] != eh[n] || el[n] != a[n]) ++mismatches;
    }
    // Oracle convergents by the same recurrence on the oracle quotients.
    BigInt p0 = 1, q0 = 0, p1 = el[0], q1 = 1;
    if (cv[0].p != p1 || cv[0].q != q1) ++mismatches;
    for (std::size_t n = 1; n <= 40; ++n) {
      const BigInt p2 = el[n] * p1 + p0, q2 = el[n] * q1 + q0;
      if (cv[n].p != p2 || cv[n].q != q2) ++mismatches;
      p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    }
    for (std::size_t n = 1; n < 40; ++n) {
      if (cv[n + 1].q != a[n + 1] * cv[n].q + cv[n - 1].q) ++p1_bad;
      if (cv[n + 1].p != a[n + 1] * cv[n].p + cv[n - 1].p) ++p1_bad;
    }
    if (!spec.is_surd()) continue;
    for (std::size_t n = 0; n < 40; ++n) {
      if (n == 0 && cv[0].q == cv[1].q) continue;  // q_0 = q_1 = 1 for golden
      const auto d = contfrac::dist_nearest_int(cv[n].q, spec, 256);
      if (!d.value) {
        ++p2_bad;
        continue;
      }
      ++p2_checked;
      const BigRational upper(1, cv[n + 1].q), lower(1, cv[n + 1].q + cv[n].q);
      if (!(compare(*d.value, upper) < 0 && compare(*d.value, lower) > 0)) ++p2_bad;
    }
  }
  return {mismatches == 0 && p1_bad == 0 && p2_bad == 0,
          "oracle_mismatches=" + std::to_string(mismatches) + " p1_violations=" +
              std::to_string(p1_bad) + " p2_violations=" + std::to_string(p2_bad) + "/" +
              std::to_string(p2_checked)};
}

Outcome c2() {
  std::size_t violations = 0, checked = 0;
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const auto q = contfrac::denominators(spec, 13);
    const auto alpha = spec.exact();
    const std::int64_t qmax = q[13];
    // Brackets for every q first; exact comparisons only where they overlap.
    std::vector<contfrac::NormValue> d(static_cast<std::size_t>(qmax));
    for (std::int64_t m = 1; m < qmax; ++m) {
      d[static_cast<std::size_t>(m)] = contfrac::dist_nearest_int(BigInt(m), spec, 128);
    }
    for (std::size_t n = 0; n <= 12; ++n) {
      const auto& dn = d[static_cast<std::size_t>(q[n])];
      for (std::int64_t m = 1; m < q[n + 1]; ++m) {
        ++checked;
        const auto& dm = d[static_cast<std::size_t>(m)];
        if (dn.hi <= dm.lo) continue;
        if (dn.lo > dm.hi) {
          ++violations;
          continue;
        }
        const auto a = contfrac::dist_nearest_int(BigInt(q[n]), spec, 256);
        const auto b = contfrac::dist_nearest_int(BigInt(m), spec, 256);
        if (!a.value || !b.value || compare(*a.value, *b.value) > 0) ++violations;
      }
    }
  }
  return {violations == 0,
          "violations=" + std::to_string(violations) + " pairs=" + std::to_string(checked)};
}

Outcome c3() {
  std::mt19937_64 rng(2026);
  std::vector<BigRational> xs;
  for (int i = 0; i < 100; ++i) {
    const auto den = static_cast<long>(rng() % 1000 + 1);
    BigRational x(static_cast<long>(rng() % static_cast<unsigned long>(den)), den);
    x.canonicalize();
    xs.push_back(x);
  }
  const std::vector<dio::DKFamily> fams{
      dio::DKFamily::fixed(dio::BVFunction::cosine()),
      dio::DKFamily::inverse_sq_at_scale(2),
      dio::DKFamily::fixed(dio::BVFunction::capped_inverse(BigRational(100))),
      dio::DKFamily::fixed(dio::BVFunction::piecewise_linear(
          {{BigRational(0), BigRational(0)}, {BigRational(1, 2), BigRational(1)}})),
      dio::DKFamily::fixed(dio::BVFunction::piecewise_linear({{BigRational(0), BigRational(0)},
                                                              {BigRational(1, 5), BigRational(3)},
                                                              {BigRational(1, 3), BigRational(-1)},
                                                              {BigRational(3, 4), BigRational(1, 2)}})),
  };
  std::size_t violations = 0, checks = 0, exact = 0;
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const auto res = dio::denjoy_koksma_batch(fams, spec, 20, xs);
    for (const auto& per_x : res) {
      for (const auto& per_f : per_x) {
        for (const auto& r : per_f) {
          if (r.n == 0) continue;
          ++checks;
          exact += r.exact_path;
          if (!r.pass) ++violations;
        }
      }
    }
  }
  return {violations == 0, "violations=" + std::to_string(violations) + " checks=" +
                               std::to_string(checks) + " exact=" + std::to_string(exact)};
}

Outcome c4() {
  bool ok = true;
  std::string d;
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const auto rows = dio::sum_inverse_sq_scan(spec, 5, 25);
    const auto q = contfrac::denominators(spec, 25);
    double head = 0.0, tail = 0.0;
    std::size_t below = 0;
    for (const auto& r : rows) {
      const double qk = static_cast<double>(q[r.k]), qk1 = static_cast<double>(q[r.k - 1]);
      const double floor_ratio = 2.0 * std::pow(qk / (qk + qk1), 2);
      if (r.normalized_ratio < floor_ratio) ++below;
      (r.k <= 15 ? head : tail) = std::max(r.k <= 15 ? head : tail, r.normalized_ratio);
    }
    const bool pass = below == 0 && tail <= 1.25 * head;
    ok = ok && pass;
    d += " " + spec.label() + ":R=" + fmt(1.25 * head) + ",max16_25=" + fmt(tail) +
         ",below_floor=" + std::to_string(below);
  }
  return {ok, d.substr(1)};
}

Outcome c5() {
  bool ok = true;
  std::string d;
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const auto q = contfrac::denominators(spec, 26);
    std::array<double, 3> head{}, tail{};
    for (std::size_t k = 5; k <= 25; ++k) {
      const double qk = static_cast<double>(q[k]);
      const std::vector<double> cs{1.0, std::floor(std::sqrt(qk)), qk};
      const auto rows = dio::sum_slice_min_multi(spec, k, cs);
      for (std::size_t i = 0; i < 3; ++i) {
        auto& slot = k <= 15 ? head[i] : tail[i];
        slot = std::max(slot, rows[i].normalized_ratio);
      }
    }
    static const char* names[] = {"1", "sqrtq", "q"};
    for (std::size_t i = 0; i < 3; ++i) {
      ok = ok && tail[i] <= 1.25 * head[i];
      d += " " + spec.label() + "/c=" + names[i] + ":" + fmt(tail[i] / head[i]);
    }
  }
  return {ok, "tail_over_head" + d};
}

Outcome c6() {
  const auto spec = IrrationalSpec::golden();
  const FixedRotation rot(spec);
  const auto q = contfrac::denominators(spec, 12);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::size_t used = 0, comparisons = 0;
  while (used < 20) {
    std::vector<Mode> modes;
    const int m = 1 + static_cast<int>(rng() % 8);
    for (int k = 1; k <= m; ++k) {
      modes.push_back({k, std::polar(0.05 * u(rng) / (k * k), 6.283185307179586 * u(rng))});
    }
    const FourierObservable phi(0.0, modes);
    bool regime = true;
    for (std::size_t n = 4; n <= 12 && regime; ++n) {
      for (double s : dyn::oscillation_grid(rot, phi, q[n], 256)) regime = regime && std::fabs(s) < 0.5;
    }
    if (!regime) continue;
    ++used;
    for (std::size_t n = 4; n <= 12; ++n) {
      const double h = dyn::rigidity_l2_hat(rot, phi, q[n]).value;
      const double g = dyn::rigidity_l2_direct(rot, phi, q[n], 1024).value;
      worst = std::max(worst, std::fabs(h - g) / h);
      ++comparisons;
    }
  }
  return {worst <= 1e-3, "max_rel_diff=" + fmt(worst) + " comparisons=" + std::to_string(comparisons)};
}

// n with q_n up to about 10^6 for golden.
constexpr std::size_t kGoldenNMax = 30;

Outcome c7() {
  constexpr double eps = 0.5;
  dyn::RigidityConfig cfg;
  cfg.eps = eps;
  cfg.n_min = 2;
  cfg.n_max = kGoldenNMax;
  cfg.sup = false;
  bool ok = true;
  std::string d;
  for (double c0 : {0.0, 1.0 / std::sqrt(2.0)}) {
    const auto phi = FourierObservable::random_envelope(1.0, 1.0 + eps, 11, 50, c0);
    const auto seq = dyn::build_rigidity_sequence(IrrationalSpec::golden(), phi, cfg);
    std::vector<double> v;
    double run = 0.0;
    for (const auto& e : seq.entries) {
      run = std::max(run, e.D_l2_hat * std::pow(static_cast<double>(e.r_n), eps / 100.0));
      v.push_back(run);
    }
    double head = 0.0, tail = 0.0;
    ok = stabilizes(v, &head, &tail) && ok;
    d += " c0=" + fmt(c0) + ":head=" + fmt(head) + ",tail=" + fmt(tail) +
         ",q_max=" + std::to_string(seq.entries.back().r_n);
  }
  return {ok, d.substr(1)};
}

Outcome c8() {
  constexpr double eps = 0.5;
  const auto spec = IrrationalSpec::golden();
  const FixedRotation rot(spec);
  const auto q = contfrac::denominators(spec, kGoldenNMax);
  const auto phi = FourierObservable::random_envelope(1.0, 1.0 + eps, 11, 50, 0.0);
  std::vector<double> v;
  for (std::size_t n = 2; n <= kGoldenNMax; ++n) {
    const double s = dyn::rigidity_sup(rot, phi, q[n], 1024).value;
    v.push_back(s * std::pow(static_cast<double>(q[n]), eps / 200.0));
  }
  double head = 0.0, tail = 0.0;
  const bool ok = stabilizes(v, &head, &tail);
  return {ok, "head=" + fmt(head) + " tail=" + fmt(tail) + " last=" + fmt(v.back())};
}

Outcome c9() {
  bool lower_ok = true, ratio_ok = true, s_ok = true;
  std::string d;
  for (const auto& spec : {IrrationalSpec::golden(), IrrationalSpec::sqrt2()}) {
    const auto cp = counterexample::build(spec, 26);
    const auto rows = counterexample::lower_bound_table(cp, 8, 24);
    std::vector<double> norm;
    for (const auto& r : rows) norm.push_back(r.normalized);
    std::vector<double> sorted = norm;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double mn = *std::min_element(norm.begin(), norm.end());
    lower_ok = lower_ok && mn >= 0.25 * median;
    std::size_t increases = 0;
    for (std::size_t i = rows.size() - 8; i < rows.size(); ++i) {
      increases += rows[i].threshold_ratio > rows[i - 1].threshold_ratio;
    }
    ratio_ok = ratio_ok && increases == 8;
    double smax = 0.0;
    for (const auto& r : rows) smax = std::max(smax, r.max_abs_S);
    s_ok = s_ok && smax < 0.5;
    d += " " + spec.label() + ":min/median=" + fmt(mn / median) + ",ratio_increases=" +
         std::to_string(increases) + "/8,max|S|=" + fmt(smax);
  }
  return {lower_ok && ratio_ok && s_ok,
          std::string("lower_bound=") + (lower_ok ? "ok" : "fail") +
              " threshold_ratio=" + (ratio_ok ? "ok" : "fail") + " |S|<1/2=" +
              (s_ok ? "ok" : "fail") + d};
}

Outcome c10() {
  const auto t = mobius::sieve(1000000);
  std::size_t bad = 0;
  for (std::size_t n = 1; n <= 10000; ++n) bad += t(n) != mobius::mobius_trial(n);
  const auto M = mobius::mertens(t, 1000000);
  const double ratio = std::fabs(static_cast<double>(M)) / 1e6;
  const auto prof = mobius::disjointness_sum(IrrationalSpec::golden(),
                                             parse_phi("trig:1=0.5,0;2=0,0.25"), 1, 1, 0.0, 0.0,
                                             {10000, 1000000}, &t);
  const double a4 = std::abs(prof.checkpoints[0].average);
  const double a6 = std::abs(prof.checkpoints[1].average);
  return {bad == 0 && ratio <= 0.001 && a6 < a4,
          "sieve_mismatches=" + std::to_string(bad) + " M(1e6)=" + std::to_string(M) +
              " |avg|@1e4=" + fmt(a4) + " |avg|@1e6=" + fmt(a6)};
}

Outcome c11() {
  const auto spec = IrrationalSpec::golden();
  const FixedRotation rot(spec);
  const flows::RoofFunction roof(FourierObservable::cosine(0.3, 1.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double semi = 0.0;
  std::size_t disp_bad = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const flows::SpecialFlowPoint p{x, u(rng) * roof(FixedRotation::from_unit(x))};
    const double t1 = 200.0 * u(rng) - 100.0, t2 = 200.0 * u(rng) - 100.0;
    const auto a = flows::special_flow_step(rot, roof, flows::special_flow_step(rot, roof, p, t1), t2);
    const auto b = flows::special_flow_step(rot, roof, p, t1 + t2);
    semi = std::max(semi, flows::quotient_distance(rot, roof, a, b));
    const double t = 6.0 * u(rng) - 3.0;
    const auto c = flows::special_flow_step(rot, roof, p, t);
    if (flows::quotient_distance(rot, roof, c, p) > std::fabs(t) + 1e-12) ++disp_bad;
  }
  const auto rows = flows::flow_rigidity(spec, roof, 1.0, 0.0005, 3, 22);
  std::vector<double> v;
  std::size_t measured_bad = 0;
  for (const auto& r : rows) {
    v.push_back(r.normalized);
    measured_bad += r.measured > r.bound + 1e-12;
  }
  const bool stab = stabilizes(v);
  const auto f = FourierObservable::random_envelope(0.2, 1.5, 3, 30, 0.0);
  const auto rk = flows::rokhlin_rigidity(spec, f, flows::LinearFlow{1.0}, 3, 25, 0.5);
  double rel = 0.0;
  for (const auto& r : rk) {
    if (r.sup_S >= 0.5) continue;
    const double s = dyn::rigidity_sup(rot, f, r.q_n, 1024).value;
    rel = std::max(rel, std::fabs(r.bound - s) / s);
  }
  const bool ok = semi <= 1e-9 && disp_bad == 0 && stab && measured_bad == 0 && rel <= 1e-6;
  return {ok, "semigroup_err=" + fmt(semi) + " displacement_violations=" + std::to_string(disp_bad) +
                  " flow_bound_stabilizes=" + (stab ? "yes" : "no") +
                  " rokhlin_rel_gap=" + fmt(rel)};
}

std::string run_capture(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) {
    *status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  *status = pclose(p);
  return out;
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp:", 0) == 0) continue;
    out += line + '\n';
  }
  return out;
}

Outcome c12(const std::string& exe) {
  if (exe.empty()) return {false, "no skewrig executable given (--skewrig)"};
  int s1 = 0, s2 = 0;
  const std::string a = run_capture("'" + exe + "' verify", &s1);
  const std::string b = run_capture("'" + exe + "' verify", &s2);
  const bool same = strip_timestamp(a) == strip_timestamp(b);
  return {same && s1 == 0 && s2 == 0 && !a.empty(),
          std::string("identical=") + (same ? "yes" : "no") + " bytes=" + std::to_string(a.size()) +
              " exit=" + std::to_string(s1) + "," + std::to_string(s2)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewrig acceptance checks"};
  int only = 0;
  std::string exe;
  app.add_option("--only", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--skewrig", exe, "Path to the skewrig executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "continued fractions vs Euclid oracle, P1, P2", 5, c1},
      {2, "best approximation exhaustive scan", 10, c2},
      {3, "Denjoy-Koksma", 60, c3},
      {4, "inverse square sums", 60, c4},
      {5, "slice sums", 60, c5},
      {6, "Parseval vs quadrature", 30, c6},
      {7, "L2 rigidity decay", 300, c7},
      {8, "sup-norm rate", 300, c8},
      {9, "counterexample lower bound", 60, c9},
      {10, "Mobius diagnostics", 60, c10},
      {11, "flows", 60, c11},
      {12, "determinism of verify", 600, [&] { return c12(exe); }},
  };
  bool all_ok = true;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    all_ok = all_ok && pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", secs, c.limit_s);
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): "
              << o.detail << " time=" << timing << (in_time ? "" : " OVER_LIMIT") << std::endl;
  }
  return all_ok ? 0 : 1;
}
