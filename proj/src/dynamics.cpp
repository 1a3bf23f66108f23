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

#include "skewrig/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "skewrig/errors.hpp"

namespace skewrig::dynamics {

namespace {

constexpr double kPi = std::numbers::pi;

double dist(double t) { return std::fabs(t - std::nearbyint(t)); }

double frac01(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

u128 to_u128(std::int64_t v) { return static_cast<u128>(static_cast<i128>(v)); }

// frac(c0 * r) in [-1/2, 1/2) with the double c0 taken exactly.
double mean_phase(double c0, std::int64_t r) {
  return FixedRotation::to_signed(FixedRotation::from_unit(c0) * to_u128(r));
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out) || out > (std::int64_t{1} << 62)) {
    throw InvalidArgument(what, "exceeds 2^62");
  }
  return out;
}

// e(k / m) for k in [0, m).
std::vector<std::complex<double>> unit_roots(std::size_t m) {
  std::vector<std::complex<double>> t(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
    t[k] = {std::cos(ang), std::sin(ang)};
  }
  return t;
}

void require_grid(std::size_t g) {
  if (g < 64) throw InvalidArgument("grid_size", "must be at least 64");
}

// |c_q| min(1/|sin(pi q alpha)|, r): bound on |c_q G_q(r)|.
double factor_cap(const FixedRotation& rot, std::int64_t q, std::int64_t r) {
  const double s = std::fabs(std::sin(kPi * rot.signed_frac(q)));
  return std::min(1.0 / s, static_cast<double>(r));
}

}  // namespace

Point apply(const FixedRotation& rot, const FourierObservable& phi, Point p) {
  const u128 x = FixedRotation::from_unit(p.x);
  return {FixedRotation::to_unit(x + rot.step()), frac01(p.y + phi.at_phase(x))};
}

double birkhoff_direct(const FourierObservable& phi, const FixedRotation& rot, double x,
                       std::int64_t r) {
  if (r < 0) throw InvalidArgument("r", "must be non-negative");
  const u128 x0 = FixedRotation::from_unit(x);
  CompensatedSum s;
  u128 xp = x0;
  for (std::int64_t j = 0; j < r; ++j) {
    s.add(phi.at_phase(xp));
    xp += rot.step();
  }
  return s.value();
}

std::complex<double> geometric_factor(const FixedRotation& rot, std::int64_t q, std::int64_t r) {
  const double a = FixedRotation::to_signed(rot.phase(q, r));
  const double b = rot.signed_frac(q);
  const double ratio = std::sin(kPi * a) / std::sin(kPi * b);
  return std::polar(ratio, kPi * (a - b));
}

Certified birkhoff_fourier(const FourierObservable& phi, const FixedRotation& rot, double x,
                           std::int64_t r, std::int64_t q_tail) {
  if (r < 1) throw InvalidArgument("r", "must be at least 1");
  const u128 xp = FixedRotation::from_unit(x);
  Certified out;
  CompensatedSum s;
  s.add(phi.mean() * static_cast<double>(r));
  for (const Mode& m : phi.modes()) {
    if (q_tail > 0 && m.q > q_tail) {
      out.error += 2.0 * std::abs(m.c) * factor_cap(rot, m.q, r);
      continue;
    }
    const double t = FixedRotation::to_signed(xp * static_cast<u128>(m.q));
    const std::complex<double> e = std::polar(1.0, 2.0 * kPi * t);
    s.add(2.0 * (m.c * e * geometric_factor(rot, m.q, r)).real());
  }
  out.value = s.value();
  return out;
}

EllRule delta_rule(double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta", "must be positive");
  return [delta](std::size_t, std::int64_t q) {
    const double b = std::pow(static_cast<double>(q), delta);
    return EllBounds{b, 1.0 / b};
  };
}

EllRule lambda_rule(std::function<double(std::size_t)> lambda) {
  return [lambda = std::move(lambda)](std::size_t n, std::int64_t) {
    const double b = std::sqrt(lambda(n));
    return EllBounds{b, 1.0 / b};
  };
}

EllRule psi_rule(std::function<double(double)> psi) {
  return [psi = std::move(psi)](std::size_t, std::int64_t q) {
    const double b = std::pow(psi(static_cast<double>(q)), 0.1);
    return EllBounds{b, 1.0 / b};
  };
}

EllChoice choose_ell_q(std::int64_t q_n, std::size_t n, double c0, const EllRule& rule) {
  const EllBounds eb = rule(n, q_n);
  if (!(eb.bound >= 1.0)) {
    throw NoSolution("ell search: bound " + std::to_string(eb.bound) + " < 1 at n = " +
                     std::to_string(n));
  }
  if (eb.bound > 1e9) throw InvalidArgument("ell bound", "search range above 1e9");
  const auto L = static_cast<std::int64_t>(std::floor(eb.bound));
  const u128 theta = FixedRotation::from_unit(c0) * to_u128(q_n);
  const double relaxed = 1.0 / static_cast<double>(L + 1);
  EllChoice best{0, 1.0, true};
  EllChoice first_relaxed{0, 1.0, true};
  u128 acc = 0;
  for (std::int64_t l = 1; l <= L; ++l) {
    acc += theta;
    const double res = FixedRotation::to_dist(acc);
    if (res < eb.threshold) return {l, res, false};
    if (first_relaxed.ell == 0 && res <= relaxed) first_relaxed = {l, res, true};
    if (res < best.residual) best = {l, res, true};
  }
  // Dirichlet guarantees first_relaxed; best only covers double rounding.
  return first_relaxed.ell != 0 ? first_relaxed : best;
}

EllChoice choose_ell_general(const contfrac::IrrationalSpec& spec, std::size_t n, double c0,
                             const EllRule& rule) {
  const auto q = contfrac::denominators(spec, n);
  return choose_ell_q(q[n], n, c0, rule);
}

EllChoice choose_ell(const contfrac::IrrationalSpec& spec, std::size_t n, double c0,
                     double delta) {
  return choose_ell_general(spec, n, c0, delta_rule(delta));
}

L2Hat rigidity_l2_hat(const FixedRotation& rot, const FourierObservable& phi, std::int64_t r) {
  if (r < 1) throw InvalidArgument("r", "must be at least 1");
  L2Hat out;
  const double ra = rot.dist(r);
  out.rotation = ra * ra;
  const double s0 = mean_phase(phi.mean(), r);
  out.mean = s0 * s0;
  const auto modes = phi.modes();
  std::vector<double> term(modes.size()), cap(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Mode& m = modes[i];
    term[i] = 2.0 * std::norm(m.c) * std::norm(geometric_factor(rot, m.q, r));
    double env = phi.envelope_at(m.q);
    if (!std::isfinite(env)) env = std::abs(m.c);
    const double f = env * factor_cap(rot, m.q, r);
    cap[i] = 2.0 * f * f;
  }
  std::vector<double> tail_from(modes.size() + 1, 0.0);
  for (std::size_t i = modes.size(); i-- > 0;) tail_from[i] = tail_from[i + 1] + cap[i];
  std::int64_t qt = 16;
  std::size_t used = 0;
  CompensatedSum ps;
  for (;;) {
    while (used < modes.size() && modes[used].q <= qt) ps.add(term[used++]);
    out.parseval = ps.value();
    out.tail = tail_from[used];
    out.q_tail = used == modes.size() ? phi.q_max() : qt;
    const double value = out.rotation + out.mean + out.parseval;
    if (used == modes.size() || out.tail <= 1e-3 * value) break;
    qt *= 2;
  }
  out.value = out.rotation + out.mean + out.parseval + out.tail;
  return out;
}

std::vector<double> oscillation_grid(const FixedRotation& rot, const FourierObservable& phi,
                                     std::int64_t r, std::size_t grid_size) {
  require_grid(grid_size);
  const std::size_t m2 = 2 * grid_size;
  const auto roots = unit_roots(m2);
  std::vector<double> osc(grid_size, 0.0);
  for (const Mode& m : phi.modes()) {
    const std::complex<double> d = 2.0 * m.c * geometric_factor(rot, m.q, r);
    // x_i = (2i + 1) / (2G), so q x_i = q (2i + 1) / (2G) exactly.
    const std::size_t qm = static_cast<std::size_t>(m.q % static_cast<std::int64_t>(m2));
    std::size_t idx = qm;
    const std::size_t stride = (2 * qm) % m2;
    for (std::size_t i = 0; i < grid_size; ++i) {
      osc[i] += d.real() * roots[idx].real() - d.imag() * roots[idx].imag();
      idx += stride;
      if (idx >= m2) idx -= m2;
    }
  }
  return osc;
}

namespace {

double grid_mean_sq_norm(const std::vector<double>& osc, double s0) {
  CompensatedSum s;
  for (double v : osc) {
    const double d = dist(s0 + v);
    s.add(d * d);
  }
  return s.value() / static_cast<double>(osc.size());
}

}  // namespace

Quadrature rigidity_l2_direct(const FixedRotation& rot, const FourierObservable& phi,
                              std::int64_t r, std::size_t grid_size) {
  require_grid(grid_size);
  if (r < 1) throw InvalidArgument("r", "must be at least 1");
  const double ra = rot.dist(r);
  const double s0 = mean_phase(phi.mean(), r);
  const double q1 = grid_mean_sq_norm(oscillation_grid(rot, phi, r, grid_size), s0);
  const double q2 = grid_mean_sq_norm(oscillation_grid(rot, phi, r, 2 * grid_size), s0);
  return {ra * ra + q1, std::fabs(q1 - q2)};
}

SupBound rigidity_sup(const FixedRotation& rot, const FourierObservable& phi, std::int64_t r,
                      std::size_t grid_size) {
  require_grid(grid_size);
  if (r < 1) throw InvalidArgument("r", "must be at least 1");
  SupBound out;
  const double s0 = mean_phase(phi.mean(), r);
  for (double v : oscillation_grid(rot, phi, r, grid_size)) {
    out.grid_norm = std::max(out.grid_norm, dist(s0 + v));
    out.grid_abs = std::max(out.grid_abs, std::fabs(v));
  }
  double lip = 0.0;
  for (const Mode& m : phi.modes()) {
    lip += 4.0 * kPi * static_cast<double>(m.q) * std::abs(m.c) *
           std::abs(geometric_factor(rot, m.q, r));
  }
  out.slack = lip / (2.0 * static_cast<double>(grid_size));
  out.value = rot.dist(r) + std::min(0.5, out.grid_norm + out.slack);
  return out;
}

void RigidityConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps", "must be positive");
  const double d = delta_value(), l = lambda_value();
  if (!(l > 0.0 && l < d && d < eps)) {
    throw InvalidArgument("delta", "need 0 < lambda < delta < eps");
  }
  if (n_min < 1 || n_min > n_max) throw InvalidArgument("n_range", "need 1 <= a <= b");
  require_grid(grid_size);
}

namespace {

struct SequencePlan {
  bool case1 = false;
  std::vector<std::size_t> indices;
  std::vector<std::int64_t> q;
};

SequencePlan plan_sequence(const contfrac::IrrationalSpec& spec, const RigidityConfig& config) {
  SequencePlan plan;
  const auto a = contfrac::expand(spec, config.n_max + 1);
  const auto growth = contfrac::classify_growth(a, config.n_max, config.growth_min_hits);
  plan.case1 = growth.case1;
  plan.q = contfrac::denominators(spec, config.n_max);
  for (std::size_t n = config.n_min; n <= config.n_max; ++n) {
    if (plan.case1 &&
        std::find(growth.indices.begin(), growth.indices.end(), n) == growth.indices.end()) {
      continue;
    }
    plan.indices.push_back(n);
  }
  return plan;
}

}  // namespace

RigiditySequence build_rigidity_sequence(const contfrac::IrrationalSpec& spec,
                                         const FourierObservable& phi,
                                         const RigidityConfig& config) {
  config.validate();
  const FixedRotation rot(spec);
  const SequencePlan plan = plan_sequence(spec, config);
  const EllRule rule = delta_rule(config.delta_value());
  RigiditySequence out;
  out.case1 = plan.case1;
  out.out_of_hypothesis = config.out_of_hypothesis();
  for (std::size_t n : plan.indices) {
    RigidityEntry e;
    e.n = n;
    e.q_n = plan.q[n];
    const EllChoice ell = choose_ell_q(e.q_n, n, phi.mean(), rule);
    e.ell_n = ell.ell;
    e.ell_relaxed = ell.relaxed;
    e.r_n = checked_mul(e.ell_n, e.q_n, "r_n");
    e.D_l2_hat = rigidity_l2_hat(rot, phi, e.r_n).value;
    const Quadrature direct = rigidity_l2_direct(rot, phi, e.r_n, config.grid_size);
    e.D_l2_direct = direct.value;
    e.D_l2_direct_error = direct.error;
    e.D_sup = config.sup ? rigidity_sup(rot, phi, e.r_n, config.grid_size).value
                         : std::numeric_limits<double>::quiet_NaN();
    e.bound = std::pow(static_cast<double>(e.r_n), -config.lambda_value());
    out.entries.push_back(e);
  }
  return out;
}

namespace {

double character_mean(const FixedRotation& rot, const FourierObservable& phi, std::int64_t r,
                      std::int64_t a, std::int64_t b, std::size_t grid_size) {
  const u128 base = rot.phase(r) * to_u128(a) +
                    FixedRotation::from_unit(phi.mean()) * to_u128(r) * to_u128(b);
  const double t0 = FixedRotation::to_signed(base);
  CompensatedSum s;
  const double bd = static_cast<double>(b);
  for (double v : oscillation_grid(rot, phi, r, grid_size)) {
    const double sn = std::sin(kPi * (t0 + bd * v));
    s.add(4.0 * sn * sn);
  }
  return s.value() / static_cast<double>(grid_size);
}

}  // namespace

double character_displacement(const FixedRotation& rot, const FourierObservable& phi,
                              std::int64_t r, std::int64_t a, std::int64_t b,
                              std::size_t grid_size) {
  require_grid(grid_size);
  return character_mean(rot, phi, r, a, b, grid_size);
}

std::vector<PrRow> pr_rigidity_check(const contfrac::IrrationalSpec& spec,
                                     const FourierObservable& phi, const RigidityConfig& config,
                                     std::int64_t a, std::int64_t b) {
  config.validate();
  const FixedRotation rot(spec);
  const SequencePlan plan = plan_sequence(spec, config);
  const EllRule rule = delta_rule(config.delta_value());
  const std::size_t g = config.grid_size;
  std::vector<PrRow> rows;
  for (std::size_t n : plan.indices) {
    PrRow row;
    row.n = n;
    row.r_n = checked_mul(choose_ell_q(plan.q[n], n, phi.mean(), rule).ell, plan.q[n], "r_n");
    row.K = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(
               std::floor(std::pow(static_cast<double>(row.r_n), config.eps / 400.0))));
    row.base = character_mean(rot, phi, row.r_n, a, b, g);
    const double base_err = std::fabs(row.base - character_mean(rot, phi, row.r_n, a, b, 2 * g));
    CompensatedSum bound, direct;
    for (std::int64_t k = 1; k <= row.K; ++k) {
      const std::int64_t kr = checked_mul(k, row.r_n, "k r_n");
      const double term = k == 1 ? row.base : character_mean(rot, phi, kr, a, b, g);
      const double k2 = static_cast<double>(k) * static_cast<double>(k);
      bound.add(2.0 * k2 * row.base);
      direct.add(2.0 * term);
      if (term > k2 * (row.base + base_err) + 1e-9) row.scaling_ok = false;
    }
    row.bound_sum = bound.value();
    row.direct_sum = direct.value();
    rows.push_back(row);
  }
  return rows;
}

EquidistributionResult equidistribution_check(const FixedRotation& rot, double x,
                                              std::int64_t N, std::int64_t q) {
  if (q == 0) throw InvalidArgument("q", "must be non-zero");
  if (N < 1) throw InvalidArgument("N", "must be positive");
  u128 ph = FixedRotation::from_unit(x) * to_u128(q);
  const u128 step = rot.phase(q);
  CompensatedSum re, im;
  for (std::int64_t j = 0; j < N; ++j) {
    const double ang = 2.0 * kPi * FixedRotation::to_signed(ph);
    re.add(std::cos(ang));
    im.add(std::sin(ang));
    ph += step;
  }
  EquidistributionResult out;
  const double nd = static_cast<double>(N);
  out.lhs = std::hypot(re.value(), im.value()) / nd;
  out.bound = std::min(1.0, 1.0 / (2.0 * nd * rot.dist(q)));
  out.pass = out.lhs <= out.bound + 1e-12;
  return out;
}

}  // namespace skewrig::dynamics
