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

#include "skewrig/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skewrig/errors.hpp"

namespace skewrig::flows {

namespace {

constexpr std::int64_t kDirectLimit = 4096;

double torus_dist(double a, double b) {
  const double d = a - b;
  return std::fabs(d - std::nearbyint(d));
}

double frac01(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

}  // namespace

RoofFunction::RoofFunction(FourierObservable f, std::size_t grid_size) : f_(std::move(f)) {
  if (grid_size < 64) throw InvalidArgument("grid_size", "must be at least 64");
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
    lo = std::min(lo, f_(x));
  }
  min_ = lo - f_.lipschitz() / (2.0 * static_cast<double>(grid_size));
  if (!(min_ > 0.0)) throw InvalidArgument("roof", "not certifiably positive");
}

double roof_sum(const FixedRotation& rot, const RoofFunction& roof, double x, std::int64_t N) {
  if (N == 0) return 0.0;
  const std::int64_t n = N < 0 ? -N : N;
  const double start = N < 0 ? rot.rotate(x, N) : x;
  double s = 0.0;
  if (n <= kDirectLimit) {
    CompensatedSum acc;
    u128 xp = FixedRotation::from_unit(start);
    for (std::int64_t j = 0; j < n; ++j) {
      acc.add(roof(xp));
      xp += rot.step();
    }
    s = acc.value();
  } else {
    s = dynamics::birkhoff_fourier(roof.f(), rot, start, n).value;
  }
  return N < 0 ? -s : s;
}

FlowStep special_flow_step_detail(const FixedRotation& rot, const RoofFunction& roof,
                                  SpecialFlowPoint p, double t) {
  if (!std::isfinite(t) || !std::isfinite(p.s)) throw InvalidArgument("t", "must be finite");
  const u128 x0 = FixedRotation::from_unit(p.x);
  const double u = p.s + t;
  auto f_at = [&](std::int64_t j) { return roof(x0 + rot.phase(j)); };
  std::int64_t N = 0;
  double S = 0.0;
  if (std::fabs(u) > static_cast<double>(kDirectLimit) * roof.min_value()) {
    N = static_cast<std::int64_t>(std::floor(u / roof.beta()));
    S = roof_sum(rot, roof, p.x, N);
  }
  for (double fn = f_at(N); S + fn <= u; fn = f_at(N)) {
    S += fn;
    ++N;
  }
  while (S > u) {
    --N;
    S -= f_at(N);
  }
  FlowStep out;
  out.N = N;
  out.S_N = S;
  const double fN = f_at(N);
  out.S_next = S + fN;
  out.point = {FixedRotation::to_unit(x0 + rot.phase(N)), std::clamp(u - S, 0.0, fN)};
  return out;
}

SpecialFlowPoint special_flow_step(const FixedRotation& rot, const RoofFunction& roof,
                                   SpecialFlowPoint p, double t) {
  return special_flow_step_detail(rot, roof, p, t).point;
}

SpecialFlowPoint canonicalize(const FixedRotation& rot, const RoofFunction& roof,
                              SpecialFlowPoint p) {
  return special_flow_step(rot, roof, p, 0.0);
}

double quotient_distance(const FixedRotation& rot, const RoofFunction& roof,
                         SpecialFlowPoint p, SpecialFlowPoint q) {
  const u128 xq = FixedRotation::from_unit(q.x);
  const double up_x = FixedRotation::to_unit(xq + rot.step());
  const double up_s = q.s - roof(xq);
  const u128 xm = xq - rot.step();
  const double down_x = FixedRotation::to_unit(xm);
  const double down_s = q.s + roof(xm);
  return std::min({torus_dist(p.x, q.x) + std::fabs(p.s - q.s),
                   torus_dist(p.x, up_x) + std::fabs(p.s - up_s),
                   torus_dist(p.x, down_x) + std::fabs(p.s - down_s)});
}

std::vector<FlowRigidityRow> flow_rigidity(const contfrac::IrrationalSpec& spec,
                                           const RoofFunction& roof, double t, double gamma,
                                           std::size_t n_min, std::size_t n_max,
                                           const FlowRigidityOptions& options) {
  if (t == 0.0 || !std::isfinite(t)) throw InvalidArgument("t", "must be finite and non-zero");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma", "must be positive");
  if (n_min < 1 || n_min > n_max) throw InvalidArgument("n_range", "need 1 <= a <= b");
  if (options.measure_points < 1) throw InvalidArgument("measure_points", "must be positive");
  const FixedRotation rot(spec);
  const auto q = contfrac::denominators(spec, n_max);
  const FourierObservable osc = roof.f().mean_zero();
  const double beta = roof.beta();
  const double eps = 1000.0 * gamma;
  std::vector<FlowRigidityRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    FlowRigidityRow row;
    row.n = n;
    row.q_n = q[n];
    const double qd = static_cast<double>(row.q_n);
    const double theta = t / (qd * beta);
    const double qg = std::pow(qd, gamma);
    const dynamics::EllRule rule = [&](std::size_t, std::int64_t) {
      return dynamics::EllBounds{qd * qg, 1.0 / (qd * qg)};
    };
    const dynamics::EllChoice v = dynamics::choose_ell_q(1, n, theta, rule);
    row.v_n = v.ell;
    row.relaxed = v.relaxed;
    row.j_n = std::llround(static_cast<double>(row.v_n) * theta);
    row.time_error = qd * beta * v.residual;
    const auto sup = dynamics::rigidity_sup(rot, osc, row.q_n, options.grid_size);
    row.oscillation = qg * (sup.grid_abs + sup.slack);
    row.rotation = qg * rot.dist(row.q_n);
    row.bound = row.oscillation + row.time_error + row.rotation;
    row.normalized = row.bound * std::pow(static_cast<double>(row.v_n), eps / 2000.0);
    const double tv = t * static_cast<double>(row.v_n);
    for (std::size_t i = 0; i < options.measure_points; ++i) {
      const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(options.measure_points);
      const SpecialFlowPoint p{x, 0.5 * roof(FixedRotation::from_unit(x))};
      const SpecialFlowPoint img = special_flow_step(rot, roof, p, tv);
      row.measured = std::max(row.measured, quotient_distance(rot, roof, img, p));
    }
    rows.push_back(row);
  }
  return rows;
}

double flow_apply(const FlowSpec& L, double t, double y) {
  if (const auto* lin = std::get_if<LinearFlow>(&L)) {
    return FixedRotation::to_unit(FixedRotation::from_unit(y) + FixedRotation::from_unit(lin->c * t));
  }
  return frac01(std::get<LipschitzFlow>(L).apply(t, y));
}

double flow_lipschitz(const FlowSpec& L) {
  if (const auto* lin = std::get_if<LinearFlow>(&L)) return std::fabs(lin->c);
  return std::get<LipschitzFlow>(L).lipschitz;
}

FlowSpec parse_flow(const std::string& text) {
  if (text == "identity") return LinearFlow{0.0};
  if (text.rfind("linear:", 0) == 0) {
    const std::string v = text.substr(7);
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty() || !std::isfinite(c)) {
      throw InvalidArgument("L", "bad speed '" + v + "'");
    }
    return LinearFlow{c};
  }
  throw InvalidArgument("L", "expected identity or linear:c, got '" + text + "'");
}

dynamics::Point rokhlin_apply(const FixedRotation& rot, const FourierObservable& f,
                              const FlowSpec& L, dynamics::Point p) {
  const u128 x = FixedRotation::from_unit(p.x);
  return {FixedRotation::to_unit(x + rot.step()), flow_apply(L, f.at_phase(x), p.y)};
}

std::vector<RokhlinRow> rokhlin_rigidity(const contfrac::IrrationalSpec& spec,
                                         const FourierObservable& f, const FlowSpec& L,
                                         std::size_t n_min, std::size_t n_max, double eps,
                                         std::size_t grid_size) {
  if (f.mean() != 0.0) throw InvalidArgument("f", "must have mean zero");
  if (!(eps > 0.0)) throw InvalidArgument("eps", "must be positive");
  if (n_min < 1 || n_min > n_max) throw InvalidArgument("n_range", "need 1 <= a <= b");
  const FixedRotation rot(spec);
  const auto q = contfrac::denominators(spec, n_max);
  const double lip = flow_lipschitz(L);
  std::vector<RokhlinRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    RokhlinRow row;
    row.n = n;
    row.q_n = q[n];
    row.rotation = rot.dist(row.q_n);
    const auto sup = dynamics::rigidity_sup(rot, f, row.q_n, grid_size);
    row.sup_S = sup.grid_abs + sup.slack;
    row.bound = row.rotation + lip * row.sup_S;
    double worst = 0.0;
    for (double s : dynamics::oscillation_grid(rot, f, row.q_n, grid_size)) {
      for (double y : {0.0, 0.25, 0.5, 0.75}) {
        worst = std::max(worst, torus_dist(flow_apply(L, s, y), y));
      }
    }
    row.measured = row.rotation + worst;
    row.normalized = row.bound * std::pow(static_cast<double>(row.q_n), eps / 200.0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace skewrig::flows
