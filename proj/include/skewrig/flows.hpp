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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "skewrig/contfrac.hpp"
#include "skewrig/dynamics.hpp"
#include "skewrig/fourier.hpp"
#include "skewrig/rotation.hpp"

namespace skewrig::flows {

/// Strictly positive roof with a certified lower bound.
class RoofFunction {
 public:
  /// Certifies min f >= grid min - Lipschitz / (2 grid_size); throws
  /// InvalidArgument unless that bound is positive.
  explicit RoofFunction(FourierObservable f, std::size_t grid_size = 4096);

  const FourierObservable& f() const { return f_; }
  double beta() const { return f_.mean(); }
  double min_value() const { return min_; }
  double operator()(u128 x) const { return f_.at_phase(x); }

 private:
  FourierObservable f_;
  double min_ = 0.0;
};

/// (x, s) with 0 <= s < f(x) once canonical.
struct SpecialFlowPoint {
  double x = 0.0;
  double s = 0.0;
};

struct FlowStep {
  SpecialFlowPoint point;
  std::int64_t N = 0;  ///< S_N(f)(x) <= s + t < S_{N+1}(f)(x)
  double S_N = 0.0;
  double S_next = 0.0;
};

/// Flow for time t. Short runs walk the orbit one step at a time; longer
/// ones jump to N ~ (s + t) / beta with the closed-form Birkhoff sum and
/// then walk.
FlowStep special_flow_step_detail(const FixedRotation& rot, const RoofFunction& roof,
                                  SpecialFlowPoint p, double t);
SpecialFlowPoint special_flow_step(const FixedRotation& rot, const RoofFunction& roof,
                                   SpecialFlowPoint p, double t);
/// Representative with 0 <= s < f(x) of the glued point (x, s).
SpecialFlowPoint canonicalize(const FixedRotation& rot, const RoofFunction& roof,
                              SpecialFlowPoint p);

/// S_N(f)(x) for any integer N, negative N meaning -sum_{N <= j < 0} f(x + j alpha).
double roof_sum(const FixedRotation& rot, const RoofFunction& roof, double x, std::int64_t N);

/// Surrogate quotient distance: min over n in {-1, 0, 1} of
/// ||x - x'_n|| + |s - s'_n|, (x'_n, s'_n) the n-fold glued copy of q.
double quotient_distance(const FixedRotation& rot, const RoofFunction& roof,
                         SpecialFlowPoint p, SpecialFlowPoint q);

struct FlowRigidityOptions {
  std::size_t grid_size = 1024;
  std::size_t measure_points = 16;
};

struct FlowRigidityRow {
  std::size_t n = 0;
  std::int64_t q_n = 0;
  std::int64_t v_n = 0;
  std::int64_t j_n = 0;
  bool relaxed = false;     ///< Dirichlet box bound used instead of q_n^{-1-gamma}
  double oscillation = 0.0; ///< q_n^gamma sup |S_{q_n}(f - beta)|
  double time_error = 0.0;  ///< |t v_n - j_n q_n beta|
  double rotation = 0.0;    ///< q_n^gamma ||q_n alpha||
  double bound = 0.0;       ///< sum of the three
  double normalized = 0.0;  ///< bound v_n^{eps/2000}, eps = 1000 gamma
  double measured = 0.0;    ///< max over start points of D(T_{t v_n} p, p)
};

/// Requires t != 0 and gamma > 0.
std::vector<FlowRigidityRow> flow_rigidity(const contfrac::IrrationalSpec& spec,
                                           const RoofFunction& roof, double t, double gamma,
                                           std::size_t n_min, std::size_t n_max,
                                           const FlowRigidityOptions& options = {});

/// L_t(y) = y + c t.
struct LinearFlow {
  double c = 1.0;
};
/// Any flow on the circle, Lipschitz in t with the declared constant.
struct LipschitzFlow {
  std::string label;
  std::function<double(double t, double y)> apply;
  double lipschitz = 1.0;
};
using FlowSpec = std::variant<LinearFlow, LipschitzFlow>;

double flow_apply(const FlowSpec& L, double t, double y);
double flow_lipschitz(const FlowSpec& L);
/// `identity` or `linear:c`.
FlowSpec parse_flow(const std::string& text);

/// (x + alpha, L_{f(x)}(y)).
dynamics::Point rokhlin_apply(const FixedRotation& rot, const FourierObservable& f,
                              const FlowSpec& L, dynamics::Point p);

struct RokhlinRow {
  std::size_t n = 0;
  std::int64_t q_n = 0;
  double rotation = 0.0;    ///< ||q_n alpha||
  double sup_S = 0.0;       ///< grid max |S_{q_n}(f)| + slack
  double bound = 0.0;       ///< rotation + Lip(L) sup_S
  double measured = 0.0;    ///< grid max of ||q_n alpha|| + rho(L_{S(x)}(y), y)
  double normalized = 0.0;  ///< bound q_n^{eps/200}
};

/// f must have mean zero.
std::vector<RokhlinRow> rokhlin_rigidity(const contfrac::IrrationalSpec& spec,
                                         const FourierObservable& f, const FlowSpec& L,
                                         std::size_t n_min, std::size_t n_max, double eps,
                                         std::size_t grid_size = 1024);

}  // namespace skewrig::flows
