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
#include <vector>

#include "skewrig/contfrac.hpp"
#include "skewrig/fourier.hpp"
#include "skewrig/rotation.hpp"

namespace skewrig::dynamics {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// (x + alpha, y + phi(x)) mod 1.
Point apply(const FixedRotation& rot, const FourierObservable& phi, Point p);

/// S_r(phi)(x) by summing phi along the orbit; S_0 = 0.
double birkhoff_direct(const FourierObservable& phi, const FixedRotation& rot, double x,
                       std::int64_t r);

struct Certified {
  double value = 0.0;
  double error = 0.0;  ///< bound on the truncation tail
};

/// S_r(phi)(x) from the closed geometric sums, modes with q <= q_tail
/// (all when q_tail <= 0); the tail is bounded by
/// sum |c_q| min(1 / |sin(pi q alpha)|, r).
Certified birkhoff_fourier(const FourierObservable& phi, const FixedRotation& rot, double x,
                           std::int64_t r, std::int64_t q_tail = 0);

/// G_q(r) = (1 - e(q r alpha)) / (1 - e(q alpha)).
std::complex<double> geometric_factor(const FixedRotation& rot, std::int64_t q, std::int64_t r);

/// Bound (L, tau) on the search 0 < l <= L, ||l q_n c0|| < tau.
struct EllBounds {
  double bound = 1.0;
  double threshold = 1.0;
};
using EllRule = std::function<EllBounds(std::size_t n, std::int64_t q_n)>;

struct EllChoice {
  std::int64_t ell = 1;
  double residual = 0.0;  ///< ||ell q_n c0||
  bool relaxed = false;   ///< threshold replaced by 1 / (floor(L) + 1)
};

/// (q_n^delta, q_n^-delta).
EllRule delta_rule(double delta);
/// (lambda(n)^{1/2}, lambda(n)^{-1/2}).
EllRule lambda_rule(std::function<double(std::size_t)> lambda);
/// (psi(q_n)^{1/10}, psi(q_n)^{-1/10}).
EllRule psi_rule(std::function<double(double)> psi);

/// Smallest ell for the given rule; falls back to the Dirichlet box bound
/// when the strict threshold has no solution. Throws NoSolution when
/// floor(L) < 1.
EllChoice choose_ell_general(const contfrac::IrrationalSpec& spec, std::size_t n, double c0,
                             const EllRule& rule);
EllChoice choose_ell(const contfrac::IrrationalSpec& spec, std::size_t n, double c0,
                     double delta);
/// Same search with q_n given.
EllChoice choose_ell_q(std::int64_t q_n, std::size_t n, double c0, const EllRule& rule);

struct L2Hat {
  double value = 0.0;     ///< rotation + mean + parseval + tail
  double rotation = 0.0;  ///< ||r alpha||^2
  double mean = 0.0;      ///< ||c0 r||^2
  double parseval = 0.0;  ///< sum over |q| <= q_tail of |c_q|^2 |G_q(r)|^2
  double tail = 0.0;
  std::int64_t q_tail = 0;
};

/// Parseval surrogate of the L2 rigidity quantity; Q_tail doubles from 16
/// until the certified tail is at most 1e-3 of the value.
L2Hat rigidity_l2_hat(const FixedRotation& rot, const FourierObservable& phi, std::int64_t r);

struct Quadrature {
  double value = 0.0;
  double error = 0.0;  ///< |Q_G - Q_2G|
};

/// ||r alpha||^2 + mean over x_i = (i + 1/2)/G of ||S_r(phi)(x_i)||^2.
Quadrature rigidity_l2_direct(const FixedRotation& rot, const FourierObservable& phi,
                              std::int64_t r, std::size_t grid_size);

struct SupBound {
  double value = 0.0;     ///< ||r alpha|| + min(1/2, grid_norm + slack)
  double grid_norm = 0.0; ///< max_i ||S_r(phi)(x_i)||
  double grid_abs = 0.0;  ///< max_i |S_r(phi - c0)(x_i)|
  double slack = 0.0;     ///< Lipschitz(S_r) / (2G)
};

SupBound rigidity_sup(const FixedRotation& rot, const FourierObservable& phi, std::int64_t r,
                      std::size_t grid_size);

/// Values of S_r(phi - c0) at x_i = (i + 1/2)/G.
std::vector<double> oscillation_grid(const FixedRotation& rot, const FourierObservable& phi,
                                     std::int64_t r, std::size_t grid_size);

struct RigidityConfig {
  double eps = 0.005;
  double delta = 0.0;   ///< 0 means eps / 10
  double lambda = 0.0;  ///< 0 means eps / 100
  std::size_t n_min = 1;
  std::size_t n_max = 20;
  std::size_t grid_size = 1024;
  bool sup = true;
  std::size_t growth_min_hits = 3;

  double delta_value() const { return delta > 0.0 ? delta : eps / 10.0; }
  double lambda_value() const { return lambda > 0.0 ? lambda : eps / 100.0; }
  /// eps outside (0, 1/100).
  bool out_of_hypothesis() const { return !(eps > 0.0 && eps < 0.01); }
  /// Throws InvalidArgument naming the field.
  void validate() const;
};

struct RigidityEntry {
  std::size_t n = 0;
  std::int64_t q_n = 0;
  std::int64_t ell_n = 1;
  bool ell_relaxed = false;
  std::int64_t r_n = 0;
  double D_l2_hat = 0.0;
  double D_l2_direct = 0.0;
  double D_l2_direct_error = 0.0;
  double D_sup = 0.0;  ///< NaN when not requested
  double bound = 0.0;  ///< r_n^-lambda
};

struct RigiditySequence {
  bool case1 = false;
  bool out_of_hypothesis = false;
  std::vector<RigidityEntry> entries;
};

RigiditySequence build_rigidity_sequence(const contfrac::IrrationalSpec& spec,
                                         const FourierObservable& phi,
                                         const RigidityConfig& config);

struct PrRow {
  std::size_t n = 0;
  std::int64_t r_n = 0;
  std::int64_t K = 0;            ///< floor(r_n^{eps/400}), at least 1
  double base = 0.0;             ///< ||f o T^r - f||^2 by quadrature
  double bound_sum = 0.0;        ///< sum over 0 < |k| <= K of k^2 base
  double direct_sum = 0.0;       ///< same sum, each term by quadrature
  bool scaling_ok = true;        ///< every term <= k^2 base + tolerance
};

/// PR rigidity sums for the character f = e(a x + b y).
std::vector<PrRow> pr_rigidity_check(const contfrac::IrrationalSpec& spec,
                                     const FourierObservable& phi, const RigidityConfig& config,
                                     std::int64_t a, std::int64_t b);

/// ||f o T^{k r} - f||^2 for f = e(a x + b y) by midpoint quadrature.
double character_displacement(const FixedRotation& rot, const FourierObservable& phi,
                              std::int64_t r, std::int64_t a, std::int64_t b,
                              std::size_t grid_size);

struct EquidistributionResult {
  double lhs = 0.0;
  double bound = 0.0;
  bool pass = false;
};

EquidistributionResult equidistribution_check(const FixedRotation& rot, double x,
                                              std::int64_t N, std::int64_t q);

}  // namespace skewrig::dynamics
