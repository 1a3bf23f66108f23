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

#include "skewrig/counterexample.hpp"

#include <cmath>
#include <numbers>

#include "skewrig/dynamics.hpp"
#include "skewrig/errors.hpp"
#include "skewrig/rotation.hpp"

namespace skewrig::counterexample {

namespace {

constexpr std::size_t kProxyTerms = 64;

}  // namespace

CounterexamplePhi build(const contfrac::IrrationalSpec& alpha, std::size_t K) {
  if (K < 3) throw InvalidArgument("K", "must be at least 3");
  CounterexamplePhi out{alpha, K, 0.0, 0, 0.0, 0.0, {}, {}};
  out.q = contfrac::denominators(alpha, K);

  // sum_{k >= 2} (log q_k)^-2: explicit up to K_proxy, then q_k >= 2^{(k-1)/2}
  // gives (4 / log^2 2) sum_{j >= K_proxy} j^-2 <= (4 / log^2 2) / (K_proxy - 1).
  std::size_t proxy = std::max(K, kProxyTerms);
  std::vector<contfrac::Convergent> cv;
  for (;;) {
    try {
      const auto a = contfrac::expand(alpha, proxy);
      cv = contfrac::convergents(a, proxy);
      break;
    } catch (const PrecisionExhausted&) {
      if (proxy <= K) throw;
      proxy = std::max(K, proxy - 8);
    }
  }
  double series = 0.0;
  for (std::size_t k = 2; k <= proxy; ++k) {
    const double l = log(cv[k].q);
    series += 1.0 / (l * l);
  }
  const double ln2 = std::numbers::ln2;
  out.K_proxy = proxy;
  out.series_tail = 4.0 / (ln2 * ln2) / static_cast<double>(proxy - 1);
  out.C = 1.0 + 32.0 * (series + out.series_tail);

  std::vector<Mode> modes;
  double var = 0.0;
  for (std::size_t k = 2; k <= K; ++k) {
    const auto q = out.q[k];
    const double l = std::log(static_cast<double>(q));
    modes.push_back({q, {1.0 / (out.C * static_cast<double>(q) * l * l), 0.0}});
    var += 8.0 / (out.C * l * l);
  }
  out.variation_bound = var;
  const double C = out.C;
  // Slightly loosened so rounding in the stored coefficients stays inside.
  PsiEnvelope env{"C*(log q)^2", [C](double q) {
                    const double l = std::log(q);
                    return C * l * l * (1.0 - 1e-12);
                  }};
  out.phi = FourierObservable(0.0, std::move(modes), std::move(env));
  return out;
}

std::vector<LowerBoundRow> lower_bound_table(const CounterexamplePhi& cp, std::size_t n_min,
                                             std::size_t n_max, std::size_t grid_size) {
  if (n_min < 1 || n_min > n_max) throw InvalidArgument("n_range", "need 1 <= a <= b");
  if (n_max + 1 > cp.K) throw InvalidArgument("n_range", "n must stay within K - 1");
  const FixedRotation rot(cp.alpha);
  std::vector<LowerBoundRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    LowerBoundRow row;
    row.n = n;
    row.q_n = cp.q[n];
    const auto h = dynamics::rigidity_l2_hat(rot, cp.phi, row.q_n);
    row.D_hat = h.value;
    const double lq = std::log(static_cast<double>(row.q_n));
    row.normalized = row.D_hat * std::pow(lq, 4);
    row.threshold_ratio = row.q_n >= 3 ? row.D_hat / std::exp(-std::pow(std::log(lq), 1.1))
                                       : std::nan("");

    // q_n ||q_n alpha|| against 1/2 in exact arithmetic.
    const BigInt qn(static_cast<long>(row.q_n));
    const auto nv = contfrac::dist_nearest_int(qn, cp.alpha, 256);
    const BigRational half(1, 2);
    if (BigRational(nv.hi * qn) < half) {
      row.small_case = true;
    } else if (BigRational(nv.lo * qn) > half) {
      row.small_case = false;
      const auto qs = contfrac::denominators(cp.alpha, n + 1);
      row.next_below_double = qs[n + 1] < 2 * qs[n];
    } else {
      throw PrecisionExhausted("cannot decide q_n ||q_n alpha|| against 1/2");
    }

    for (std::size_t k = 2; k <= cp.K; ++k) {
      const Mode& m = cp.phi.modes()[k - 2];
      const double t = 2.0 * std::norm(m.c) * std::norm(dynamics::geometric_factor(rot, m.q, row.q_n));
      if (t > row.dominant_term) {
        row.dominant_term = t;
        row.dominant_k = k;
      }
    }
    row.max_abs_S = dynamics::rigidity_sup(rot, cp.phi, row.q_n, grid_size).grid_abs;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace skewrig::counterexample
