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
#include <optional>
#include <vector>

#include "skewrig/contfrac.hpp"
#include "skewrig/fourier.hpp"

namespace skewrig::counterexample {

/// phi = (1/C) sum_{2 <= k <= K} 2 cos(2 pi q_k x) / (q_k (log q_k)^2).
struct CounterexamplePhi {
  contfrac::IrrationalSpec alpha;
  std::size_t K = 0;
  double C = 0.0;
  std::size_t K_proxy = 0;      ///< explicit terms in the series for C
  double series_tail = 0.0;     ///< bound on sum_{k > K_proxy} (log q_k)^-2
  double variation_bound = 0.0; ///< sum_k 8 / (C (log q_k)^2)
  std::vector<std::int64_t> q;  ///< q_0 .. q_K
  FourierObservable phi;
};

/// Requires K >= 3.
CounterexamplePhi build(const contfrac::IrrationalSpec& alpha, std::size_t K);

struct LowerBoundRow {
  std::size_t n = 0;
  std::int64_t q_n = 0;
  double D_hat = 0.0;
  double normalized = 0.0;       ///< D_hat (log q_n)^4
  double threshold_ratio = 0.0;  ///< D_hat / exp(-(log log q_n)^1.1); NaN for q_n < 3
  bool small_case = false;       ///< q_n ||q_n alpha|| < 1/2
  std::size_t dominant_k = 0;    ///< mode with the largest Parseval term
  double dominant_term = 0.0;
  std::optional<bool> next_below_double;  ///< q_{n+1} < 2 q_n, large case only
  double max_abs_S = 0.0;        ///< grid max of |S_{q_n}(phi)|
};

/// Rows for n_min <= n <= n_max <= K - 1.
std::vector<LowerBoundRow> lower_bound_table(const CounterexamplePhi& phi, std::size_t n_min,
                                             std::size_t n_max, std::size_t grid_size = 1024);

}  // namespace skewrig::counterexample
