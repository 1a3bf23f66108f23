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

#include "skewrig/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewrig/errors.hpp"
#include "skewrig/rotation.hpp"

namespace skewrig::mobius {

MobiusTable sieve(std::size_t N) {
  if (N < 1) throw InvalidArgument("N", "must be at least 1");
  std::vector<std::int8_t> mu(N + 1, 0);
  std::vector<bool> composite(N + 1, false);
  std::vector<std::uint32_t> primes;
  mu[1] = 1;
  for (std::size_t i = 2; i <= N; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (std::uint32_t p : primes) {
      const std::size_t ip = i * p;
      if (ip > N) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return MobiusTable(std::move(mu));
}

int mobius_trial(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("n", "must be positive");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::int64_t mertens(const MobiusTable& table, std::size_t N) {
  if (N > table.size()) throw InvalidArgument("N", "beyond the sieved range");
  std::int64_t m = 0;
  for (std::size_t n = 1; n <= N; ++n) m += table(n);
  return m;
}

DecayProfile disjointness_sum(const contfrac::IrrationalSpec& alpha, const FourierObservable& phi,
                              std::int64_t a, std::int64_t b, double x0, double y0,
                              std::vector<std::size_t> checkpoints, const MobiusTable* table) {
  if (checkpoints.empty()) throw InvalidArgument("checkpoints", "need at least one");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.front() < 1) throw InvalidArgument("checkpoints", "must be positive");
  const std::size_t N = checkpoints.back();
  MobiusTable own;
  if (table == nullptr || table->size() < N) {
    own = sieve(N);
    table = &own;
  }
  const FixedRotation rot(alpha);
  const u128 ua = static_cast<u128>(static_cast<__int128>(a));
  const u128 ub = static_cast<u128>(static_cast<__int128>(b));
  u128 x = FixedRotation::from_unit(x0);
  u128 y = FixedRotation::from_unit(y0);
  CompensatedSum re, im;
  DecayProfile out;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= N; ++n) {
    y += FixedRotation::from_unit(phi.at_phase(x));
    x += rot.step();
    const int mu = (*table)(n);
    if (mu != 0) {
      const double ang = 2.0 * std::numbers::pi * FixedRotation::to_signed(ua * x + ub * y);
      re.add(mu * std::cos(ang));
      im.add(mu * std::sin(ang));
    }
    if (n == checkpoints[next]) {
      const double nd = static_cast<double>(n);
      out.checkpoints.push_back({n, {re.value() / nd, im.value() / nd}});
      ++next;
    }
  }
  return out;
}

}  // namespace skewrig::mobius
