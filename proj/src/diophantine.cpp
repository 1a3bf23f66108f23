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

#include "skewrig/diophantine.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <thread>

#if defined(__SSE2__)
#include <immintrin.h>
#endif

#include "skewrig/errors.hpp"
#include "skewrig/rotation.hpp"

namespace skewrig::diophantine {

using contfrac::IrrationalSpec;

namespace {

constexpr double kU = 0x1p-53;
constexpr std::int64_t kSumBlock = 1 << 16;
constexpr std::int64_t kDKBlock = 256;

// ---------------------------------------------------------------------------
// MPFR enclosures

BigRational mpfr_exact(const mpfr_t v) {
  BigInt m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
  BigRational r(m);
  if (e >= 0) {
    r *= BigRational(pow2(static_cast<unsigned>(e)));
  } else {
    r /= BigRational(pow2(static_cast<unsigned>(-e)));
  }
  r.canonicalize();
  return r;
}

Interval log_enclosure(const BigRational& x) {
  mpfr_t a;
  mpfr_init2(a, 192);
  mpfr_set_q(a, x.get_mpq_t(), MPFR_RNDD);
  mpfr_log(a, a, MPFR_RNDD);
  BigRational lo = mpfr_exact(a);
  mpfr_set_q(a, x.get_mpq_t(), MPFR_RNDU);
  mpfr_log(a, a, MPFR_RNDU);
  BigRational hi = mpfr_exact(a);
  mpfr_clear(a);
  return {lo, hi};
}

BigRational sqrt_upper(const BigRational& x) {
  mpfr_t a;
  mpfr_init2(a, 128);
  mpfr_set_q(a, x.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(a, a, MPFR_RNDU);
  BigRational r = mpfr_exact(a);
  mpfr_clear(a);
  return r;
}

// ---------------------------------------------------------------------------
// Fixed point with scale 2^P

BigInt fix_floor(const BigRational& x, unsigned P) {
  return floor_div(BigInt(x.get_num() << P), x.get_den());
}
BigInt fix_ceil(const BigRational& x, unsigned P) {
  return -floor_div(BigInt(-(x.get_num() << P)), x.get_den());
}
BigInt cdiv(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
BigInt fdiv(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
double fix_to_double(const BigInt& v, unsigned P) {
  return to_double(BigRational(v, pow2(P)));
}

struct FixPair {
  BigInt lo, hi;
};

FixPair fix_enclose_double(double lo, double hi, unsigned P) {
  lo = std::nextafter(lo, -HUGE_VAL);
  hi = std::nextafter(hi, HUGE_VAL);
  return {fix_floor(from_double(lo), P), fix_ceil(from_double(hi), P)};
}

// ||.|| in fixed point from a bracket of frac(.) in [0, 1].
FixPair dist_from_frac(const FixPair& z, unsigned P) {
  const BigInt one = pow2(P);
  const BigInt half = pow2(P - 1);
  BigInt lo = z.lo < 0 ? BigInt(0) : z.lo;
  BigInt hi = z.hi > one ? one : z.hi;
  if (hi <= half) return {lo, hi};
  if (lo >= half) return {one - hi, one - lo};
  return {std::min(lo, BigInt(one - hi)), half};
}

FixPair dist_fixed(const BigInt& q, const IrrationalSpec& spec, unsigned P,
                   std::optional<SurdValue>* exact) {
  const auto nv = contfrac::dist_nearest_int(q, BigRational(0), spec, P + 4);
  if (exact != nullptr) *exact = nv.value;
  FixPair r{fix_floor(nv.lo, P), fix_ceil(nv.hi, P)};
  if (r.lo < 0) r.lo = 0;
  return r;
}

// ---------------------------------------------------------------------------
// Convergent data

struct QTable {
  std::vector<BigInt> a;
  std::vector<contfrac::Convergent> conv;
  const BigInt& q(std::size_t n) const { return conv.at(n).q; }
};

QTable qtable(const IrrationalSpec& spec, std::size_t n) {
  QTable t;
  t.a = contfrac::expand(spec, n);
  t.conv = contfrac::convergents(t.a, n);
  return t;
}

std::int64_t checked_q(const BigInt& q, const char* what) {
  if (!fits_int64(q) || q > BigInt("4611686018427387904")) {
    throw PrecisionExhausted(std::string(what) + " exceeds the 62-bit orbit index range");
  }
  return to_int64(q);
}

// ---------------------------------------------------------------------------
// Fast 128-bit kernel for sums over q

// Coarse conversions lose at most this much on top of the phase error.
constexpr double kCoarse = 0x1p-63;

inline double abs_dist(u128 x) { return FixedRotation::to_dist_coarse(x); }

// Branch-free minimum; orbit values cross the cap unpredictably.
inline double min_nb(double a, double b) {
#if defined(__SSE2__)
  return _mm_cvtsd_f64(_mm_min_sd(_mm_set_sd(a), _mm_set_sd(b)));
#else
  return std::min(a, b);
#endif
}

template <std::size_t N>
struct FastResult {
  std::array<double, N> sum{};
  double min_d = 1.0;
};

// sum over q in [q0, q1) of term(||q alpha||, q, acc) in blocks of
// kSumBlock; block partials are combined in index order, so the result does
// not depend on the thread count.
template <std::size_t N, class Term>
FastResult<N> fast_sum(const FixedRotation& rot, std::int64_t q0, std::int64_t q1,
                       unsigned threads, const Term& term) {
  FastResult<N> out;
  if (q1 <= q0) return out;
  const std::int64_t nblocks = (q1 - q0 + kSumBlock - 1) / kSumBlock;
  std::vector<std::array<double, N>> blocks(static_cast<std::size_t>(nblocks));
  std::vector<double> mins(static_cast<std::size_t>(nblocks), 1.0);
  const u128 step = rot.step();
  auto work = [&](std::int64_t b0, std::int64_t b1) {
    for (std::int64_t b = b0; b < b1; ++b) {
      const std::int64_t s = q0 + b * kSumBlock;
      const std::int64_t e = std::min(s + kSumBlock, q1);
      u128 x = rot.phase(s);
      std::array<double, N> acc{};
      double mn = 1.0;
      double qd = static_cast<double>(s);
      for (std::int64_t q = s; q < e; ++q) {
        const double d = abs_dist(x);
        mn = min_nb(mn, d);
        term(d, qd, acc);
        x += step;
        qd += 1.0;
      }
      blocks[static_cast<std::size_t>(b)] = acc;
      mins[static_cast<std::size_t>(b)] = mn;
    }
  };
  const unsigned nt =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nblocks)));
  if (nt == 1) {
    work(0, nblocks);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) {
      pool.emplace_back(work, nblocks * t / nt, nblocks * (t + 1) / nt);
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < N; ++i) {
    CompensatedSum cs;
    for (const auto& blk : blocks) cs.add(blk[i]);
    out.sum[i] = cs.value();
  }
  out.min_d = *std::min_element(mins.begin(), mins.end());
  return out;
}

// Relative error of a computed ||q alpha|| for q < q_max, given the
// smallest computed distance.
double dist_rel_error(const FixedRotation& rot, double q_max, double min_d) {
  const double eabs = rot.phase_error(q_max) + kCoarse;
  const double floor_d = min_d * (1.0 - 4.0 * kU) - eabs;
  if (!(floor_d > 0.0)) throw PrecisionExhausted("orbit point indistinguishable from 0");
  return 3.0 * kU + eabs / floor_d;
}

enum class Kind { InvSq, Inv, SliceSq, SliceL1 };

struct RangeSum {
  double value = 0.0;
  double err = 0.0;
  bool exact = false;
  bool symmetric = true;
};

// Both signs of q in [q0, q1), 1 <= q0.
std::vector<RangeSum> exact_range(const IrrationalSpec& spec, std::int64_t q0, std::int64_t q1,
                                  Kind kind, std::span<const double> cs, unsigned P) {
  const std::size_t nc = std::max<std::size_t>(1, cs.size());
  std::vector<BigInt> lo(nc, 0), hi(nc, 0);
  std::vector<FixPair> caps;
  const BigInt one = pow2(P);
  const BigInt one2 = pow2(2 * P);
  const BigInt one3 = pow2(3 * P);
  for (double c : cs) {
    const BigRational cr = from_double(c);
    caps.push_back({fix_floor(cr * cr, P), fix_ceil(cr * cr, P)});
  }
  bool symmetric = true;
  for (std::int64_t q = q0; q < q1; ++q) {
    std::optional<SurdValue> ep, en;
    const FixPair dp = dist_fixed(BigInt(q), spec, P, &ep);
    const FixPair dn = dist_fixed(BigInt(-q), spec, P, &en);
    if (ep && en) {
      symmetric = symmetric && compare(*ep, *en) == 0;
    } else {
      symmetric = symmetric && !(dp.hi < dn.lo || dn.hi < dp.lo);
    }
    const BigInt q2 = BigInt(q) * BigInt(q);
    for (const FixPair* dptr : {&dp, &dn}) {
      const FixPair& d = *dptr;
      if (kind == Kind::InvSq || kind == Kind::Inv) {
        if (sgn(d.lo) <= 0) throw PrecisionExhausted("||q alpha|| bracket touches 0");
        if (kind == Kind::InvSq) {
          lo[0] += fdiv(one3, d.hi * d.hi);
          hi[0] += cdiv(one3, d.lo * d.lo);
        } else {
          lo[0] += fdiv(one2, d.hi);
          hi[0] += cdiv(one2, d.lo);
        }
      } else {
        const BigInt inv_lo = fdiv(one3, d.hi * d.hi);
        for (std::size_t i = 0; i < nc; ++i) {
          const BigInt inv_hi = sgn(d.lo) > 0 ? cdiv(one3, d.lo * d.lo) : caps[i].hi;
          lo[i] += fdiv(std::min(inv_lo, caps[i].lo), q2);
          hi[i] += cdiv(std::min(inv_hi, caps[i].hi), q2);
        }
      }
    }
  }
  std::vector<RangeSum> out(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const double l = fix_to_double(lo[i], P);
    const double h = fix_to_double(hi[i], P);
    out[i].value = 0.5 * (l + h);
    out[i].err = 0.5 * (h - l) + 4.0 * kU * std::fabs(h);
    out[i].exact = true;
    out[i].symmetric = symmetric;
  }
  (void)one;
  return out;
}

// Both signs of q in [q0, q1) via the 128-bit kernel. ||-q alpha|| equals
// ||q alpha|| exactly in fixed point, so the positive half is doubled.
std::vector<RangeSum> fast_range(const FixedRotation& rot, std::int64_t q0, std::int64_t q1,
                                 Kind kind, std::span<const double> cs, double eps,
                                 unsigned threads) {
  const std::size_t nc = std::max<std::size_t>(1, cs.size());
  std::vector<RangeSum> out(nc);
  if (q1 <= q0) return out;
  std::vector<double> sums(nc, 0.0);
  double min_d = 1.0;
  double term_rel = 0.0;  // multiplier of the distance relative error
  double op_rel = 0.0;    // rounding in the term itself
  switch (kind) {
    case Kind::InvSq: {
      auto r = fast_sum<1>(rot, q0, q1, threads, [](double d, double, std::array<double, 1>& a) {
        a[0] += 1.0 / (d * d);
      });
      sums[0] = r.sum[0];
      min_d = r.min_d;
      term_rel = 2.0;
      op_rel = 3.0 * kU;
      break;
    }
    case Kind::Inv: {
      auto r = fast_sum<1>(rot, q0, q1, threads,
                           [](double d, double, std::array<double, 1>& a) { a[0] += 1.0 / d; });
      sums[0] = r.sum[0];
      min_d = r.min_d;
      term_rel = 1.0;
      op_rel = 2.0 * kU;
      break;
    }
    case Kind::SliceSq: {
      for (std::size_t base = 0; base < nc; base += 4) {
        std::array<double, 4> c2{};
        const std::size_t m = std::min<std::size_t>(4, nc - base);
        for (std::size_t i = 0; i < m; ++i) c2[i] = cs[base + i] * cs[base + i];
        auto r = fast_sum<4>(rot, q0, q1, threads,
                             [&c2, m](double d, double q, std::array<double, 4>& a) {
                               const double inv = 1.0 / (d * d);
                               const double w = 1.0 / (q * q);
                               for (std::size_t i = 0; i < m; ++i) a[i] += min_nb(inv, c2[i]) * w;
                             });
        for (std::size_t i = 0; i < m; ++i) sums[base + i] = r.sum[i];
        min_d = std::min(min_d, r.min_d);
      }
      term_rel = 2.0;
      op_rel = 7.0 * kU;  // c^2 itself is rounded once
      break;
    }
    case Kind::SliceL1: {
      const double ex = -(1.0 + eps);
      for (std::size_t base = 0; base < nc; base += 4) {
        std::array<double, 4> cc{};
        const std::size_t m = std::min<std::size_t>(4, nc - base);
        for (std::size_t i = 0; i < m; ++i) cc[i] = cs[base + i];
        auto r = fast_sum<4>(rot, q0, q1, threads,
                             [&cc, m, ex](double d, double q, std::array<double, 4>& a) {
                               const double inv = 1.0 / d;
                               const double w = std::pow(q, ex);
                               for (std::size_t i = 0; i < m; ++i) a[i] += min_nb(inv, cc[i]) * w;
                             });
        for (std::size_t i = 0; i < m; ++i) sums[base + i] = r.sum[i];
        min_d = std::min(min_d, r.min_d);
      }
      term_rel = 1.0;
      // exponent rounding contributes u (1 + eps) ln q relative error
      op_rel = (6.0 + 2.0 * (1.0 + eps) * std::log(static_cast<double>(q1))) * kU;
      break;
    }
  }
  const double r = dist_rel_error(rot, static_cast<double>(q1), min_d);
  const double rel = term_rel * r + op_rel + static_cast<double>(kSumBlock + 4) * kU;
  for (std::size_t i = 0; i < nc; ++i) {
    out[i].value = 2.0 * sums[i];
    out[i].err = out[i].value * rel * (1.0 + 1e-6);
  }
  return out;
}

bool use_exact(const SumOptions& opts, std::int64_t q_hi) {
  switch (opts.path) {
    case SumPath::Exact:
      return true;
    case SumPath::Fast:
      return false;
    case SumPath::Auto:
      return static_cast<std::uint64_t>(q_hi) <= opts.exact_limit;
  }
  return false;
}

std::vector<RangeSum> range_sum(const IrrationalSpec& spec, const FixedRotation* rot,
                                std::int64_t q0, std::int64_t q1, Kind kind,
                                std::span<const double> cs, double eps, const SumOptions& opts) {
  if (kind != Kind::SliceL1 && use_exact(opts, q1 - 1)) {
    return exact_range(spec, q0, q1, kind, cs, opts.precision_bits);
  }
  if (kind == Kind::SliceL1 && opts.path == SumPath::Exact) {
    throw InvalidArgument("path", "sum_slice_min_l1 has no exact path");
  }
  return fast_range(*rot, q0, q1, kind, cs, eps, opts.threads);
}

void check_options(const SumOptions& opts) {
  if (opts.precision_bits < 64) throw InvalidArgument("precision_bits", "must be >= 64");
}

SumReport make_report(std::size_t k, const BigInt& qk, const RangeSum& r, std::uint64_t terms) {
  SumReport rep;
  rep.k = k;
  rep.q_k = qk;
  rep.value = r.value;
  rep.error_bound = r.err;
  rep.term_count = terms;
  rep.exact_path = r.exact;
  rep.symmetric = r.symmetric;
  return rep;
}

RangeSum combine(const RangeSum& a, const RangeSum& b) {
  return {a.value + b.value, a.err + b.err + 2.0 * kU * std::fabs(a.value + b.value),
          a.exact && b.exact, a.symmetric && b.symmetric};
}

}  // namespace

// ---------------------------------------------------------------------------
// Sums

std::vector<SumReport> sum_inverse_sq_scan(const IrrationalSpec& spec, std::size_t k_min,
                                           std::size_t k_max, const SumOptions& opts) {
  check_options(opts);
  if (k_min < 2) throw InvalidArgument("k", "must be >= 2");
  if (k_min > k_max) throw InvalidArgument("k", "k_min must not exceed k_max");
  const QTable t = qtable(spec, k_max);
  checked_q(t.q(k_max), "q_k");
  std::optional<FixedRotation> rot;
  if (!use_exact(opts, to_int64(t.q(k_max)))) rot.emplace(spec);
  std::vector<SumReport> out;
  RangeSum acc{0.0, 0.0, true, true};
  std::int64_t done = 1;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const std::int64_t qk = to_int64(t.q(k));
    if (qk > done) {
      acc = combine(acc, range_sum(spec, rot ? &*rot : nullptr, done, qk, Kind::InvSq, {}, 0.0,
                                   opts)[0]);
      done = qk;
    }
    if (k >= k_min) {
      SumReport rep = make_report(k, t.q(k), acc, 2 * static_cast<std::uint64_t>(qk - 1));
      const double q = to_double(t.q(k));
      rep.normalized_ratio = rep.value / (q * q);
      out.push_back(rep);
    }
  }
  return out;
}

SumReport sum_inverse_sq(const IrrationalSpec& spec, std::size_t k, const SumOptions& opts) {
  return sum_inverse_sq_scan(spec, k, k, opts).front();
}

std::vector<SumReport> sum_slice_min_multi(const IrrationalSpec& spec, std::size_t k,
                                           std::span<const double> cs, const SumOptions& opts) {
  check_options(opts);
  for (double c : cs) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("c", "must be positive");
  }
  if (cs.empty()) return {};
  if (k < 1) throw InvalidArgument("k", "must be >= 1");
  const QTable t = qtable(spec, k + 1);
  for (double c : cs) {
    if (c < 1.0 || BigRational(from_double(c)) > BigRational(t.q(k))) {
      throw InvalidArgument("c", "must lie in [1, q_k]");
    }
  }
  const std::int64_t q0 = checked_q(t.q(k), "q_k");
  const std::int64_t q1 = checked_q(t.q(k + 1), "q_{k+1}");
  std::optional<FixedRotation> rot;
  if (!use_exact(opts, q1 - 1)) rot.emplace(spec);
  const auto sums = range_sum(spec, rot ? &*rot : nullptr, q0, q1, Kind::SliceSq, cs, 0.0, opts);
  std::vector<SumReport> out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    SumReport rep = make_report(k, t.q(k), sums[i], 2 * static_cast<std::uint64_t>(q1 - q0));
    rep.c = cs[i];
    rep.normalized_ratio = rep.value * static_cast<double>(q0) / cs[i];
    out.push_back(rep);
  }
  return out;
}

SumReport sum_slice_min(const IrrationalSpec& spec, std::size_t k, double c,
                        const SumOptions& opts) {
  const double cs[1] = {c};
  return sum_slice_min_multi(spec, k, cs, opts).front();
}

SumReport sum_inverse_l1(const IrrationalSpec& spec, std::size_t k, const SumOptions& opts) {
  check_options(opts);
  if (k < 2) throw InvalidArgument("k", "must be >= 2");
  const QTable t = qtable(spec, k);
  const std::int64_t qk = checked_q(t.q(k), "q_k");
  std::optional<FixedRotation> rot;
  if (!use_exact(opts, qk - 1)) rot.emplace(spec);
  RangeSum r{0.0, 0.0, true, true};
  if (qk > 1) r = range_sum(spec, rot ? &*rot : nullptr, 1, qk, Kind::Inv, {}, 0.0, opts)[0];
  SumReport rep = make_report(k, t.q(k), r, 2 * static_cast<std::uint64_t>(qk - 1));
  const double q = static_cast<double>(qk);
  rep.normalized_ratio = rep.value / (q * std::log(q + 1.0));
  return rep;
}

SumReport sum_slice_min_l1(const IrrationalSpec& spec, std::size_t k, double c, double eps,
                           const SumOptions& opts) {
  check_options(opts);
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("c", "must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps", "must lie in (0, 1)");
  if (k < 1) throw InvalidArgument("k", "must be >= 1");
  const QTable t = qtable(spec, k + 1);
  if (c < 1.0 || BigRational(from_double(c)) > BigRational(t.q(k))) {
    throw InvalidArgument("c", "must lie in [1, q_k]");
  }
  const std::int64_t q0 = checked_q(t.q(k), "q_k");
  const std::int64_t q1 = checked_q(t.q(k + 1), "q_{k+1}");
  const FixedRotation rot(spec);
  const double cs[1] = {c};
  const auto r = range_sum(spec, &rot, q0, q1, Kind::SliceL1, cs, eps, opts)[0];
  SumReport rep = make_report(k, t.q(k), r, 2 * static_cast<std::uint64_t>(q1 - q0));
  rep.c = c;
  rep.eps = eps;
  rep.normalized_ratio = rep.value * std::pow(static_cast<double>(q0), eps) / std::log(c + 1.0);
  return rep;
}

BlockDecomposition slice_blocks(const IrrationalSpec& spec, std::size_t k, double c,
                                unsigned precision_bits) {
  if (!(c > 0.0)) throw InvalidArgument("c", "must be positive");
  const QTable t = qtable(spec, k + 1);
  const std::int64_t qk = checked_q(t.q(k), "q_k");
  const std::int64_t q1 = checked_q(t.q(k + 1), "q_{k+1}");
  const std::int64_t a = to_int64(t.a.at(k + 1));
  const unsigned P = precision_bits;
  const BigRational cr = from_double(c);
  const FixPair cap{fix_floor(cr * cr, P), fix_ceil(cr * cr, P)};
  const BigInt one3 = pow2(3 * P);
  BlockDecomposition out;
  out.scale_bits = P;
  std::vector<std::int64_t> edges;
  for (std::int64_t j = 1; j < a; ++j) edges.push_back(j * qk);
  edges.push_back(a * qk);
  edges.push_back(q1);
  std::vector<BigInt> terms_lo, terms_hi;
  out.total_lo = 0;
  out.total_hi = 0;
  for (std::int64_t q = qk; q < q1; ++q) {
    const FixPair d = dist_fixed(BigInt(q), spec, P, nullptr);
    const BigInt q2 = BigInt(q) * BigInt(q);
    const BigInt inv_lo = fdiv(one3, d.hi * d.hi);
    const BigInt inv_hi = sgn(d.lo) > 0 ? cdiv(one3, d.lo * d.lo) : cap.hi;
    terms_lo.push_back(fdiv(std::min(inv_lo, cap.lo), q2));
    terms_hi.push_back(cdiv(std::min(inv_hi, cap.hi), q2));
    out.total_lo += terms_lo.back();
    out.total_hi += terms_hi.back();
  }
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    BigInt lo = 0, hi = 0;
    for (std::int64_t q = edges[b]; q < edges[b + 1]; ++q) {
      lo += terms_lo[static_cast<std::size_t>(q - qk)];
      hi += terms_hi[static_cast<std::size_t>(q - qk)];
    }
    out.block_lo.push_back(lo);
    out.block_hi.push_back(hi);
  }
  return out;
}

double inverse_sq_ratio_floor(const IrrationalSpec& spec, std::size_t k) {
  if (k == 0) throw InvalidArgument("k", "must be >= 1");
  const QTable t = qtable(spec, k);
  const BigRational r(t.q(k), t.q(k) + t.q(k - 1));
  return 2.0 * to_double(BigRational(r * r));
}

// ---------------------------------------------------------------------------
// BV functions

BVFunction::BVFunction(Variant v, std::string name, Interval integral, BigRational variation)
    : value_(std::move(v)),
      name_(std::move(name)),
      integral_(std::move(integral)),
      variation_(std::move(variation)) {
  if (const auto* f = std::get_if<CappedInverseSquare>(&value_)) cap_ = to_double(f->threshold);
  if (const auto* f = std::get_if<CappedInverse>(&value_)) cap_ = to_double(f->threshold);
  if (const auto* f = std::get_if<PiecewiseLinear>(&value_)) {
    for (const auto& [z, v] : f->knots) {
      knot_z_.push_back(to_double(z));
      knot_v_.push_back(to_double(v));
    }
  }
}

BVFunction BVFunction::capped_inverse_square(BigRational threshold) {
  threshold.canonicalize();
  if (threshold < 2) throw InvalidArgument("threshold", "must be >= 2");
  const BigRational integral = 4 * threshold - 4;
  const BigRational var = 2 * threshold * threshold - 8;
  return BVFunction(CappedInverseSquare{threshold},
                    "capped_inverse_square(" + threshold.get_str() + ")", {integral, integral},
                    var);
}

BVFunction BVFunction::capped_inverse(BigRational threshold) {
  threshold.canonicalize();
  if (threshold < 2) throw InvalidArgument("threshold", "must be >= 2");
  const Interval lg = log_enclosure(BigRational(threshold / 2));
  const Interval integral{2 + 2 * lg.lo, 2 + 2 * lg.hi};
  return BVFunction(CappedInverse{threshold}, "capped_inverse(" + threshold.get_str() + ")",
                    integral, BigRational(2 * threshold - 4));
}

BVFunction BVFunction::trig(TrigPoly poly) {
  BigRational var = 0;
  for (const auto& t : poly.terms) {
    if (t.k < 1) throw InvalidArgument("k", "trigonometric frequencies must be >= 1");
    if (!std::isfinite(t.cos_coeff) || !std::isfinite(t.sin_coeff)) {
      throw InvalidArgument("coefficient", "must be finite");
    }
    const BigRational a = from_double(t.cos_coeff);
    const BigRational b = from_double(t.sin_coeff);
    var += 4 * t.k * sqrt_upper(BigRational(a * a + b * b));
  }
  const BigRational mean = from_double(poly.mean);
  std::ostringstream name;
  if (poly.terms.size() == 1 && poly.mean == 0.0 && poly.terms[0].k == 1 &&
      poly.terms[0].cos_coeff == 1.0 && poly.terms[0].sin_coeff == 0.0) {
    name << "cos";
  } else {
    name << "trig(" << poly.terms.size() << " terms)";
  }
  return BVFunction(std::move(poly), name.str(), {mean, mean}, var);
}

BVFunction BVFunction::piecewise_linear(
    std::vector<std::pair<BigRational, BigRational>> knots) {
  if (knots.empty()) throw InvalidArgument("knots", "need at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    knots[i].first.canonicalize();
    knots[i].second.canonicalize();
    if (knots[i].first < 0 || knots[i].first >= 1) {
      throw InvalidArgument("knots", "positions must lie in [0, 1)");
    }
    if (i > 0 && !(knots[i - 1].first < knots[i].first)) {
      throw InvalidArgument("knots", "positions must be strictly increasing");
    }
  }
  BigRational integral = 0, var = 0;
  const std::size_t n = knots.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [z0, v0] = knots[i];
    const auto& [z1raw, v1] = knots[(i + 1) % n];
    const BigRational z1 = (i + 1 == n) ? BigRational(z1raw + 1) : z1raw;
    integral += (z1 - z0) * (v0 + v1) / 2;
    var += abs(BigRational(v1 - v0));
  }
  return BVFunction(PiecewiseLinear{std::move(knots)},
                    "piecewise_linear(" + std::to_string(n) + " knots)", {integral, integral},
                    var);
}

double BVFunction::operator()(double z) const {
  z -= std::floor(z);
  const double d = std::min(z, 1.0 - z);
  if (std::holds_alternative<CappedInverseSquare>(value_)) {
    return std::min(cap_ * cap_, 1.0 / (d * d));
  }
  if (std::holds_alternative<CappedInverse>(value_)) return std::min(cap_, 1.0 / d);
  if (const auto* p = std::get_if<TrigPoly>(&value_)) {
    double s = p->mean;
    for (const auto& t : p->terms) {
      const double ang = 2.0 * std::numbers::pi * std::fmod(t.k * z, 1.0);
      s += t.cos_coeff * std::cos(ang) + t.sin_coeff * std::sin(ang);
    }
    return s;
  }
  const std::size_t n = knot_z_.size();
  if (n == 1) return knot_v_[0];
  const auto it = std::upper_bound(knot_z_.begin(), knot_z_.end(), z);
  std::size_t i;
  double z0, z1;
  if (it == knot_z_.begin() || it == knot_z_.end()) {
    i = n - 1;
    z0 = knot_z_[n - 1];
    z1 = knot_z_[0] + 1.0;
    if (z < z0) z += 1.0;
  } else {
    i = static_cast<std::size_t>(it - knot_z_.begin()) - 1;
    z0 = knot_z_[i];
    z1 = knot_z_[i + 1];
  }
  const double v0 = knot_v_[i];
  const double v1 = knot_v_[(i + 1) % n];
  return v0 + (v1 - v0) * (z - z0) / (z1 - z0);
}

BigRational BVFunction::eval_exact(const BigRational& zin) const {
  const auto* p = std::get_if<PiecewiseLinear>(&value_);
  if (p == nullptr) throw InvalidArgument("f", "exact evaluation needs a piecewise-linear function");
  BigRational z = zin - BigRational(floor(zin));
  const auto& k = p->knots;
  const std::size_t n = k.size();
  if (n == 1) return k[0].second;
  std::size_t i = n - 1;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (k[j].first <= z && z < k[j + 1].first) i = j;
  }
  BigRational z0 = k[i].first;
  BigRational z1 = (i + 1 == n) ? BigRational(k[0].first + 1) : k[i + 1].first;
  if (i + 1 == n && z < z0) z += 1;
  const BigRational& v0 = k[i].second;
  const BigRational& v1 = k[(i + 1) % n].second;
  return v0 + (v1 - v0) * (z - z0) / (z1 - z0);
}

double BVFunction::lipschitz() const {
  if (std::holds_alternative<CappedInverseSquare>(value_)) return 2.0 * cap_ * cap_ * cap_;
  if (std::holds_alternative<CappedInverse>(value_)) return cap_ * cap_;
  if (const auto* p = std::get_if<TrigPoly>(&value_)) {
    double s = 0.0;
    for (const auto& t : p->terms) s += 2.0 * std::numbers::pi * t.k * std::hypot(t.cos_coeff, t.sin_coeff);
    return s * (1.0 + 4.0 * kU);
  }
  const std::size_t n = knot_z_.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const double z1 = (i + 1 == n) ? knot_z_[0] + 1.0 : knot_z_[i + 1];
    m = std::max(m, std::fabs(knot_v_[(i + 1) % n] - knot_v_[i]) / (z1 - knot_z_[i]));
  }
  return m * (1.0 + 8.0 * kU);
}

double BVFunction::sup_abs() const {
  if (std::holds_alternative<CappedInverseSquare>(value_)) return cap_ * cap_;
  if (std::holds_alternative<CappedInverse>(value_)) return cap_;
  if (const auto* p = std::get_if<TrigPoly>(&value_)) {
    double s = std::fabs(p->mean);
    for (const auto& t : p->terms) s += std::hypot(t.cos_coeff, t.sin_coeff);
    return s * (1.0 + 4.0 * kU);
  }
  double m = 0.0;
  for (double v : knot_v_) m = std::max(m, std::fabs(v));
  return m;
}

BigInt inverse_sq_budget(const BigInt& q_k) {
  return 4 * q_k * q_k + q_k * (8 * q_k - 4) + (8 * q_k * q_k - 8);
}

// ---------------------------------------------------------------------------
// Denjoy-Koksma

DKFamily DKFamily::fixed(BVFunction f) {
  DKFamily fam;
  fam.f_ = std::move(f);
  return fam;
}

DKFamily DKFamily::inverse_sq_at_scale(unsigned scale) {
  if (scale < 1) throw InvalidArgument("scale", "must be >= 1");
  DKFamily fam;
  fam.scale_ = scale;
  return fam;
}

BVFunction DKFamily::at(const BigInt& q_n) const {
  if (f_) return *f_;
  BigInt t = BigInt(scale_) * q_n;
  if (t < 2) t = 2;
  return BVFunction::capped_inverse_square(BigRational(t));
}

std::string DKFamily::name() const {
  if (f_) return f_->name();
  return "capped_inverse_square(" + std::to_string(scale_) + "q_n)";
}

namespace {

constexpr std::size_t kLanes = 4;

// Static data of one family in the fast orbit pass.
struct FastFamily {
  enum Type { Cis, Ci, Trig, Pl, Adaptive } type = Cis;
  double cap = 0.0;
  double cap2 = 0.0;
  // piecewise linear: knots, values and slopes, last entry wraps
  std::vector<double> kz, kv, slope;
  double mean = 0.0;
  std::vector<int> k;
  std::vector<double> a, b;

  // cell c of [0, 1) split into kCells: segment index when the cell holds
  // no knot in its interior, -1 otherwise
  static constexpr int kCells = 1024;
  std::vector<int> cell_seg;

  double pl_slow(double z) const {
    const std::size_t n = kz.size();
    std::size_t i = 0;
    for (std::size_t j = 1; j < n; ++j) i += (z >= kz[j]) ? 1 : 0;
    const bool wrap = z < kz[0];
    i = wrap ? n - 1 : i;
    z = wrap ? z + 1.0 : z;
    return kv[i] + slope[i] * (z - kz[i]);
  }
  void build_cells() {
    cell_seg.assign(kCells, -1);
    const std::size_t n = kz.size();
    for (int c = 0; c < kCells; ++c) {
      const double lo = static_cast<double>(c) / kCells, hi = static_cast<double>(c + 1) / kCells;
      bool clean = true;
      for (double k : kz) clean = clean && !(k >= lo && k <= hi);
      if (!clean) continue;
      const double mid = 0.5 * (lo + hi);
      std::size_t i = 0;
      for (std::size_t j = 1; j < n; ++j) i += (mid >= kz[j]) ? 1 : 0;
      if (mid < kz[0]) i = n - 1;
      cell_seg[static_cast<std::size_t>(c)] = static_cast<int>(i);
    }
  }
};

// Per-lane accumulators of one family.
struct LaneAcc {
  std::vector<double> seg_sum, seg_abs;  // per segment m
  struct Exc {
    std::size_t m;
    double d;
  };
  std::vector<Exc> exceptions;
};

inline std::complex<double> unit_exp(double t) {
  const double ang = 2.0 * std::numbers::pi * t;
  return {std::cos(ang), std::sin(ang)};
}

struct DKData {
  std::vector<std::int64_t> q;  // q_0..q_nmax
  std::vector<BigInt> qbig;
};

// Segment m holds j in [q_{m-1}, q_m), with q_{-1} = 0.
std::int64_t seg_lo(const DKData& dd, std::size_t m) { return m == 0 ? 0 : dd.q[m - 1]; }

FastFamily make_fast_family(const DKFamily& fam, const DKData& dd) {
  FastFamily ff;
  if (fam.adaptive()) {
    ff.type = FastFamily::Adaptive;
    ff.cap = fam.scale();
    return ff;
  }
  const BVFunction f = fam.at(dd.qbig[0]);
  const auto& v = f.variant();
  if (const auto* c = std::get_if<CappedInverseSquare>(&v)) {
    ff.type = FastFamily::Cis;
    ff.cap = to_double(c->threshold);
  } else if (const auto* c = std::get_if<CappedInverse>(&v)) {
    ff.type = FastFamily::Ci;
    ff.cap = to_double(c->threshold);
  } else if (const auto* p = std::get_if<TrigPoly>(&v)) {
    ff.type = FastFamily::Trig;
    ff.mean = p->mean;
    for (const auto& t : p->terms) {
      ff.k.push_back(t.k);
      ff.a.push_back(t.cos_coeff);
      ff.b.push_back(t.sin_coeff);
    }
  } else {
    ff.type = FastFamily::Pl;
    const auto& knots = std::get<PiecewiseLinear>(v).knots;
    const std::size_t n = knots.size();
    for (std::size_t j = 0; j < n; ++j) {
      const BigRational z1 = (j + 1 == n) ? BigRational(knots[0].first + 1) : knots[j + 1].first;
      ff.kz.push_back(to_double(knots[j].first));
      ff.kv.push_back(to_double(knots[j].second));
      ff.slope.push_back(
          n == 1 ? 0.0
                 : to_double(BigRational((knots[(j + 1) % n].second - knots[j].second) /
                                         (z1 - knots[j].first))));
    }
    ff.build_cells();
  }
  ff.cap2 = ff.cap * ff.cap;
  return ff;
}

template <class Term>
inline void lane_kernel(const std::array<u128, kLanes>& start, u128 step, std::int64_t cnt,
                        std::array<double, kLanes>& s, std::array<double, kLanes>& sa,
                        const Term& term) {
  static_assert(kLanes == 4);
  u128 p0 = start[0], p1 = start[1], p2 = start[2], p3 = start[3];
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  for (std::int64_t t = 0; t < cnt; ++t) {
    const double v0 = term(p0, 0), v1 = term(p1, 1), v2 = term(p2, 2), v3 = term(p3, 3);
    s0 += v0;
    s1 += v1;
    s2 += v2;
    s3 += v3;
    a0 += std::fabs(v0);
    a1 += std::fabs(v1);
    a2 += std::fabs(v2);
    a3 += std::fabs(v3);
    p0 += step;
    p1 += step;
    p2 += step;
    p3 += step;
  }
  s = {s0, s1, s2, s3};
  sa = {a0, a1, a2, a3};
}

// As lane_kernel, with term(d, 1/d, lane) where d = ||p|| (clamped to
// >= 2^-64) and the four reciprocals share one division. Each reciprocal
// carries at most 8 roundings.
template <class Term>
inline void lane_kernel_inv(const std::array<u128, kLanes>& start, u128 step, std::int64_t cnt,
                            std::array<double, kLanes>& s, const Term& term) {
  u128 p0 = start[0], p1 = start[1], p2 = start[2], p3 = start[3];
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  for (std::int64_t t = 0; t < cnt; ++t) {
    const double d0 = std::max(abs_dist(p0), 0x1p-64), d1 = std::max(abs_dist(p1), 0x1p-64);
    const double d2 = std::max(abs_dist(p2), 0x1p-64), d3 = std::max(abs_dist(p3), 0x1p-64);
    const double d01 = d0 * d1, d23 = d2 * d3;
    const double r = 1.0 / (d01 * d23);
    const double r01 = r * d23, r23 = r * d01;
    s0 += term(d0, r01 * d1, 0);
    s1 += term(d1, r01 * d0, 1);
    s2 += term(d2, r23 * d3, 2);
    s3 += term(d3, r23 * d2, 3);
    p0 += step;
    p1 += step;
    p2 += step;
    p3 += step;
  }
  s = {s0, s1, s2, s3};
}

// Orbit pass over j < q_{n_max} for kLanes starting points in lockstep
// (independent lanes keep the divider busy). Trigonometric families are
// skipped; their sums have a closed form.
void run_fast_lanes(const std::vector<FastFamily>& fams, const DKData& dd, u128 step,
                    const std::array<u128, kLanes>& x0,
                    std::vector<std::array<LaneAcc, kLanes>>& acc) {
  const std::size_t nseg = dd.q.size();
  const std::size_t nf = fams.size();
  acc.assign(nf, {});
  for (auto& fa : acc) {
    for (auto& la : fa) {
      la.seg_sum.assign(nseg, 0.0);
      la.seg_abs.assign(nseg, 0.0);
    }
  }
  std::array<u128, kLanes> ph = x0;
  for (std::size_t m = 0; m < nseg; ++m) {
    const std::int64_t lo = seg_lo(dd, m);
    const std::int64_t hi = dd.q[m];
    if (hi <= lo) continue;
    std::vector<std::array<CompensatedSum, kLanes>> cs(nf), ca(nf);
    for (std::int64_t j = lo; j < hi; j += kDKBlock) {
      const std::int64_t cnt = std::min(j + kDKBlock, hi) - j;
      for (std::size_t fi = 0; fi < nf; ++fi) {
        const FastFamily& ff = fams[fi];
        if (ff.type == FastFamily::Trig) continue;
        std::array<double, kLanes> s{}, sa{};
        switch (ff.type) {
          case FastFamily::Cis: {
            const double c2 = ff.cap2;
            lane_kernel_inv(ph, step, cnt, s, [c2](double, double inv, std::size_t) {
              return min_nb(c2, inv * inv);
            });
            sa = s;
            break;
          }
          case FastFamily::Adaptive: {
            const double tm = ff.cap * static_cast<double>(hi);
            auto& fa = acc[fi];
            lane_kernel_inv(ph, step, cnt, s, [tm, m, &fa](double d, double inv, std::size_t g) {
              if (d * tm >= 1.0) return inv * inv;
              fa[g].exceptions.push_back({m, d});
              return 0.0;
            });
            sa = s;
            break;
          }
          case FastFamily::Ci: {
            const double c = ff.cap;
            lane_kernel_inv(ph, step, cnt, s,
                            [c](double, double inv, std::size_t) { return min_nb(c, inv); });
            sa = s;
            break;
          }
          case FastFamily::Pl: {
            const double* kz = ff.kz.data();
            const double* kv = ff.kv.data();
            const double* sl = ff.slope.data();
            const int* cells = ff.cell_seg.data();
            const FastFamily* self = &ff;
            lane_kernel(ph, step, cnt, s, sa, [=](u128 p, std::size_t) {
              const double z = FixedRotation::to_unit_coarse(p);
              const int i = cells[static_cast<int>(z * FastFamily::kCells)];
              if (i < 0) return self->pl_slow(z);
              const double base = (z < kz[0]) ? z + 1.0 : z;
              return kv[i] + sl[i] * (base - kz[i]);
            });
            break;
          }
          case FastFamily::Trig:
            break;
        }
        for (std::size_t g = 0; g < kLanes; ++g) {
          cs[fi][g].add(s[g]);
          ca[fi][g].add(sa[g]);
        }
      }
      const u128 adv = step * static_cast<u128>(cnt);
      for (auto& v : ph) v += adv;
    }
    for (std::size_t fi = 0; fi < nf; ++fi) {
      for (std::size_t g = 0; g < kLanes; ++g) {
        acc[fi][g].seg_sum[m] = cs[fi][g].value();
        acc[fi][g].seg_abs[m] = ca[fi][g].value();
      }
    }
  }
}

// sum_{j<q} of a trigonometric polynomial along the orbit of x0, via
// sum_j e(k(x + j alpha)) = (e(k(x + q alpha)) - e(kx)) / (e(k alpha) - 1).
// Returns {sum, error bound}.
std::pair<double, double> trig_orbit_sum(const FastFamily& ff, u128 step, u128 x0,
                                         std::int64_t q, double eabs) {
  const double qd = static_cast<double>(q);
  double sum = qd * ff.mean;
  double err = 2.0 * kU * std::fabs(sum);
  const u128 xq = x0 + step * static_cast<u128>(q);
  for (std::size_t i = 0; i < ff.k.size(); ++i) {
    const u128 k = static_cast<u128>(ff.k[i]);
    const auto e_end = unit_exp(FixedRotation::to_signed(xq * k));
    const auto e_start = unit_exp(FixedRotation::to_signed(x0 * k));
    const auto e_step = unit_exp(FixedRotation::to_signed(step * k));
    const double e1 = 2.0 * std::numbers::pi * ff.k[i] * eabs + 4.0 * kU;
    const double nr = e_end.real() - e_start.real(), ni = e_end.imag() - e_start.imag();
    const double dr = e_step.real() - 1.0, di = e_step.imag();
    const double dn2 = dr * dr + di * di;
    const double qr = (nr * dr + ni * di) / dn2;
    const double qi = (ni * dr - nr * di) / dn2;
    const double amp = std::hypot(ff.a[i], ff.b[i]);
    const double err_n = 2.0 * e1 + 4.0 * kU;
    const double err_d = e1 + 2.0 * kU;
    const double dabs = std::sqrt(dn2);
    const double dmin = dabs * (1.0 - 4.0 * kU) - err_d;
    if (!(dmin > 0.0)) throw PrecisionExhausted("k alpha too close to an integer");
    const double nabs = std::hypot(nr, ni);
    const double qabs = std::hypot(qr, qi);
    const double err_q = (err_n + (nabs + err_n) / dmin * err_d) / dmin + 12.0 * kU * qabs;
    sum += ff.a[i] * qr + ff.b[i] * qi;
    err += amp * (err_q * (1.0 + 4.0 * kU) + 4.0 * kU * qabs) + 4.0 * kU * std::fabs(sum);
  }
  return {sum, err};
}

DKResult finish_result(std::size_t n, const BigInt& qn, const BVFunction& f, double sum,
                       double err, bool exact) {
  DKResult r;
  r.n = n;
  r.q_n = qn;
  const double q = to_double(qn);
  const double imid = to_double(BigRational((f.integral().lo + f.integral().hi) / 2));
  const double ihalf = to_double(BigRational(f.integral().width() / 2));
  const double qi = q * imid;
  r.lhs = std::fabs(sum - qi);
  const double e = err + q * ihalf * (1.0 + 4.0 * kU) + 2.0 * kU * std::fabs(qi) +
                   2.0 * kU * r.lhs;
  r.lhs_upper = r.lhs + e;
  r.bound = to_double(f.variation());
  r.pass = r.lhs_upper <= r.bound * (1.0 - 4.0 * kU);
  r.exact_path = exact;
  return r;
}

// Exact pass over j < q_{n_last}. Values are fixed point, scale 2^P.
// Piecewise-linear function on fixed-point inputs z / 2^P: each piece is
// (N0 + N1 z) / D in units of 2^-P, so enclosures need one multiply and one
// division instead of rational arithmetic.
struct PLFix {
  struct Piece {
    BigInt start;  // smallest integer z with z / 2^P >= knot
    BigInt n0, n1, den;
  };
  std::vector<Piece> pieces;
  std::vector<std::pair<BigInt, BigInt>> knot_z;  // floor / ceil of knot 2^P
  std::vector<std::pair<BigInt, BigInt>> knot_v;  // floor / ceil of value 2^P
  BigInt one;

  PLFix(const PiecewiseLinear& pl, unsigned P) : one(pow2(P)) {
    const auto& k = pl.knots;
    const std::size_t m = k.size();
    for (std::size_t i = 0; i < m; ++i) {
      const BigRational z0 = k[i].first;
      const BigRational z1 = i + 1 == m ? BigRational(k[0].first + 1) : k[i + 1].first;
      const BigRational& v0 = k[i].second;
      const BigRational& v1 = k[(i + 1) % m].second;
      const BigRational slope = m == 1 ? BigRational(0) : BigRational((v1 - v0) / (z1 - z0));
      const BigRational c = (v0 - slope * z0) * BigRational(one);
      BigInt den;
      mpz_lcm(den.get_mpz_t(), c.get_den_mpz_t(), slope.get_den_mpz_t());
      Piece pc;
      pc.start = fix_ceil(z0, P);
      pc.n0 = c.get_num() * (den / c.get_den());
      pc.n1 = slope.get_num() * (den / slope.get_den());
      pc.den = den;
      pieces.push_back(std::move(pc));
      knot_z.emplace_back(fix_floor(z0, P), fix_ceil(z0, P));
      knot_v.emplace_back(fix_floor(v0, P), fix_ceil(v0, P));
    }
  }

  // floor and ceil of f(z / 2^P) 2^P for an integer z >= 0
  std::pair<BigInt, BigInt> eval(BigInt z) const {
    while (z >= one) z -= one;
    std::size_t i = pieces.size();
    while (i > 0 && z < pieces[i - 1].start) --i;
    if (i == 0) {
      i = pieces.size();
      z += one;
    }
    const Piece& pc = pieces[i - 1];
    const BigInt num = pc.n0 + pc.n1 * z;
    return {fdiv(num, pc.den), cdiv(num, pc.den)};
  }

  FixPair enclose(const FixPair& z) const {
    auto [lo, hi] = eval(z.lo);
    auto upd = [&](const BigInt& l, const BigInt& h) {
      if (l < lo) lo = l;
      if (h > hi) hi = h;
    };
    const auto e = eval(z.hi);
    upd(e.first, e.second);
    for (std::size_t i = 0; i < knot_z.size(); ++i) {
      for (int shift = 0; shift <= 1; ++shift) {
        const BigInt kl = knot_z[i].first + shift * one, kh = knot_z[i].second + shift * one;
        if (z.lo <= kh && kl <= z.hi) upd(knot_v[i].first, knot_v[i].second);
      }
    }
    return {lo, hi};
  }
};

std::vector<std::vector<DKResult>> exact_pass(std::span<const DKFamily> families,
                                              const IrrationalSpec& spec, const DKData& dd,
                                              std::size_t n_last, const BigRational& x,
                                              unsigned P) {
  const std::size_t nf = families.size();
  const std::size_t nn = n_last + 1;
  const BigInt one = pow2(P);
  const BigInt one2 = pow2(2 * P);
  const BigInt one3 = pow2(3 * P);
  // sums[f][n]
  std::vector<std::vector<BigInt>> slo(nf, std::vector<BigInt>(nn, 0));
  std::vector<std::vector<BigInt>> shi(nf, std::vector<BigInt>(nn, 0));
  // Function at each n (adaptive families differ per n).
  std::vector<std::vector<BVFunction>> fn(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t n = 0; n < nn; ++n) fn[i].push_back(families[i].at(dd.qbig[n]));
  }
  std::vector<std::optional<PLFix>> plfix(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    if (families[i].adaptive()) continue;
    if (const auto* p = std::get_if<PiecewiseLinear>(&fn[i][0].variant())) plfix[i].emplace(*p, P);
  }
  auto enclose = [&](const BVFunction& f, const FixPair& z, const FixPair& d) -> FixPair {
    if (const auto* c = std::get_if<CappedInverseSquare>(&f.variant())) {
      const BigRational t2 = c->threshold * c->threshold;
      const BigInt cl = fix_floor(t2, P), ch = fix_ceil(t2, P);
      const BigInt lo = sgn(d.hi) > 0 ? std::min(cl, fdiv(one3, d.hi * d.hi)) : cl;
      const BigInt hi = sgn(d.lo) > 0 ? std::min(ch, cdiv(one3, d.lo * d.lo)) : ch;
      return {lo, hi};
    }
    if (const auto* c = std::get_if<CappedInverse>(&f.variant())) {
      const BigInt cl = fix_floor(c->threshold, P), ch = fix_ceil(c->threshold, P);
      const BigInt lo = sgn(d.hi) > 0 ? std::min(cl, fdiv(one2, d.hi)) : cl;
      const BigInt hi = sgn(d.lo) > 0 ? std::min(ch, cdiv(one2, d.lo)) : ch;
      return {lo, hi};
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(&f.variant())) {
      const BigRational zl(z.lo, one), zh(z.hi, one);
      BigRational vmin = f.eval_exact(zl), vmax = vmin;
      auto upd = [&](const BigRational& v) {
        if (v < vmin) vmin = v;
        if (v > vmax) vmax = v;
      };
      upd(f.eval_exact(zh));
      for (const auto& [kz, kv] : p->knots) {
        if ((zl < kz && kz < zh) || (zl < kz + 1 && kz + 1 < zh)) upd(kv);
      }
      return {fix_floor(vmin, P), fix_ceil(vmax, P)};
    }
    const auto& tp = std::get<TrigPoly>(f.variant());
    if (tp.terms.empty()) {
      const BigRational m = from_double(tp.mean);
      return {fix_floor(m, P), fix_ceil(m, P)};
    }
    const double zm = std::ldexp(BigInt(z.lo + z.hi).get_d(), -static_cast<int>(P) - 1);
    const double hw = std::ldexp(BigInt(z.hi - z.lo).get_d(), -static_cast<int>(P) - 1) + 0x1p-60;
    double eval_err = 2.0 * kU * std::fabs(tp.mean);
    for (const auto& t : tp.terms) {
      eval_err += std::hypot(t.cos_coeff, t.sin_coeff) * (4.0 * std::numbers::pi * t.k + 8.0) * kU;
    }
    const double v = f(zm);
    const double err = f.lipschitz() * (hw + kU) + eval_err;
    return fix_enclose_double(v - err, v + err, P);
  };
  // Orbit as a fixed-point interval: [X_lo + j A_lo, X_hi + j A_hi] mod 1.
  const Interval alpha = spec.bracket(P + 8);
  const BigRational xr = x - BigRational(floor(x));
  const BigInt a_lo = fix_floor(alpha.lo, P), a_hi = fix_ceil(alpha.hi, P);
  FixPair z{fix_floor(xr, P), fix_ceil(xr, P)};
  const std::int64_t jmax = dd.q[n_last];
  std::size_t m = 0;
  for (std::int64_t j = 0; j < jmax; ++j, z.lo += a_lo, z.hi += a_hi) {
    while (dd.q[m] <= j) ++m;  // j lies in segment m
    const BigInt wrap = fdiv(z.lo, one);
    if (sgn(wrap) != 0) {
      z.lo -= wrap * one;
      z.hi -= wrap * one;
    }
    const FixPair d = dist_from_frac(z, P);
    for (std::size_t i = 0; i < nf; ++i) {
      if (families[i].adaptive()) {
        for (std::size_t n = m; n < nn; ++n) {
          const FixPair v = enclose(fn[i][n], z, d);
          slo[i][n] += v.lo;
          shi[i][n] += v.hi;
        }
      } else {
        const FixPair v = plfix[i] ? plfix[i]->enclose(z) : enclose(fn[i][0], z, d);
        slo[i][m] += v.lo;
        shi[i][m] += v.hi;
      }
    }
  }
  std::vector<std::vector<DKResult>> out(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    BigInt plo = 0, phi = 0;
    for (std::size_t n = 0; n < nn; ++n) {
      if (families[i].adaptive()) {
        plo = slo[i][n];
        phi = shi[i][n];
      } else {
        plo += slo[i][n];
        phi += shi[i][n];
      }
      const BVFunction& f = fn[i][n];
      const BigInt& qn = dd.qbig[n];
      const BigInt il = fix_floor(BigRational(qn * f.integral().lo), P);
      const BigInt ih = fix_ceil(BigRational(qn * f.integral().hi), P);
      const BigInt lo = plo - ih;
      const BigInt hi = phi - il;
      const BigInt upper = std::max(BigInt(abs(lo)), BigInt(abs(hi)));
      DKResult r;
      r.n = n;
      r.q_n = qn;
      r.lhs = std::fabs(to_double(BigRational(lo + hi, 2 * one)));
      r.lhs_upper = to_double(BigRational(upper, one)) * (1.0 + 2.0 * kU);
      r.bound = to_double(f.variation());
      r.pass = BigRational(upper, one) <= f.variation();
      r.exact_path = true;
      out[i].push_back(r);
    }
  }
  return out;
}

// Results [x][family][n] for every n, all from the 128-bit orbit.
std::vector<std::vector<std::vector<DKResult>>> fast_pass(std::span<const DKFamily> families,
                                                          const IrrationalSpec& spec,
                                                          const DKData& dd,
                                                          std::span<const BigRational> xs) {
  const FixedRotation rot(spec);
  const u128 step = rot.step();
  const std::size_t nf = families.size();
  const std::size_t nn = dd.q.size();
  std::vector<FastFamily> fams;
  for (const auto& fam : families) fams.push_back(make_fast_family(fam, dd));
  const double eabs = rot.phase_error(static_cast<double>(dd.q.back())) + kCoarse;
  std::vector<std::vector<std::vector<DKResult>>> out(xs.size(),
                                                      std::vector<std::vector<DKResult>>(nf));
  std::vector<std::array<LaneAcc, kLanes>> acc;
  for (std::size_t base = 0; base < xs.size(); base += kLanes) {
    std::array<u128, kLanes> x0{};
    for (std::size_t g = 0; g < kLanes; ++g) {
      const BigRational& x = xs[std::min(base + g, xs.size() - 1)];
      x0[g] = FixedRotation::from_rational(BigRational(x - BigRational(floor(x))));
    }
    run_fast_lanes(fams, dd, step, x0, acc);
    for (std::size_t g = 0; g < kLanes && base + g < xs.size(); ++g) {
      for (std::size_t i = 0; i < nf; ++i) {
        const FastFamily& ff = fams[i];
        const LaneAcc& la = acc[i][g];
        CompensatedSum s, sa;
        for (std::size_t n = 0; n < nn; ++n) {
          s.add(la.seg_sum[n]);
          sa.add(la.seg_abs[n]);
          const double q = static_cast<double>(dd.q[n]);
          const BVFunction f = families[i].at(dd.qbig[n]);
          double sum = s.value();
          double abs_sum = sa.value();
          double per_point = 0.0;  // absolute evaluation error per orbit point
          double rel = 0.0;        // evaluation error relative to |f|
          double extra = 0.0;
          switch (ff.type) {
            case FastFamily::Adaptive: {
              const double t = ff.cap * q;
              for (const auto& e : la.exceptions) {
                if (e.m > n) continue;
                const double v = std::min(t * t, 1.0 / (e.d * e.d));
                sum += v;
                abs_sum += v;
              }
              // |d f| <= 2 |d z| / ||z||^3 <= f * 2 eabs T on either side of the cap
              rel = 26.0 * kU + 2.0 * t * eabs * (1.0 + 1e-6);
              break;
            }
            case FastFamily::Cis:
              rel = 26.0 * kU + 2.0 * ff.cap * eabs * (1.0 + 1e-6);
              break;
            case FastFamily::Ci:
              rel = 16.0 * kU + ff.cap * eabs * (1.0 + 1e-6);
              break;
            case FastFamily::Pl:
              per_point = f.lipschitz() * (eabs + 4.0 * kU) + 8.0 * kU * f.sup_abs();
              break;
            case FastFamily::Trig: {
              const auto [ts, te] = trig_orbit_sum(ff, step, x0[g], dd.q[n], eabs);
              sum = ts;
              extra = te;
              abs_sum = 0.0;
              break;
            }
          }
          const double err = q * per_point + rel * abs_sum +
                             static_cast<double>(kDKBlock + 4) * kU * abs_sum + extra;
          out[base + g][i].push_back(finish_result(n, dd.qbig[n], f, sum, err, false));
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::vector<DKResult>>> denjoy_koksma_batch(
    std::span<const DKFamily> families, const IrrationalSpec& spec, std::size_t n_max,
    std::span<const BigRational> xs, const SumOptions& opts) {
  check_options(opts);
  const QTable t = qtable(spec, n_max);
  DKData dd;
  for (std::size_t n = 0; n <= n_max; ++n) {
    dd.qbig.push_back(t.q(n));
    dd.q.push_back(checked_q(t.q(n), "q_n"));
  }
  std::size_t n_exact = 0;  // number of leading n handled exactly
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (use_exact(opts, dd.q[n])) n_exact = n + 1;
  }
  if (opts.path == SumPath::Exact) n_exact = n_max + 1;
  std::vector<std::vector<std::vector<DKResult>>> out(
      xs.size(), std::vector<std::vector<DKResult>>(families.size()));
  if (n_exact > 0) {
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      out[xi] = exact_pass(families, spec, dd, n_exact - 1, xs[xi], opts.precision_bits);
    }
  }
  if (n_exact <= n_max && !xs.empty()) {
    const auto fast = fast_pass(families, spec, dd, xs);
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      for (std::size_t i = 0; i < families.size(); ++i) {
        for (std::size_t n = n_exact; n <= n_max; ++n) out[xi][i].push_back(fast[xi][i][n]);
      }
    }
  }
  return out;
}

std::vector<std::vector<DKResult>> denjoy_koksma_batch(std::span<const DKFamily> families,
                                                       const IrrationalSpec& spec,
                                                       std::size_t n_max, const BigRational& x,
                                                       const SumOptions& opts) {
  return denjoy_koksma_batch(families, spec, n_max, std::span<const BigRational>(&x, 1), opts)
      .front();
}

std::vector<DKResult> denjoy_koksma_scan(const DKFamily& family, const IrrationalSpec& spec,
                                         std::size_t n_max, const BigRational& x,
                                         const SumOptions& opts) {
  return denjoy_koksma_batch(std::span<const DKFamily>(&family, 1), spec, n_max, x, opts).front();
}

DKResult denjoy_koksma_check(const BVFunction& f, const IrrationalSpec& spec, std::size_t n,
                             const BigRational& x, const SumOptions& opts) {
  return denjoy_koksma_scan(DKFamily::fixed(f), spec, n, x, opts).back();
}

}  // namespace skewrig::diophantine
