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

#include "skewrig/contfrac.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "skewrig/errors.hpp"

namespace skewrig {

namespace {

int sgn_of(const BigInt& x) { return sgn(x); }

// Interval enclosure of ||.|| over [lo, hi] (hi - lo < 1/2).
std::pair<BigRational, BigRational> dist_over(const Interval& iv) {
  if (iv.width() >= BigRational(1, 2)) {
    throw PrecisionExhausted("bracket too wide to resolve the nearest integer");
  }
  const BigInt n = floor(iv.lo);
  const BigRational u = iv.lo - n;
  const BigRational v = iv.hi - n;  // in [0, 1.5)
  auto dist = [](const BigRational& t) {
    BigRational f = t - floor(t);
    return f <= BigRational(1, 2) ? f : BigRational(1 - f);
  };
  BigRational du = dist(u), dv = dist(v);
  BigRational lo = std::min(du, dv), hi = std::max(du, dv);
  if (u <= BigRational(1, 2) && v >= BigRational(1, 2)) hi = BigRational(1, 2);
  if (v >= 1) lo = 0;
  return {lo, hi};
}

}  // namespace

BigInt floor_surd(const BigInt& a, const BigInt& b, const BigInt& d, const BigInt& c) {
  if (sgn(c) == 0) throw InvalidArgument("surd", "zero denominator");
  if (sgn(b) == 0) return floor_div(a, c);
  // Rewrite as (P + sqrt(D)) / Q.
  const BigInt big_d = b * b * d;
  BigInt p = a, q = c;
  if (sgn(b) < 0) {
    p = -a;
    q = -c;
  }
  const BigInt s = isqrt(big_d);  // s < sqrt(D) < s + 1
  return sgn(q) > 0 ? floor_div(p + s, q) : floor_div(p + s + 1, q);
}

SurdValue::SurdValue(BigInt a, BigInt b, BigInt d, BigInt c)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)), c_(std::move(c)) {
  if (sgn(c_) == 0) throw InvalidArgument("surd", "zero denominator");
  if (sgn(c_) < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
  }
  if (sgn(b_) != 0 && sgn(d_) <= 0) throw InvalidArgument("surd", "radicand must be positive");
}

BigInt SurdValue::floor() const { return floor_surd(a_, b_, d_, c_); }

int SurdValue::sign() const {
  const int sa = sgn_of(a_), sb = sgn_of(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with b^2 d.
  const int cmp_sq = ::cmp(BigInt(a_ * a_), BigInt(b_ * b_ * d_));
  if (cmp_sq == 0) return 0;
  return cmp_sq > 0 ? sa : sb;
}

SurdValue SurdValue::operator-(const BigRational& r) const {
  return SurdValue(a_ * r.get_den() - r.get_num() * c_, b_ * r.get_den(), d_, c_ * r.get_den());
}

int compare(const SurdValue& x, const SurdValue& y) {
  if (sgn(x.b_) != 0 && sgn(y.b_) != 0 && x.d_ != y.d_) {
    throw InvalidArgument("surd", "comparison across different quadratic fields");
  }
  const BigInt& d = sgn(x.b_) != 0 ? x.d_ : y.d_;
  SurdValue diff(x.a_ * y.c_ - y.a_ * x.c_, x.b_ * y.c_ - y.b_ * x.c_, d, x.c_ * y.c_);
  return diff.sign();
}

Interval SurdValue::bracket(unsigned bits) const {
  if (sgn(b_) == 0) {
    BigRational r(a_, c_);
    r.canonicalize();
    return {r, r};
  }
  const unsigned m = bits + 2;
  const BigInt scale = pow2(m);
  const BigInt f = floor_surd(0, b_ * scale, d_, 1);  // b sqrt(d) in [f, f+1] / 2^m
  BigRational lo(a_ * scale + f, c_ * scale), hi(a_ * scale + f + 1, c_ * scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

double SurdValue::to_double() const {
  const Interval iv = bracket(80);
  return skewrig::to_double(BigRational((iv.lo + iv.hi) / 2));
}

std::string SurdValue::to_string() const {
  std::ostringstream os;
  os << "(" << a_.get_str() << " + " << b_.get_str() << "*sqrt(" << d_.get_str() << "))/"
     << c_.get_str();
  return os.str();
}

namespace contfrac {

namespace {

std::string join(const std::vector<BigInt>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += xs[i].get_str();
  }
  return out;
}

void validate_quotients(const std::vector<BigInt>& xs, std::size_t offset) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + offset >= 1 && xs[i] < 1) {
      throw InvalidArgument("alpha", "partial quotient a_" + std::to_string(i + offset) +
                                         " must be >= 1");
    }
  }
}

// Standard (P + sqrt D) / Q expansion of a quadratic irrational.
std::vector<BigInt> expand_surd(const QuadraticSurd& s, std::size_t count) {
  BigInt d = s.b * s.b * s.d;
  BigInt p = s.a, q = s.c;
  if (sgn(s.b) < 0) {
    p = -s.a;
    q = -s.c;
  }
  if (((d - p * p) % q) != 0) {
    const BigInt aq = abs(q);
    p *= aq;
    d *= q * q;
    q *= aq;
  }
  const BigInt root = isqrt(d);
  std::vector<BigInt> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const BigInt a = sgn(q) > 0 ? floor_div(p + root, q) : floor_div(p + root + 1, q);
    out.push_back(a);
    p = a * q - p;
    q = (d - p * p) / q;
  }
  return out;
}

// Interval Gauss-map iteration; a quotient is emitted only when both
// endpoints agree on its floor.
std::vector<BigInt> expand_interval(BigRational lo, BigRational hi, std::size_t count) {
  std::vector<BigInt> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const BigInt a = floor(lo);
    if (floor(hi) != a || lo == BigRational(a)) {
      throw PrecisionExhausted("decimal approximation certifies only " + std::to_string(i) +
                               " partial quotients");
    }
    out.push_back(a);
    BigRational nlo = 1 / (hi - a), nhi = 1 / (lo - a);
    nlo.canonicalize();
    nhi.canonicalize();
    lo = std::move(nlo);
    hi = std::move(nhi);
  }
  return out;
}

}  // namespace

IrrationalSpec::IrrationalSpec(Variant v, std::string label)
    : value_(std::move(v)), label_(std::move(label)) {}

IrrationalSpec IrrationalSpec::surd(BigInt a, BigInt b, BigInt d, BigInt c) {
  if (sgn(c) == 0) throw InvalidArgument("alpha", "surd denominator c must be nonzero");
  if (sgn(d) <= 0) throw InvalidArgument("alpha", "surd radicand d must be positive");
  if (sgn(b) == 0 || is_perfect_square(d)) {
    throw NotIrrational("surd (" + a.get_str() + " + " + b.get_str() + " sqrt " + d.get_str() +
                        ") / " + c.get_str() + " is rational");
  }
  std::string label = "surd:" + a.get_str() + "," + b.get_str() + "," + d.get_str() + "," +
                      c.get_str();
  return IrrationalSpec(QuadraticSurd{std::move(a), std::move(b), std::move(d), std::move(c)},
                        std::move(label));
}

IrrationalSpec IrrationalSpec::explicit_cf(std::vector<BigInt> prefix,
                                           std::function<BigInt(std::size_t)> rule) {
  if (prefix.empty()) throw InvalidArgument("alpha", "continued fraction needs a_0");
  validate_quotients(prefix, 0);
  std::string label = "cf:" + join(prefix) + (rule ? ",..." : "");
  return IrrationalSpec(ExplicitCF{std::move(prefix), std::move(rule)}, std::move(label));
}

IrrationalSpec IrrationalSpec::periodic_cf(std::vector<BigInt> prefix, std::vector<BigInt> period) {
  if (period.empty()) throw InvalidArgument("alpha", "empty period");
  validate_quotients(period, 1);
  const std::size_t start = prefix.size();
  std::string label = "cf:" + join(prefix) + ";(" + join(period) + ")";
  auto rule = [start, period](std::size_t i) { return period[(i - start) % period.size()]; };
  IrrationalSpec spec = explicit_cf(std::move(prefix), rule);
  spec.label_ = std::move(label);
  return spec;
}

IrrationalSpec IrrationalSpec::decimal(std::string digits, BigRational error) {
  BigRational value = parse_rational(digits);
  if (sgn(error) <= 0) throw InvalidArgument("alpha", "decimal error bound must be positive");
  BigRational scale = abs(value) > 1 ? BigRational(abs(value)) : BigRational(1);
  BigInt tiny;
  mpz_ui_pow_ui(tiny.get_mpz_t(), 10, 30);
  if (error * tiny >= scale) {
    throw InvalidArgument("alpha", "decimal error bound must be below 1e-30 of the value's scale");
  }
  std::string label = "dec:" + (digits.size() > 24 ? digits.substr(0, 24) + "..." : digits) + "@" +
                      error.get_str();
  IrrationalSpec spec(DecimalApprox{std::move(digits), std::move(error)}, std::move(label));
  spec.decimal_value_ = std::move(value);
  return spec;
}

IrrationalSpec IrrationalSpec::golden() {
  IrrationalSpec s = surd(1, 1, 5, 2);
  s.label_ = "golden";
  return s;
}

IrrationalSpec IrrationalSpec::sqrt2() {
  IrrationalSpec s = surd(0, 1, 2, 1);
  s.label_ = "sqrt2";
  return s;
}

IrrationalSpec IrrationalSpec::e(unsigned digits) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, digits);
  IrrationalSpec s = decimal(e_decimal_digits(digits), BigRational(1, den));
  s.label_ = digits == 300 ? "e" : "e" + std::to_string(digits);
  return s;
}

std::optional<SurdValue> IrrationalSpec::exact() const {
  if (const auto* s = std::get_if<QuadraticSurd>(&value_)) return SurdValue(s->a, s->b, s->d, s->c);
  return std::nullopt;
}

BigInt IrrationalSpec::explicit_quotient(std::size_t i) const {
  const auto& cf = std::get<ExplicitCF>(value_);
  if (i < cf.prefix.size()) return cf.prefix[i];
  if (!cf.rule) {
    throw PrecisionExhausted("explicit continued fraction has only " +
                             std::to_string(cf.prefix.size()) + " quotients");
  }
  BigInt a = cf.rule(i);
  if (a < 1) throw InvalidArgument("alpha", "generated quotient a_" + std::to_string(i) + " < 1");
  return a;
}

Interval IrrationalSpec::bracket(unsigned bits) const {
  if (const auto* s = std::get_if<QuadraticSurd>(&value_)) {
    return SurdValue(s->a, s->b, s->d, s->c).bracket(bits);
  }
  if (const auto* dec = std::get_if<DecimalApprox>(&value_)) {
    Interval iv{decimal_value_ - dec->error, decimal_value_ + dec->error};
    if (iv.width() * BigRational(pow2(bits)) > 1) {
      throw PrecisionExhausted("decimal approximation is too coarse for " + std::to_string(bits) +
                               " bits");
    }
    return iv;
  }
  // Explicit CF: alpha lies between p_{M}/q_{M} and the mediant with p_{M-1}/q_{M-1}.
  const BigInt target = pow2(bits);
  BigInt p_prev = 1, q_prev = 0, p = explicit_quotient(0), q = 1;
  for (std::size_t i = 1;; ++i) {
    if (q * (q + q_prev) >= target && i > 1) {
      BigRational x(p, q), y(p + p_prev, q + q_prev);
      x.canonicalize();
      y.canonicalize();
      return x < y ? Interval{x, y} : Interval{y, x};
    }
    const BigInt a = explicit_quotient(i);
    BigInt pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(pn);
    q = std::move(qn);
  }
}

std::string e_decimal_digits(unsigned digits) {
  // e = sum 1/k!, summed in fixed point with guard digits.
  const unsigned guard = 20;
  BigInt one;
  mpz_ui_pow_ui(one.get_mpz_t(), 10, digits + guard);
  BigInt term = one, sum = 0;
  unsigned long k = 0;
  while (sgn(term) > 0) {
    sum += term;
    ++k;
    term /= k;
  }
  // Each division truncates by < 1 unit; k units of error is far below the guard.
  BigInt guard_scale;
  mpz_ui_pow_ui(guard_scale.get_mpz_t(), 10, guard);
  const BigInt lo = (sum) / guard_scale, hi = (sum + k + 1) / guard_scale;
  if (lo != hi) throw PrecisionExhausted("e digit generation hit a rounding boundary");
  std::string s = lo.get_str();
  return s.substr(0, 1) + "." + s.substr(1);
}

IrrationalSpec parse_alpha(const std::string& text) {
  if (text == "golden") return IrrationalSpec::golden();
  if (text == "sqrt2") return IrrationalSpec::sqrt2();
  if (text == "e") return IrrationalSpec::e();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("alpha", "unknown spec '" + text + "'");
  const std::string kind = text.substr(0, colon), body = text.substr(colon + 1);
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
  };
  auto to_int = [&](const std::string& s) {
    try {
      return BigInt(s, 10);
    } catch (const std::exception&) {
      throw InvalidArgument("alpha", "'" + s + "' is not an integer");
    }
  };
  if (kind == "surd") {
    const auto parts = split(body, ',');
    if (parts.size() != 4) throw InvalidArgument("alpha", "surd needs a,b,d,c");
    return IrrationalSpec::surd(to_int(parts[0]), to_int(parts[1]), to_int(parts[2]),
                                to_int(parts[3]));
  }
  if (kind == "cf") {
    // cf:a0,a1,...        finite prefix
    // cf:a0,a1;p1,p2      prefix then the repeating block p1,p2
    const auto semi = body.find(';');
    std::vector<BigInt> prefix, period;
    for (const auto& s : split(body.substr(0, semi), ',')) prefix.push_back(to_int(s));
    if (semi == std::string::npos) return IrrationalSpec::explicit_cf(std::move(prefix));
    for (const auto& s : split(body.substr(semi + 1), ',')) period.push_back(to_int(s));
    return IrrationalSpec::periodic_cf(std::move(prefix), std::move(period));
  }
  if (kind == "dec") {
    const auto at = body.find('@');
    if (at == std::string::npos) throw InvalidArgument("alpha", "dec spec needs <digits>@<err>");
    return IrrationalSpec::decimal(body.substr(0, at), parse_rational(body.substr(at + 1)));
  }
  throw InvalidArgument("alpha", "unknown spec kind '" + kind + "'");
}

std::vector<BigInt> expand(const IrrationalSpec& spec, std::size_t n_terms) {
  if (n_terms < 1) throw InvalidArgument("terms", "must be >= 1");
  const std::size_t count = n_terms + 1;
  return std::visit(
      [&](const auto& v) -> std::vector<BigInt> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QuadraticSurd>) {
          return expand_surd(v, count);
        } else if constexpr (std::is_same_v<T, ExplicitCF>) {
          std::vector<BigInt> out;
          out.reserve(count);
          for (std::size_t i = 0; i < count; ++i) out.push_back(spec.explicit_quotient(i));
          return out;
        } else {
          const BigRational value = parse_rational(v.digits);
          return expand_interval(value - v.error, value + v.error, count);
        }
      },
      spec.variant());
}

std::vector<Convergent> convergents(std::span<const BigInt> quotients, std::size_t n_max) {
  if (quotients.size() < n_max + 1) {
    throw InvalidArgument("quotients", "need at least n_max + 1 partial quotients");
  }
  std::vector<Convergent> out;
  out.reserve(n_max + 1);
  BigInt p_prev = 1, q_prev = 0, p = quotients[0], q = 1;
  out.push_back({0, p, q});
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigInt pn = quotients[n] * p + p_prev, qn = quotients[n] * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(pn);
    q = std::move(qn);
    out.push_back({n, p, q});
  }
  return out;
}

std::vector<std::int64_t> denominators(const IrrationalSpec& spec, std::size_t n_max) {
  const auto a = expand(spec, n_max);
  const auto cv = convergents(a, n_max);
  std::vector<std::int64_t> out;
  out.reserve(cv.size());
  for (const auto& c : cv) {
    if (c.q > BigInt(pow2(62))) {
      throw InvalidArgument("n", "q_" + std::to_string(c.n) + " exceeds 2^62");
    }
    out.push_back(to_int64(c.q));
  }
  return out;
}

double NormValue::approx() const {
  if (value) return value->to_double();
  return to_double(BigRational((lo + hi) / 2));
}

FracValue frac(const BigInt& q, const BigRational& shift, const IrrationalSpec& spec,
               unsigned precision_bits) {
  if (auto alpha = spec.exact()) {
    SurdValue v = alpha->scaled(q) + shift;
    v = v - BigRational(v.floor());
    return {v.bracket(precision_bits), v};
  }
  const unsigned qbits = static_cast<unsigned>(mpz_sizeinbase(q.get_mpz_t(), 2));
  const Interval a = spec.bracket(precision_bits + qbits + 1);
  Interval iv{a.lo * q + shift, a.hi * q + shift};
  if (sgn(q) < 0) std::swap(iv.lo, iv.hi);
  if (iv.width() * BigRational(pow2(precision_bits)) > 1) {
    throw PrecisionExhausted("cannot bracket frac(x + q alpha) to " +
                             std::to_string(precision_bits) + " bits");
  }
  const BigInt n = floor(iv.lo);
  iv.lo -= n;
  iv.hi -= n;
  return {iv, std::nullopt};
}

NormValue dist_nearest_int(const BigInt& q, const BigRational& shift, const IrrationalSpec& spec,
                           unsigned precision_bits) {
  FracValue f = frac(q, shift, spec, precision_bits);
  NormValue out;
  out.exact_flag = !spec.is_decimal();
  if (f.exact) {
    SurdValue v = *f.exact;
    if (compare(v, BigRational(1, 2)) > 0) v = v.negated() + BigRational(1);
    const Interval iv = v.bracket(precision_bits);
    out.lo = iv.lo < 0 ? BigRational(0) : iv.lo;
    out.hi = iv.hi > BigRational(1, 2) ? BigRational(1, 2) : iv.hi;
    out.value = std::move(v);
    return out;
  }
  auto [lo, hi] = dist_over(f.bracket);
  out.lo = std::move(lo);
  out.hi = std::move(hi);
  return out;
}

NormValue dist_nearest_int(const BigInt& q, const IrrationalSpec& spec, unsigned precision_bits) {
  if (q < 1) throw InvalidArgument("q", "must be >= 1");
  return dist_nearest_int(q, BigRational(0), spec, precision_bits);
}

GrowthClass classify_growth(std::span<const BigInt> quotients, std::size_t horizon,
                            std::size_t min_hits) {
  if (quotients.size() < horizon + 2) {
    throw InvalidArgument("horizon", "needs quotients up to index horizon + 1");
  }
  const auto conv = convergents(quotients, horizon + 1);
  GrowthClass out;
  for (std::size_t k = 1; k <= horizon; ++k) {
    const BigInt& qk = conv[k].q;
    if (qk >= 2 && conv[k + 1].q >= qk * qk) out.indices.push_back(k);
  }
  out.case1 = out.indices.size() >= min_hits;
  if (!out.case1) out.indices.clear();
  return out;
}

}  // namespace contfrac
}  // namespace skewrig
