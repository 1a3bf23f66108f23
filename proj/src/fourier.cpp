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

#include "skewrig/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "skewrig/errors.hpp"

namespace skewrig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double parse_double(const std::string& s, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument(field, "not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InvalidArgument(field, "not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, const std::string& field) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument(field, "not an integer: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument(field, "not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Folds a signed frequency into the stored q > 0 convention.
void add_mode(std::vector<Mode>& modes, std::int64_t q, std::complex<double> c) {
  if (q == 0) throw InvalidArgument("phi", "q = 0 is the mean; use c0=");
  if (q < 0) {
    q = -q;
    c = std::conj(c);
  }
  modes.push_back({q, c});
}

FourierObservable from_json(const nlohmann::json& j) {
  double c0 = 0.0;
  std::vector<Mode> modes;
  Envelope env;
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    c0 = j.value("c0", 0.0);
    if (!j.contains("coeffs")) throw InvalidArgument("phi", "JSON object needs \"coeffs\"");
    list = &j.at("coeffs");
    if (j.contains("envelope")) {
      const auto& e = j.at("envelope");
      env = PowerEnvelope{e.at("A").get<double>(), e.at("exponent").get<double>()};
    }
  }
  if (!list->is_array()) throw InvalidArgument("phi", "coefficients must be a JSON list");
  for (const auto& t : *list) {
    if (!t.is_array() || t.size() < 2 || t.size() > 3) {
      throw InvalidArgument("phi", "coefficient entries are [q, re] or [q, re, im]");
    }
    const double im = t.size() == 3 ? t[2].get<double>() : 0.0;
    add_mode(modes, t[0].get<std::int64_t>(), {t[1].get<double>(), im});
  }
  return FourierObservable(c0, std::move(modes), std::move(env));
}

}  // namespace

FourierObservable::FourierObservable(double c0, std::vector<Mode> modes, Envelope envelope)
    : c0_(c0), modes_(std::move(modes)), envelope_(std::move(envelope)) {
  if (!std::isfinite(c0_)) throw InvalidArgument("c0", "must be finite");
  if (const auto* p = std::get_if<PowerEnvelope>(&envelope_)) {
    if (!(p->A > 0.0) || !(p->exponent > 1.0)) {
      throw InvalidArgument("envelope", "need A > 0 and exponent > 1");
    }
  }
  if (const auto* p = std::get_if<PsiEnvelope>(&envelope_)) {
    if (!p->psi) throw InvalidArgument("envelope", "psi is empty");
  }
  std::sort(modes_.begin(), modes_.end(), [](const Mode& a, const Mode& b) { return a.q < b.q; });
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const Mode& m = modes_[i];
    if (m.q <= 0) throw InvalidArgument("phi", "stored frequencies must be positive");
    if (i > 0 && modes_[i - 1].q == m.q) {
      throw InvalidArgument("phi", "duplicate frequency " + std::to_string(m.q));
    }
    if (!std::isfinite(m.c.real()) || !std::isfinite(m.c.imag())) {
      throw InvalidArgument("phi", "non-finite coefficient at q = " + std::to_string(m.q));
    }
    if (std::abs(m.c) > envelope_at(m.q) * (1.0 + 1e-12)) {
      throw InvalidArgument("phi", "coefficient at q = " + std::to_string(m.q) +
                                       " exceeds the declared envelope");
    }
  }
  suffix_l1_.assign(modes_.size() + 1, 0.0);
  for (std::size_t i = modes_.size(); i-- > 0;) {
    suffix_l1_[i] = suffix_l1_[i + 1] + std::abs(modes_[i].c);
  }
  for (const Mode& m : modes_) {
    const double qa = static_cast<double>(m.q) * std::abs(m.c);
    lipschitz_ += 2.0 * kTwoPi * qa;
    variation_ += 8.0 * qa;
  }
}

FourierObservable FourierObservable::cosine(double amplitude, double c0) {
  return FourierObservable(c0, {{1, {amplitude / 2.0, 0.0}}});
}

FourierObservable FourierObservable::random_envelope(double A, double exponent,
                                                     std::uint64_t seed, std::int64_t modes,
                                                     double c0) {
  if (modes < 1) throw InvalidArgument("modes", "need at least one mode");
  std::mt19937_64 rng(seed);
  std::vector<Mode> out;
  out.reserve(static_cast<std::size_t>(modes));
  for (std::int64_t q = 1; q <= modes; ++q) {
    // 53 random bits; avoids implementation-defined distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    const double mag = A * std::pow(static_cast<double>(q), -exponent);
    out.push_back({q, std::polar(mag, kTwoPi * u)});
  }
  // Rounding in polar() can push |c_q| a hair above the envelope.
  return FourierObservable(c0, std::move(out), PowerEnvelope{A * (1.0 + 1e-14), exponent});
}

double FourierObservable::envelope_at(std::int64_t q) const {
  const double aq = static_cast<double>(q < 0 ? -q : q);
  if (const auto* p = std::get_if<PowerEnvelope>(&envelope_)) return p->A * std::pow(aq, -p->exponent);
  if (const auto* p = std::get_if<PsiEnvelope>(&envelope_)) return 1.0 / (aq * p->psi(aq));
  return std::numeric_limits<double>::infinity();
}

double FourierObservable::oscillation_at(u128 x) const {
  double s = 0.0;
  for (const Mode& m : modes_) {
    const double t = FixedRotation::to_signed(x * static_cast<u128>(m.q));
    const double ang = kTwoPi * t;
    s += 2.0 * (m.c.real() * std::cos(ang) - m.c.imag() * std::sin(ang));
  }
  return s;
}

double FourierObservable::at_phase(u128 x) const { return c0_ + oscillation_at(x); }

double FourierObservable::tail_l1(std::int64_t Q) const {
  const auto it = std::upper_bound(modes_.begin(), modes_.end(), Q,
                                   [](std::int64_t v, const Mode& m) { return v < m.q; });
  return 2.0 * suffix_l1_[static_cast<std::size_t>(it - modes_.begin())];
}

std::string FourierObservable::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "c0=" << c0_ << " modes=" << modes_.size() << " qmax=" << q_max();
  if (const auto* p = std::get_if<PowerEnvelope>(&envelope_)) {
    os << " envelope=" << p->A << "/q^" << p->exponent;
  } else if (const auto* p = std::get_if<PsiEnvelope>(&envelope_)) {
    os << " envelope=1/(q*" << p->label << ")";
  }
  return os.str();
}

FourierObservable parse_phi(const std::string& text) {
  if (text == "zero" || text == "0") return FourierObservable();
  if (text == "cos") return FourierObservable::cosine();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("phi", "unknown spec '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "trig") {
    double c0 = 0.0;
    std::vector<Mode> modes;
    for (const std::string& item : split(body, ';')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("phi", "expected key=value in '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      if (key == "c0") {
        c0 = parse_double(val, "phi.c0");
        continue;
      }
      const auto parts = split(val, ',');
      if (parts.empty() || parts.size() > 2) throw InvalidArgument("phi", "expected re[,im] in '" + item + "'");
      const double re = parse_double(parts[0], "phi.re");
      const double im = parts.size() == 2 ? parse_double(parts[1], "phi.im") : 0.0;
      add_mode(modes, parse_int(key, "phi.q"), {re, im});
    }
    return FourierObservable(c0, std::move(modes));
  }
  if (kind == "envelope") {
    const auto parts = split(body, ',');
    if (parts.size() < 3 || parts.size() > 5) {
      throw InvalidArgument("phi", "envelope:A,exponent,seed[,modes[,c0]]");
    }
    const double A = parse_double(parts[0], "phi.A");
    const double s = parse_double(parts[1], "phi.exponent");
    const auto seed = static_cast<std::uint64_t>(parse_int(parts[2], "phi.seed"));
    const std::int64_t modes = parts.size() > 3 ? parse_int(parts[3], "phi.modes") : 50;
    const double c0 = parts.size() > 4 ? parse_double(parts[4], "phi.c0") : 0.0;
    return FourierObservable::random_envelope(A, s, seed, modes, c0);
  }
  if (kind == "file") {
    std::ifstream in(body);
    if (!in) throw InvalidArgument("phi", "cannot open '" + body + "'");
    nlohmann::json j;
    try {
      in >> j;
      return from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("phi", std::string("bad JSON: ") + e.what());
    }
  }
  throw InvalidArgument("phi", "unknown kind '" + kind + "'");
}

}  // namespace skewrig
