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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "skewrig/contfrac.hpp"
#include "skewrig/counterexample.hpp"
#include "skewrig/diophantine.hpp"
#include "skewrig/dynamics.hpp"
#include "skewrig/errors.hpp"
#include "skewrig/flows.hpp"
#include "skewrig/fourier.hpp"
#include "skewrig/mobius.hpp"
#include "skewrig/verify.hpp"

namespace skewrig::cli {

namespace {

using Json = nlohmann::ordered_json;
using contfrac::IrrationalSpec;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, const std::string& field) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw InvalidArgument(field, "expected a..b, got '" + text + "'");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const unsigned long lo = std::stoul(a, &u1), hi = std::stoul(b, &u2);
    if (u1 != a.size() || u2 != b.size() || a.empty() || b.empty() || a[0] == '-' || b[0] == '-') {
      throw std::invalid_argument("range");
    }
    if (lo > hi) throw InvalidArgument(field, "need a <= b");
    return {lo, hi};
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidArgument(field, "expected a..b, got '" + text + "'");
  }
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& field) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(trim(item), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != trim(item).size()) throw InvalidArgument(field, "bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Json big(const BigInt& v) {
  if (fits_int64(v)) return to_int64(v);
  return v.get_str();
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return verify::fmt(v.get<double>());
  if (v.is_number()) return v.dump();
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Non-finite floats become null; JSON has no NaN.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

class Emitter {
 public:
  Emitter(std::ostream& os, std::string format) : os_(os), format_(std::move(format)) {}

  void meta(const Json& m) {
    if (format_ == "jsonl") {
      os_ << Json{{"meta", m}}.dump() << '\n';
      return;
    }
    for (const auto& [k, v] : m.items()) {
      if (k == "config") {
        for (const auto& [ck, cv] : v.items()) {
          os_ << "# config." << ck << ": " << (cv.is_string() ? cv.get<std::string>() : cv.dump()) << '\n';
        }
      } else {
        os_ << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      }
    }
  }

  void row(const Json& r) {
    if (format_ == "jsonl") {
      os_ << r.dump() << '\n';
      return;
    }
    if (!header_) {
      bool first = true;
      for (const auto& [k, v] : r.items()) {
        os_ << (first ? "" : ",") << k;
        first = false;
      }
      os_ << '\n';
      header_ = true;
    }
    bool first = true;
    for (const auto& [k, v] : r.items()) {
      os_ << (first ? "" : ",") << csv_cell(v);
      first = false;
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::string format_;
  bool header_ = false;
};

unsigned precision_from_env() {
  const char* env = std::getenv("SKEWRIG_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return 256;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v < 64 || v > 1u << 20) {
    throw InvalidArgument("SKEWRIG_PRECISION_BITS", "expected an integer in [64, 2^20]");
  }
  return static_cast<unsigned>(v);
}

// Flat key=value config: keys are flag names without dashes.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config", "cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config", "expected key=value: '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  for (const auto& a : args) {
    if (a == name || a.rfind(name + "=", 0) == 0) return true;
  }
  return false;
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

struct Options {
  // shared
  std::string output;
  std::string format;
  bool no_timing = false;
  unsigned threads = 1;
  std::string config;
  std::string alpha;
  // cf
  std::size_t terms = 10;
  bool convergents = false;
  // sums
  std::string lemma;
  std::string k_range;
  std::string cap = "1";
  double eps_sums = 0.5;
  std::string path = "auto";
  std::uint64_t exact_limit = 10000;
  // rigidity / rokhlin
  std::string phi = "cos";
  double eps = 0.005;
  double delta = 0.0;
  double lambda = 0.0;
  std::string n_range;
  bool sup = false;
  std::string pr_check;
  std::size_t grid = 1024;
  // counterexample
  std::size_t K = 30;
  // mobius
  std::string phi_mobius = "trig:1=0.5,0;2=0,0.25";
  std::string freq = "1,1";
  double x0 = 0.0, y0 = 0.0;
  std::size_t N = 1000000;
  std::string checkpoints;
  // flow
  std::string roof = "cos+2";
  double t = 1.0;
  double gamma = 0.0;
  std::size_t points = 16;
  // rokhlin
  std::string f = "cos";
  std::string L = "linear:1";
};

Json resolved_config(const CLI::App& sub, const Options& o, unsigned bits) {
  Json cfg;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    std::string value;
    if (opt->get_type_size() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    cfg[name] = value;
  }
  cfg["threads"] = std::to_string(o.threads);
  cfg["precision_bits"] = std::to_string(bits);
  return cfg;
}

double resolve_cap(const std::string& cap, std::int64_t q) {
  if (cap == "q") return static_cast<double>(q);
  if (cap == "sqrtq") return std::floor(std::sqrt(static_cast<double>(q)));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cap, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cap.size()) throw InvalidArgument("cap", "expected a number, q or sqrtq");
  return v;
}

flows::RoofFunction parse_roof(const std::string& text) {
  const auto plus = text.rfind('+');
  if (plus == std::string::npos) throw InvalidArgument("roof", "expected <phi-spec>+beta");
  const std::string b = text.substr(plus + 1);
  std::size_t used = 0;
  double beta = 0.0;
  try {
    beta = std::stod(b, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != b.size()) throw InvalidArgument("roof", "bad beta '" + b + "'");
  const FourierObservable phi = parse_phi(text.substr(0, plus));
  return flows::RoofFunction(phi.with_mean(phi.mean() + beta));
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_cf(const Options& o, unsigned bits, Emitter& em) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const auto a = contfrac::expand(spec, o.terms);
  const auto cv = contfrac::convergents(a, o.terms);
  for (std::size_t n = 0; n <= o.terms; ++n) {
    Json r{{"n", n}, {"a_n", big(a[n])}, {"p_n", big(cv[n].p)}, {"q_n", big(cv[n].q)}};
    if (o.convergents) r["dist_q_alpha"] = contfrac::dist_nearest_int(cv[n].q, spec, bits).approx();
    em.row(r);
  }
  return kOk;
}

int cmd_sums(const Options& o, unsigned bits, Emitter& em) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const auto [k0, k1] = parse_range(o.k_range, "k-range");
  diophantine::SumOptions so;
  so.precision_bits = bits;
  so.threads = o.threads;
  so.exact_limit = o.exact_limit;
  so.path = o.path == "exact" ? diophantine::SumPath::Exact
            : o.path == "fast" ? diophantine::SumPath::Fast
                               : diophantine::SumPath::Auto;
  const auto q = contfrac::denominators(spec, k1);
  for (std::size_t k = k0; k <= k1; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    diophantine::SumReport r;
    if (o.lemma == "3.2") {
      r = diophantine::sum_inverse_sq(spec, k, so);
    } else if (o.lemma == "3.3") {
      r = diophantine::sum_slice_min(spec, k, resolve_cap(o.cap, q[k]), so);
    } else if (o.lemma == "6.1") {
      r = diophantine::sum_inverse_l1(spec, k, so);
    } else {
      r = diophantine::sum_slice_min_l1(spec, k, resolve_cap(o.cap, q[k]), o.eps_sums, so);
    }
    const double ms = o.no_timing ? 0.0 : ms_since(t0);
    Json row{{"k", k},
             {"q_k", big(r.q_k)},
             {"value", r.value},
             {"normalized_ratio", r.normalized_ratio},
             {"term_count", r.term_count},
             {"elapsed_ms", ms},
             {"error_bound", r.error_bound},
             {"exact_path", r.exact_path}};
    if (r.c) row["c"] = *r.c;
    if (r.eps) row["eps"] = *r.eps;
    em.row(row);
  }
  return kOk;
}

int cmd_rigidity(const Options& o, Emitter& em, std::ostream& err) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const FourierObservable phi = parse_phi(o.phi);
  dynamics::RigidityConfig cfg;
  cfg.eps = o.eps;
  cfg.delta = o.delta;
  cfg.lambda = o.lambda;
  std::tie(cfg.n_min, cfg.n_max) = parse_range(o.n_range, "n-range");
  cfg.grid_size = o.grid;
  cfg.sup = o.sup;
  if (cfg.out_of_hypothesis()) {
    err << "warning: eps = " << verify::fmt(o.eps)
        << " is outside (0, 1/100); rows are flagged out_of_hypothesis\n";
  }
  const auto seq = dynamics::build_rigidity_sequence(spec, phi, cfg);
  std::map<std::size_t, dynamics::PrRow> pr;
  if (!o.pr_check.empty()) {
    const auto ab = parse_int_list(o.pr_check, "pr-check");
    if (ab.size() != 2) throw InvalidArgument("pr-check", "expected a,b");
    for (const auto& row : dynamics::pr_rigidity_check(spec, phi, cfg, ab[0], ab[1])) pr[row.n] = row;
  }
  for (const auto& e : seq.entries) {
    Json r{{"n", e.n},
           {"q_n", e.q_n},
           {"ell_n", e.ell_n},
           {"ell_relaxed", e.ell_relaxed},
           {"r_n", e.r_n},
           {"D_l2_hat", e.D_l2_hat},
           {"D_l2_direct", e.D_l2_direct},
           {"D_l2_direct_error", e.D_l2_direct_error}};
    if (o.sup) r["D_sup"] = finite_or_null(e.D_sup);
    r["bound"] = e.bound;
    r["case1"] = seq.case1;
    r["out_of_hypothesis"] = seq.out_of_hypothesis;
    if (auto it = pr.find(e.n); it != pr.end()) {
      r["pr_K"] = it->second.K;
      r["pr_base"] = it->second.base;
      r["pr_bound_sum"] = it->second.bound_sum;
      r["pr_direct_sum"] = it->second.direct_sum;
      r["pr_scaling_ok"] = it->second.scaling_ok;
    }
    em.row(r);
  }
  return kOk;
}

int cmd_counterexample(const Options& o, Emitter& em) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const auto [a, b] = parse_range(o.n_range, "n-range");
  const auto cp = counterexample::build(spec, o.K);
  for (const auto& r : counterexample::lower_bound_table(cp, a, b, o.grid)) {
    Json row{{"n", r.n},
             {"q_n", r.q_n},
             {"D_hat", r.D_hat},
             {"normalized", r.normalized},
             {"threshold_ratio", finite_or_null(r.threshold_ratio)},
             {"case", r.small_case ? "small" : "large"},
             {"dominant_k", r.dominant_k},
             {"dominant_term", r.dominant_term},
             {"next_below_double", r.next_below_double ? Json(*r.next_below_double) : Json(nullptr)},
             {"max_abs_S", r.max_abs_S},
             {"C", cp.C},
             {"variation_bound", cp.variation_bound}};
    em.row(row);
  }
  return kOk;
}

int cmd_mobius(const Options& o, Emitter& em) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const FourierObservable phi = parse_phi(o.phi_mobius);
  const auto ab = parse_int_list(o.freq, "freq");
  if (ab.size() != 2) throw InvalidArgument("freq", "expected a,b");
  std::vector<std::size_t> cps;
  if (!o.checkpoints.empty()) {
    for (auto v : parse_int_list(o.checkpoints, "checkpoints")) {
      if (v < 1) throw InvalidArgument("checkpoints", "must be positive");
      if (static_cast<std::size_t>(v) > o.N) throw InvalidArgument("checkpoints", "must not exceed N");
      cps.push_back(static_cast<std::size_t>(v));
    }
  }
  cps.push_back(o.N);
  const auto prof = mobius::disjointness_sum(spec, phi, ab[0], ab[1], o.x0, o.y0, cps);
  for (const auto& c : prof.checkpoints) {
    em.row(Json{{"N", c.N},
                {"re", c.average.real()},
                {"im", c.average.imag()},
                {"abs", std::abs(c.average)}});
  }
  return kOk;
}

int cmd_flow(const Options& o, Emitter& em) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const auto roof = parse_roof(o.roof);
  const auto [a, b] = parse_range(o.n_range, "n-range");
  const double gamma = o.gamma > 0.0 ? o.gamma : o.eps / 1000.0;
  flows::FlowRigidityOptions fo;
  fo.grid_size = o.grid;
  fo.measure_points = o.points;
  for (const auto& r : flows::flow_rigidity(spec, roof, o.t, gamma, a, b, fo)) {
    em.row(Json{{"n", r.n},
                {"q_n", r.q_n},
                {"v_n", r.v_n},
                {"j_n", r.j_n},
                {"relaxed", r.relaxed},
                {"oscillation", r.oscillation},
                {"time_error", r.time_error},
                {"rotation", r.rotation},
                {"bound", r.bound},
                {"normalized", r.normalized},
                {"measured", r.measured}});
  }
  return kOk;
}

int cmd_rokhlin(const Options& o, Emitter& em) {
  const IrrationalSpec spec = contfrac::parse_alpha(o.alpha);
  const FourierObservable f = parse_phi(o.f);
  const auto L = flows::parse_flow(o.L);
  const auto [a, b] = parse_range(o.n_range, "n-range");
  for (const auto& r : flows::rokhlin_rigidity(spec, f, L, a, b, o.eps, o.grid)) {
    em.row(Json{{"n", r.n},
                {"q_n", r.q_n},
                {"rotation", r.rotation},
                {"sup_S", r.sup_S},
                {"bound", r.bound},
                {"measured", r.measured},
                {"normalized", r.normalized}});
  }
  return kOk;
}

void inject_config(CLI::App& app, std::vector<std::string>& args) {
  const std::string path = config_path(args);
  if (path.empty()) return;
  const auto kv = read_config(path);
  std::size_t pos = 0;
  CLI::App* sub = nullptr;
  for (; pos < args.size(); ++pos) {
    for (CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == args[pos]) sub = s;
    }
    if (sub != nullptr) break;
  }
  if (sub == nullptr) return;
  std::vector<std::string> extra;
  for (const auto& [key, value] : kv) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) opt = app.get_option_no_throw(flag);
    if (opt == nullptr) throw InvalidArgument(key, "unknown key in config file");
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos + 1), extra.begin(), extra.end());
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Numerical experiments for skew products over irrational rotations", "skewrig"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  app.add_option("--output", o.output, "Write the table to this file (with a metadata header)");
  app.add_flag("--no-timing", o.no_timing, "Report elapsed_ms as 0");
  app.add_option("--threads", o.threads, "Worker cap")->check(CLI::Range(1u, 256u));
  app.add_option("--config", o.config, "Flat key=value file; flags override it");
  const auto fmt_check = CLI::IsMember({"csv", "jsonl"});

  auto* cf = app.add_subcommand("cf", "Continued fraction expansion");
  cf->add_option("--alpha", o.alpha)->required();
  cf->add_option("--terms", o.terms)->capture_default_str();
  cf->add_flag("--convergents", o.convergents, "Add ||q_n alpha||");
  cf->add_option("--out", o.format)->check(fmt_check)->default_str("jsonl");

  auto* sums = app.add_subcommand("sums", "Diophantine sums");
  sums->add_option("--alpha", o.alpha)->required();
  sums->add_option("--lemma", o.lemma)->required()->check(CLI::IsMember({"3.2", "3.3", "6.1", "6.2"}));
  sums->add_option("--k-range", o.k_range)->required();
  sums->add_option("--cap", o.cap, "c: a number, q or sqrtq")->capture_default_str();
  sums->add_option("--eps", o.eps_sums)->capture_default_str();
  sums->add_option("--path", o.path)->check(CLI::IsMember({"auto", "exact", "fast"}))->capture_default_str();
  sums->add_option("--exact-limit", o.exact_limit)->capture_default_str();
  sums->add_option("--out", o.format)->check(fmt_check)->default_str("csv");

  auto* rig = app.add_subcommand("rigidity", "Rigidity sequence table");
  rig->add_option("--alpha", o.alpha)->required();
  rig->add_option("--phi", o.phi)->capture_default_str();
  rig->add_option("--eps", o.eps)->capture_default_str();
  rig->add_option("--delta", o.delta, "0 means eps/10")->capture_default_str();
  rig->add_option("--lambda", o.lambda, "0 means eps/100")->capture_default_str();
  rig->add_option("--n-range", o.n_range)->required();
  rig->add_flag("--sup", o.sup, "Add the sup-norm column");
  rig->add_option("--pr-check", o.pr_check, "a,b for f = e(ax + by)");
  rig->add_option("--grid", o.grid)->capture_default_str();
  rig->add_option("--out", o.format)->check(fmt_check)->default_str("csv");

  auto* ce = app.add_subcommand("counterexample", "Slowly rigid cocycle table");
  ce->add_option("--alpha", o.alpha)->required();
  ce->add_option("--K", o.K)->capture_default_str();
  ce->add_option("--n-range", o.n_range)->required();
  ce->add_option("--grid", o.grid)->capture_default_str();
  ce->add_option("--out", o.format)->check(fmt_check)->default_str("csv");

  auto* mob = app.add_subcommand("mobius", "Mobius-weighted ergodic averages");
  mob->add_option("--alpha", o.alpha)->required();
  mob->add_option("--phi", o.phi_mobius)->capture_default_str();
  mob->add_option("--freq", o.freq)->capture_default_str();
  mob->add_option("--x0", o.x0)->capture_default_str();
  mob->add_option("--y0", o.y0)->capture_default_str();
  mob->add_option("--N", o.N)->capture_default_str();
  mob->add_option("--checkpoints", o.checkpoints);
  mob->add_option("--out", o.format)->check(fmt_check)->default_str("csv");

  auto* flow = app.add_subcommand("flow", "Special flow rigidity");
  flow->add_option("--alpha", o.alpha)->required();
  flow->add_option("--roof", o.roof, "<phi-spec>+beta")->capture_default_str();
  flow->add_option("--t", o.t)->capture_default_str();
  flow->add_option("--gamma", o.gamma, "0 means eps/1000")->capture_default_str();
  flow->add_option("--eps", o.eps)->capture_default_str();
  flow->add_option("--n-range", o.n_range)->required();
  flow->add_option("--grid", o.grid)->capture_default_str();
  flow->add_option("--points", o.points)->capture_default_str();
  flow->add_option("--out", o.format)->check(fmt_check)->default_str("csv");

  auto* rok = app.add_subcommand("rokhlin", "Rokhlin extension rigidity");
  rok->add_option("--alpha", o.alpha)->required();
  rok->add_option("--f", o.f)->capture_default_str();
  rok->add_option("--L", o.L)->capture_default_str();
  rok->add_option("--eps", o.eps)->capture_default_str();
  rok->add_option("--n-range", o.n_range)->required();
  rok->add_option("--grid", o.grid)->capture_default_str();
  rok->add_option("--out", o.format)->check(fmt_check)->default_str("csv");

  auto* ver = app.add_subcommand("verify", "Invariant suite");

  try {
    std::vector<std::string> args = raw_args;
    inject_config(app, args);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::CallForVersion&) {
      out << kVersion << '\n';
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kInvalidConfig;
    }

    const unsigned bits = precision_from_env();
    CLI::App* sub = app.get_subcommands().front();
    if (o.format.empty()) o.format = sub == cf ? "jsonl" : "csv";

    std::ofstream file;
    if (!o.output.empty()) {
      file.open(o.output);
      if (!file) throw InvalidArgument("output", "cannot write '" + o.output + "'");
    }
    std::ostream& os = o.output.empty() ? out : file;

    Json meta{{"tool", std::string("skewrig ") + kVersion},
              {"command", sub->get_name()},
              {"config", resolved_config(*sub, o, bits)}};
    if (!o.alpha.empty()) meta["alpha"] = o.alpha;
    meta["timestamp"] = utc_timestamp();

    if (sub == ver) {
      verify::VerifyOptions vo;
      vo.precision_bits = bits;
      vo.threads = o.threads;
      const auto checks = verify::run_all(vo);
      Emitter(os, "csv").meta(meta);
      os << verify::format_report(checks);
      return verify::all_pass(checks) ? kOk : kCheckFailed;
    }

    Emitter em(os, o.format);
    if (!o.output.empty()) em.meta(meta);
    if (sub == cf) return cmd_cf(o, bits, em);
    if (sub == sums) return cmd_sums(o, bits, em);
    if (sub == rig) return cmd_rigidity(o, em, err);
    if (sub == ce) return cmd_counterexample(o, em);
    if (sub == mob) return cmd_mobius(o, em);
    if (sub == flow) return cmd_flow(o, em);
    return cmd_rokhlin(o, em);
  } catch (const InvalidArgument& e) {
    err << "error: invalid " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const NotIrrational& e) {
    err << "error: alpha: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const PrecisionExhausted& e) {
    err << "error: precision exhausted: " << e.what()
        << "\nhint: raise SKEWRIG_PRECISION_BITS or give alpha with more digits\n";
    return kPrecisionExhausted;
  } catch (const NoSolution& e) {
    err << "error: no solution: " << e.what() << '\n';
    return kNoSolution;
  }
}

}  // namespace skewrig::cli
