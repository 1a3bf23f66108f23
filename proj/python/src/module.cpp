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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "skewrig/contfrac.hpp"
#include "skewrig/counterexample.hpp"
#include "skewrig/diophantine.hpp"
#include "skewrig/dynamics.hpp"
#include "skewrig/errors.hpp"
#include "skewrig/flows.hpp"
#include "skewrig/fourier.hpp"
#include "skewrig/mobius.hpp"
#include "skewrig/verify.hpp"

namespace py = pybind11;
using namespace skewrig;
using contfrac::IrrationalSpec;

namespace {

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.get_str()); }

py::list to_py(const std::vector<BigInt>& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

IrrationalSpec alpha_of(const std::string& s) { return contfrac::parse_alpha(s); }

py::dict sum_dict(const diophantine::SumReport& r) {
  py::dict d;
  d["k"] = r.k;
  d["q_k"] = to_py(r.q_k);
  d["value"] = r.value;
  d["error_bound"] = r.error_bound;
  d["normalized_ratio"] = r.normalized_ratio;
  d["term_count"] = r.term_count;
  d["exact_path"] = r.exact_path;
  if (r.c) d["c"] = *r.c;
  if (r.eps) d["eps"] = *r.eps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_skewrig, m) {
  m.doc() = "Skew products over irrational rotations: continued fractions, Diophantine sums, rigidity tables";

  py::register_exception<PrecisionExhausted>(m, "PrecisionExhausted", PyExc_ArithmeticError);
  py::register_exception<NoSolution>(m, "NoSolution", PyExc_RuntimeError);
  py::register_exception<NotIrrational>(m, "NotIrrational", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("partial_quotients", [](const std::string& alpha, std::size_t n) {
    return to_py(contfrac::expand(alpha_of(alpha), n));
  }, py::arg("alpha"), py::arg("n"));
  m.def("convergents", [](const std::string& alpha, std::size_t n) {
    const auto a = contfrac::expand(alpha_of(alpha), n);
    py::list out;
    for (const auto& c : contfrac::convergents(a, n)) out.append(py::make_tuple(to_py(c.p), to_py(c.q)));
    return out;
  }, py::arg("alpha"), py::arg("n"));
  m.def("dist_nearest_int", [](const std::string& alpha, const std::string& q, unsigned bits) {
    const auto v = contfrac::dist_nearest_int(BigInt(q), alpha_of(alpha), bits);
    return py::make_tuple(to_double(v.lo), to_double(v.hi));
  }, py::arg("alpha"), py::arg("q"), py::arg("precision_bits") = 256,
  "Bracket (lo, hi) of ||q alpha||; q is given as a decimal string.");

  m.def("sum_inverse_sq", [](const std::string& alpha, std::size_t k) {
    return sum_dict(diophantine::sum_inverse_sq(alpha_of(alpha), k));
  }, py::arg("alpha"), py::arg("k"));
  m.def("sum_inverse_l1", [](const std::string& alpha, std::size_t k) {
    return sum_dict(diophantine::sum_inverse_l1(alpha_of(alpha), k));
  }, py::arg("alpha"), py::arg("k"));
  m.def("sum_slice_min", [](const std::string& alpha, std::size_t k, double c) {
    return sum_dict(diophantine::sum_slice_min(alpha_of(alpha), k, c));
  }, py::arg("alpha"), py::arg("k"), py::arg("c"));

  py::class_<FourierObservable>(m, "Observable")
      .def(py::init([](const std::string& spec) { return parse_phi(spec); }), py::arg("spec"))
      .def("__call__", [](const FourierObservable& f, double x) { return f(x); })
      .def_property_readonly("mean", &FourierObservable::mean)
      .def_property_readonly("modes", [](const FourierObservable& f) {
        py::list out;
        for (const auto& md : f.modes()) out.append(py::make_tuple(md.q, md.c));
        return out;
      })
      .def("__repr__", [](const FourierObservable& f) { return "Observable(" + f.describe() + ")"; });

  m.def("birkhoff_sum", [](const std::string& alpha, const FourierObservable& phi, double x, std::int64_t r) {
    return dynamics::birkhoff_direct(phi, FixedRotation(alpha_of(alpha)), x, r);
  }, py::arg("alpha"), py::arg("phi"), py::arg("x"), py::arg("r"));
  m.def("rigidity_l2_hat", [](const std::string& alpha, const FourierObservable& phi, std::int64_t r) {
    return dynamics::rigidity_l2_hat(FixedRotation(alpha_of(alpha)), phi, r).value;
  }, py::arg("alpha"), py::arg("phi"), py::arg("r"));
  m.def("rigidity_table", [](const std::string& alpha, const FourierObservable& phi, double eps,
                             std::size_t n_min, std::size_t n_max, bool sup) {
    dynamics::RigidityConfig cfg;
    cfg.eps = eps;
    cfg.n_min = n_min;
    cfg.n_max = n_max;
    cfg.sup = sup;
    py::list out;
    for (const auto& e : dynamics::build_rigidity_sequence(alpha_of(alpha), phi, cfg).entries) {
      py::dict d;
      d["n"] = e.n;
      d["q_n"] = e.q_n;
      d["ell_n"] = e.ell_n;
      d["r_n"] = e.r_n;
      d["D_l2_hat"] = e.D_l2_hat;
      d["D_l2_direct"] = e.D_l2_direct;
      d["D_sup"] = e.D_sup;
      d["bound"] = e.bound;
      out.append(d);
    }
    return out;
  }, py::arg("alpha"), py::arg("phi"), py::arg("eps") = 0.005, py::arg("n_min") = 1,
  py::arg("n_max") = 20, py::arg("sup") = true);

  m.def("counterexample_table", [](const std::string& alpha, std::size_t K, std::size_t n_min, std::size_t n_max) {
    const auto cp = counterexample::build(alpha_of(alpha), K);
    py::list out;
    for (const auto& r : counterexample::lower_bound_table(cp, n_min, n_max)) {
      py::dict d;
      d["n"] = r.n;
      d["q_n"] = r.q_n;
      d["D_hat"] = r.D_hat;
      d["normalized"] = r.normalized;
      d["max_abs_S"] = r.max_abs_S;
      out.append(d);
    }
    return out;
  }, py::arg("alpha"), py::arg("K"), py::arg("n_min"), py::arg("n_max"));

  m.def("mobius", [](std::size_t N) {
    const auto t = mobius::sieve(N);
    return std::vector<int>(t.values().begin(), t.values().end());
  }, py::arg("N"), "mu(1), ..., mu(N)");
  m.def("mertens", [](std::size_t N) { return mobius::mertens(mobius::sieve(N), N); }, py::arg("N"));
  m.def("disjointness_averages", [](const std::string& alpha, const FourierObservable& phi, std::int64_t a,
                                    std::int64_t b, std::vector<std::size_t> checkpoints) {
    std::vector<std::complex<double>> out;
    for (const auto& c : mobius::disjointness_sum(alpha_of(alpha), phi, a, b, 0.0, 0.0, std::move(checkpoints)).checkpoints) {
      out.push_back(c.average);
    }
    return out;
  }, py::arg("alpha"), py::arg("phi"), py::arg("a"), py::arg("b"), py::arg("checkpoints"));

  m.def("special_flow", [](const std::string& alpha, const FourierObservable& roof, double x, double s, double t) {
    const FixedRotation rot(alpha_of(alpha));
    const auto p = flows::special_flow_step(rot, flows::RoofFunction(roof), {x, s}, t);
    return py::make_tuple(p.x, p.s);
  }, py::arg("alpha"), py::arg("roof"), py::arg("x"), py::arg("s"), py::arg("t"));

  m.def("verify", [](unsigned bits) {
    verify::VerifyOptions o;
    o.precision_bits = bits;
    const auto checks = verify::run_all(o);
    return py::make_tuple(verify::all_pass(checks), verify::format_report(checks));
  }, py::arg("precision_bits") = 256, "Returns (all_passed, report).");

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run a skewrig subcommand; returns (exit_code, stdout, stderr).");

  m.attr("__version__") = cli::kVersion;
}
