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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = skewrig::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cf prints N+1 JSON lines with Fibonacci denominators") {
  const auto r = run({"cf", "--alpha", "golden", "--terms", "10"});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 11);
  CHECK(r.out.find(R"({"n":10,"a_n":1,"p_n":144,"q_n":89})") != std::string::npos);
}

TEST_CASE("csv output and determinism") {
  const std::vector<std::string> args{"rigidity", "--alpha", "sqrt2", "--n-range", "2..6", "--sup"};
  const auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,q_n,ell_n,", 0) == 0);
  CHECK(lines(a.out) == 6);
}

TEST_CASE("out-of-hypothesis eps warns and proceeds") {
  const auto r = run({"rigidity", "--alpha", "golden", "--n-range", "3..4", "--eps", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.find(",true\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"cf", "--alpha", "bogus"}).code == 2);
  CHECK(run({"rigidity", "--alpha", "golden", "--n-range", "5..2"}).code == 2);
  CHECK(run({"nosuchcommand"}).code == 2);
  const auto p = run({"cf", "--alpha", "dec:3.1415926535897932384626433832795028841971@1/10000000000000000000000000000000000000000", "--terms", "80"});
  CHECK(p.code == 3);
  CHECK(p.err.find("SKEWRIG_PRECISION_BITS") != std::string::npos);
  const auto e = run({"rigidity", "--alpha", "golden", "--n-range", "3..4", "--eps", "-1"});
  CHECK(e.code == 2);
  CHECK(e.err.find("eps") != std::string::npos);
}

TEST_CASE("config file fills missing flags and flags win") {
  const std::string path = "cli_test.cfg";
  {
    std::ofstream out(path);
    out << "# test\nalpha = sqrt2\nterms = 3\n";
  }
  const auto r = run({"cf", "--config", path});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 4);
  CHECK(r.out.find(R"("q_n":12)") != std::string::npos);
  const auto w = run({"cf", "--config", path, "--terms", "5"});
  CHECK(lines(w.out) == 6);
  std::remove(path.c_str());
}

TEST_CASE("output file carries the metadata header") {
  const std::string path = "cli_test_out.csv";
  const auto r = run({"--no-timing", "sums", "--alpha", "golden", "--lemma", "3.2", "--k-range", "3..4",
                      "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  CHECK(text.rfind("# tool: skewrig", 0) == 0);
  CHECK(text.find("# timestamp: ") != std::string::npos);
  CHECK(text.find("3,3,49.59674775249") != std::string::npos);
  std::remove(path.c_str());
}
