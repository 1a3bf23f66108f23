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

#include <string>
#include <vector>

namespace skewrig::verify {

struct Check {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  unsigned precision_bits = 256;
  unsigned threads = 1;
};

/// Invariant suite over every module. Deterministic: no timing, no
/// randomness beyond fixed seeds.
std::vector<Check> run_all(const VerifyOptions& options = {});

/// One line per check, "PASS|FAIL module name detail", then a summary.
std::string format_report(const std::vector<Check>& checks);

bool all_pass(const std::vector<Check>& checks);

/// %.17g.
std::string fmt(double v);

}  // namespace skewrig::verify
