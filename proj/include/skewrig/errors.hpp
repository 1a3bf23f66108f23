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

#include <stdexcept>
#include <string>

namespace skewrig {

/// A DecimalApprox (or a finite ExplicitCF prefix) cannot certify the
/// requested quantity. Raising the working precision usually fixes it.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A QuadraticSurd whose radicand is a perfect square (or b == 0).
class NotIrrational : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Dirichlet-type search has no solution under the caller's bounds.
class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: names the offending field in what().
class InvalidArgument : public std::invalid_argument {
 public:
  InvalidArgument(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace skewrig
