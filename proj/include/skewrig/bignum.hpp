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

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace skewrig {

using BigInt = mpz_class;
using BigRational = mpq_class;

BigInt isqrt(const BigInt& n);
bool is_perfect_square(const BigInt& n);

/// floor(num / den) for any signs, den != 0.
BigInt floor_div(const BigInt& num, const BigInt& den);
BigInt floor(const BigRational& x);
BigInt ceil(const BigRational& x);

/// Natural log of a positive big integer, accurate to double precision.
double log(const BigInt& n);
double to_double(const BigInt& n);
double to_double(const BigRational& x);

/// Exact rational value of a finite double.
BigRational from_double(double x);

/// Parses "123", "-1.25", "3e-40", "1/7" exactly.
BigRational parse_rational(const std::string& text);

/// 2^e as a big integer.
BigInt pow2(unsigned e);

bool fits_int64(const BigInt& n);
std::int64_t to_int64(const BigInt& n);

}  // namespace skewrig
