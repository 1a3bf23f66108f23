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

#include "skewrig/bignum.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "skewrig/errors.hpp"

namespace skewrig {

BigInt isqrt(const BigInt& n) {
  if (sgn(n) < 0) throw InvalidArgument("isqrt", "negative argument");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_perfect_square(const BigInt& n) {
  return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

BigInt floor_div(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw InvalidArgument("floor_div", "division by zero");
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

BigInt floor(const BigRational& x) { return floor_div(x.get_num(), x.get_den()); }

BigInt ceil(const BigRational& x) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

double log(const BigInt& n) {
  if (sgn(n) <= 0) throw InvalidArgument("log", "non-positive argument");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double to_double(const BigInt& n) { return n.get_d(); }

double to_double(const BigRational& x) {
  // mpq_get_d truncates; go through a scaled integer for correct rounding.
  if (sgn(x) == 0) return 0.0;
  const long shift = 64 + static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2)) -
                     static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  BigInt scaled = x.get_num();
  if (shift >= 0) {
    scaled <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    scaled >>= static_cast<mp_bitcnt_t>(-shift);
  }
  scaled /= x.get_den();
  return std::ldexp(scaled.get_d(), static_cast<int>(-shift));
}

BigRational from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("value", "not finite");
  BigRational r(x);  // exact for binary64
  r.canonicalize();
  return r;
}

BigInt pow2(unsigned e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

BigRational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw InvalidArgument("number", "empty");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    BigRational r(parse_rational(s.substr(0, slash)) / parse_rational(s.substr(slash + 1)));
    return r;
  }
  long exponent = 0;
  if (const auto epos = s.find_first_of("eE"); epos != std::string::npos) {
    try {
      exponent = std::stol(s.substr(epos + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("number", "bad exponent in '" + text + "'");
    }
    s = s.substr(0, epos);
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++frac_digits;
    } else {
      throw InvalidArgument("number", "unexpected character in '" + text + "'");
    }
  }
  if (digits.empty()) throw InvalidArgument("number", "no digits in '" + text + "'");
  BigInt mant(digits, 10);
  if (negative) mant = -mant;
  const long scale = exponent - frac_digits;
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  BigRational r = scale >= 0 ? BigRational(mant * ten_pow) : BigRational(mant, ten_pow);
  r.canonicalize();
  return r;
}

bool fits_int64(const BigInt& n) {
  return n >= BigInt(std::to_string(std::numeric_limits<std::int64_t>::min())) &&
         n <= BigInt(std::to_string(std::numeric_limits<std::int64_t>::max()));
}

std::int64_t to_int64(const BigInt& n) {
  if (!fits_int64(n)) throw InvalidArgument("integer", "does not fit in 64 bits: " + n.get_str());
  return std::stoll(n.get_str());
}

}  // namespace skewrig
