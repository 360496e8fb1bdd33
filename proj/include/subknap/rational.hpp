// Copyright 2026 The Authors.
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

#ifndef SUBKNAP_RATIONAL_HPP
#define SUBKNAP_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "subknap/errors.hpp"

namespace subknap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Accepts "p/q", plain (signed) integers, and plain decimals ("0.25").
inline Rational parse_rational(const std::string& text) {
  auto bad = [&] { throw ParseError("invalid rational literal: '" + text + "'"); };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt p(text.substr(0, slash));
      BigInt q(text.substr(slash + 1));
      if (q == 0) bad();
      return Rational(p, q);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto frac_len = text.size() - dot - 1;
    if (frac_len == 0 || digits.empty()) bad();
    BigInt denom = 1;
    for (std::size_t k = 0; k < frac_len; ++k) denom *= 10;
    return Rational(BigInt(digits), denom);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rational();  // unreachable
}

inline std::string format_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace subknap

#endif  // SUBKNAP_RATIONAL_HPP
