// Copyright 2026 The milpeq authors
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

#include "milpeq/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace milpeq {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational value(num, den);
  value.canonicalize();
  return value;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer pow10(unsigned long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, k);
  return p;
}

// digits[.digits][ (e|E) [sign] digits ]
std::optional<Rational> parse_decimal(std::string_view body, bool negative) {
  std::string_view mantissa = body;
  long exponent = 0;
  std::size_t epos = body.find_first_of("eE");
  if (epos != std::string_view::npos) {
    mantissa = body.substr(0, epos);
    std::string_view exp = body.substr(epos + 1);
    bool exp_neg = false;
    if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
      exp_neg = exp[0] == '-';
      exp.remove_prefix(1);
    }
    if (!all_digits(exp) || exp.size() > 6) return std::nullopt;
    exponent = std::strtol(std::string(exp).c_str(), nullptr, 10);
    if (exp_neg) exponent = -exponent;
  }

  std::string digits;
  long frac_digits = 0;
  std::size_t dot = mantissa.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(mantissa)) return std::nullopt;
    digits = std::string(mantissa);
  } else {
    std::string_view intpart = mantissa.substr(0, dot);
    std::string_view fracpart = mantissa.substr(dot + 1);
    if (intpart.empty() && fracpart.empty()) return std::nullopt;
    if (!intpart.empty() && !all_digits(intpart)) return std::nullopt;
    if (!fracpart.empty() && !all_digits(fracpart)) return std::nullopt;
    digits = std::string(intpart) + std::string(fracpart);
    if (digits.empty()) return std::nullopt;
    frac_digits = static_cast<long>(fracpart.size());
  }

  Integer m(digits, 10);
  long shift = exponent - frac_digits;
  Integer num, den;
  if (shift >= 0) {
    num = m * pow10(static_cast<unsigned long>(shift));
    den = 1;
  } else {
    num = m;
    den = pow10(static_cast<unsigned long>(-shift));
  }
  if (negative) num = -num;
  return make_rational(num, den);
}

}  // namespace

std::optional<Rational> try_parse_rational(std::string_view token) {
  if (token.empty()) return std::nullopt;
  bool negative = false;
  if (token[0] == '+' || token[0] == '-') {
    negative = token[0] == '-';
    token.remove_prefix(1);
    if (token.empty()) return std::nullopt;
  }

  std::size_t slash = token.find('/');
  if (slash != std::string_view::npos) {
    std::string_view p = token.substr(0, slash);
    std::string_view q = token.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) return std::nullopt;
    Integer num(std::string(p), 10);
    Integer den(std::string(q), 10);
    if (den == 0) return std::nullopt;
    if (negative) num = -num;
    return make_rational(num, den);
  }
  return parse_decimal(token, negative);
}

Rational parse_rational(std::string_view token) {
  auto value = try_parse_rational(token);
  if (!value) {
    throw std::invalid_argument("malformed rational literal: '" +
                                std::string(token) + "'");
  }
  return *value;
}

bool is_power_of_ten(const Integer& value) {
  if (value <= 0) return false;
  Integer v = value;
  while (v > 1) {
    if (!mpz_divisible_ui_p(v.get_mpz_t(), 10)) return false;
    mpz_tdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), 10);
  }
  return true;
}

std::string format_rational(const Rational& value) {
  const Integer& num = value.get_num();
  const Integer& den = value.get_den();
  if (den == 1) return num.get_str();
  if (is_power_of_ten(den)) {
    std::string digits = Integer(abs(num)).get_str();
    std::size_t k = den.get_str().size() - 1;  // den == 10^k
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    if (num < 0) digits.insert(0, "-");
    return digits;
  }
  return num.get_str() + "/" + den.get_str();
}

}  // namespace milpeq
