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

#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace milpeq {

/// Exact rational scalar. All coefficients, right-hand sides and edge
/// weights in this library are rationals in lowest terms with positive
/// denominator; GMP keeps that canonical form for us as long as values are
/// built through make_rational()/parse_rational() or mpq arithmetic.
using Rational = mpq_class;
using Integer = mpz_class;

/// Builds num/den in canonical form. Throws std::invalid_argument when
/// den == 0.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses an integer ("3"), decimal ("0.125"), scientific ("2.5e-2") or
/// fraction ("-7/2") literal into an exact rational. Returns nullopt on
/// malformed input.
std::optional<Rational> try_parse_rational(std::string_view token);

/// Like try_parse_rational but throws std::invalid_argument on malformed
/// input.
Rational parse_rational(std::string_view token);

/// Canonical text form: integers print bare, rationals whose reduced
/// denominator is a power of ten print as decimals ("0.1"), everything
/// else prints as "p/q". parse_rational() accepts every emitted form.
std::string format_rational(const Rational& value);

/// True iff value is 10^k for some k >= 0.
bool is_power_of_ten(const Integer& value);

}  // namespace milpeq
