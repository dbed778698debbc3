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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "milpeq/instance.hpp"

namespace milpeq {

enum class Severity { kError, kWarning };

/// A reader message anchored to a 1-based source location.
struct ParseDiagnostic {
  int line = 0;
  int column = 0;
  Severity severity = Severity::kError;
  std::string message;
};

/// Result of parse_lp. `instance` is present iff no error-severity
/// diagnostic was produced; warnings may accompany a successful parse.
struct LpDocument {
  std::optional<Instance> instance;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return instance.has_value(); }
};

// Reader for the LP text dialect used throughout this project:
//
//   document   := objective "subject to" row* [bounds] [kinds...] "end"
//   objective  := ("minimize"|"maximize") [name ":"] linexpr
//   row        := [name ":"] linexpr rel linexpr
//   rel        := "<=" | ">=" | "=" | "<" | ">"
//   linexpr    := [sign] term (sign term)* | constant | (empty, objective only)
//   term       := [coeff] var | constant
//   bounds     := "bounds" ( var "free" | val rel var rel val
//                          | var rel val | val rel var )*
//   kinds      := ("general"|"integers"|"binary") var+
//
// Keywords are case-insensitive and reserved. Comments run from '\' to end
// of line. Input must be ASCII. Numeric literals are integers, decimals,
// scientific notation or "p/q" fractions, all converted exactly.
//
// Constraints are normalized to variables-left / constant-right form with
// exact arithmetic; duplicate variable terms combine, and terms whose
// combined coefficient is zero are dropped with a warning. Bounds become
// ordinary rows (one per finite bound); a variable without a bounds entry
// gets the conventional implicit row x >= 0 unless declared "free" or
// binary; "binary" marks the variable integer and adds rows x >= 0 and
// x <= 1. Strict '<'/'>' are preserved as distinct senses.
LpDocument parse_lp(std::string_view text);

/// Emits a document that parse_lp maps back to an instances_identical
/// instance: rows in order (bound rows are ordinary rows by now), every
/// variable declared free in Bounds, integer variables listed under
/// General. Rationals with power-of-ten denominators print as decimals,
/// others as "p/q". Throws std::invalid_argument when the instance fails
/// validate_instance.
std::string write_lp(const Instance& inst);

}  // namespace milpeq
