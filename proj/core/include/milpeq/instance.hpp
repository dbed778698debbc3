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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "milpeq/rational.hpp"

namespace milpeq {

/// Thrown when an internal consistency check fails (a bug, not bad input).
/// The CLI maps it to its own exit code.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Constraint relation. Strict relations are kept distinct from their
/// non-strict counterparts; merging them would identify structurally
/// different models.
enum class Sense { kEq, kLt, kGt, kLe, kGe };

enum class VarKind { kContinuous, kInteger };

enum class ObjectiveSense { kMinimize, kMaximize };

const char* to_string(Sense sense);
const char* to_string(VarKind kind);
const char* to_string(ObjectiveSense sense);

/// One constraint: sparse coefficients, relation, right-hand side.
/// Coefficients are sorted by variable index, indices are unique and every
/// stored value is nonzero (absence means zero).
struct ConstraintRow {
  std::vector<std::pair<int, Rational>> coeffs;
  Sense sense = Sense::kLe;
  Rational rhs = 0;

  bool operator==(const ConstraintRow& other) const = default;
};

/// An LP/MILP in standard form: optimize c'x subject to Ax (sense) b, with
/// per-variable integrality marks. Variable bounds are ordinary rows here;
/// the LP reader materializes them at parse time so that bounds take part
/// in permutations and refinement like any other constraint.
///
/// Names are display metadata only: structural operations ignore them.
/// Immutable by convention once built; all operations below are pure.
struct Instance {
  ObjectiveSense objective_sense = ObjectiveSense::kMinimize;
  int num_vars = 0;
  std::vector<Rational> objective;    // dense, size num_vars
  std::vector<VarKind> var_kinds;     // size num_vars
  std::vector<ConstraintRow> rows;
  std::vector<std::string> var_names;  // empty or size num_vars
  std::vector<std::string> row_names;  // empty or size rows.size()

  int num_constraints() const { return static_cast<int>(rows.size()); }
};

/// One invariant violation found by validate_instance. row/var are -1 when
/// not applicable.
struct Violation {
  std::string message;
  int row = -1;
  int var = -1;
};

/// Returns an empty list iff all Instance invariants hold. Violations are
/// data, not faults.
std::vector<Violation> validate_instance(const Instance& inst);

/// A bijection on {0..k-1}; map[i] is the new position of element i.
struct Permutation {
  std::vector<int> map;

  int size() const { return static_cast<int>(map.size()); }
  bool is_valid() const;
  Permutation inverse() const;
  static Permutation identity(int k);
};

/// Uniformly random permutation of {0..k-1}, deterministic for fixed seed.
Permutation random_permutation(int k, std::uint64_t seed);

/// Applies a variable and a row permutation: objective and kinds move with
/// p_vars, rows (with senses and rhs) move with p_rows, and column indices
/// inside each row are remapped by p_vars. The objective sense is
/// unchanged. Throws std::invalid_argument on dimension mismatch.
Instance apply_permutation(const Instance& inst, const Permutation& p_vars,
                           const Permutation& p_rows);

/// Exact structural equality: dimensions, objective sense, objective,
/// kinds and every (coeffs, sense, rhs) row, under exact rational
/// comparison. Names are ignored.
bool instances_identical(const Instance& a, const Instance& b);

}  // namespace milpeq
