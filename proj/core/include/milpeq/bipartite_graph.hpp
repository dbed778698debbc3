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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "milpeq/instance.hpp"

namespace milpeq {

/// Constraint-node feature: right-hand side and relation. Compared by
/// exact value, never by textual form.
struct ConstraintFeature {
  Rational rhs;
  Sense sense = Sense::kLe;

  bool operator==(const ConstraintFeature&) const = default;
};

/// Variable-node feature: objective coefficient and integrality kind.
struct VariableFeature {
  Rational obj_coeff;
  VarKind kind = VarKind::kContinuous;

  bool operator==(const VariableFeature&) const = default;
};

/// Weighted bipartite encoding of an instance: one constraint node per
/// row, one variable node per variable, one edge per nonzero coefficient.
/// Adjacency is stored in both directions because refinement sweeps both
/// sides each round. The objective sense travels as a global attribute; it
/// is not a node feature but must match between instances for equivalence.
struct BipartiteGraph {
  ObjectiveSense objective_sense = ObjectiveSense::kMinimize;
  std::vector<ConstraintFeature> constraint_features;  // size m
  std::vector<VariableFeature> variable_features;      // size n
  // constraint_adj[i] = (variable j, weight), sorted by j; weight != 0.
  std::vector<std::vector<std::pair<int, Rational>>> constraint_adj;
  // variable_adj[j] = (constraint i, weight), sorted by i.
  std::vector<std::vector<std::pair<int, Rational>>> variable_adj;

  int num_constraints() const {
    return static_cast<int>(constraint_features.size());
  }
  int num_variables() const {
    return static_cast<int>(variable_features.size());
  }
  std::size_t num_edges() const;
};

/// Throws std::invalid_argument when the instance fails validation.
BipartiteGraph encode(const Instance& inst);

/// Inverse of encode up to edge order; names are not recoverable. Throws
/// std::invalid_argument on a malformed graph (zero weights, duplicate or
/// out-of-range edges, mismatched adjacency mirrors).
Instance decode(const BipartiteGraph& g);

/// Deterministic debug dump: one "i j weight" line per edge, sorted.
std::string dump_edges(const BipartiteGraph& g);

}  // namespace milpeq
