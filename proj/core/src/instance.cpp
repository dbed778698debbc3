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

#include "milpeq/instance.hpp"

#include <algorithm>
#include <numeric>

#include "milpeq/rng.hpp"

namespace milpeq {

const char* to_string(Sense sense) {
  switch (sense) {
    case Sense::kEq: return "=";
    case Sense::kLt: return "<";
    case Sense::kGt: return ">";
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
  }
  return "?";
}

const char* to_string(VarKind kind) {
  return kind == VarKind::kContinuous ? "continuous" : "integer";
}

const char* to_string(ObjectiveSense sense) {
  return sense == ObjectiveSense::kMinimize ? "minimize" : "maximize";
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  const int n = inst.num_vars;
  if (n < 0) out.push_back({"negative variable count"});
  if (static_cast<int>(inst.objective.size()) != n)
    out.push_back({"objective length does not match variable count"});
  if (static_cast<int>(inst.var_kinds.size()) != n)
    out.push_back({"variable kind vector length does not match variable count"});
  if (!inst.var_names.empty() && static_cast<int>(inst.var_names.size()) != n)
    out.push_back({"variable name vector has wrong length"});
  if (!inst.row_names.empty() &&
      inst.row_names.size() != inst.rows.size())
    out.push_back({"row name vector has wrong length"});

  for (int i = 0; i < inst.num_constraints(); ++i) {
    const ConstraintRow& row = inst.rows[i];
    if (row.coeffs.empty()) {
      out.push_back({"empty row", i});
      continue;
    }
    int prev = -1;
    for (const auto& [j, value] : row.coeffs) {
      if (j < 0 || j >= n) {
        out.push_back({"out-of-range variable reference", i, j});
      } else if (j <= prev) {
        out.push_back({j == prev ? "duplicate variable in row"
                                 : "row coefficients not sorted by index",
                       i, j});
      }
      if (value == 0) out.push_back({"stored zero coefficient", i, j});
      prev = j;
    }
  }
  return out;
}

bool Permutation::is_valid() const {
  std::vector<bool> seen(map.size(), false);
  for (int v : map) {
    if (v < 0 || v >= size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.map.resize(map.size());
  for (int i = 0; i < size(); ++i) inv.map[map[i]] = i;
  return inv;
}

Permutation Permutation::identity(int k) {
  Permutation p;
  p.map.resize(k);
  std::iota(p.map.begin(), p.map.end(), 0);
  return p;
}

Permutation random_permutation(int k, std::uint64_t seed) {
  if (k < 0) throw std::invalid_argument("negative permutation size");
  Permutation p = Permutation::identity(k);
  Rng rng(seed);
  for (int i = k - 1; i > 0; --i) {
    int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(p.map[i], p.map[j]);
  }
  return p;
}

Instance apply_permutation(const Instance& inst, const Permutation& p_vars,
                           const Permutation& p_rows) {
  if (p_vars.size() != inst.num_vars)
    throw std::invalid_argument("variable permutation size mismatch");
  if (p_rows.size() != inst.num_constraints())
    throw std::invalid_argument("row permutation size mismatch");

  Instance out;
  out.objective_sense = inst.objective_sense;
  out.num_vars = inst.num_vars;
  out.objective.resize(inst.num_vars);
  out.var_kinds.resize(inst.num_vars);
  for (int j = 0; j < inst.num_vars; ++j) {
    out.objective[p_vars.map[j]] = inst.objective[j];
    out.var_kinds[p_vars.map[j]] = inst.var_kinds[j];
  }
  if (!inst.var_names.empty()) {
    out.var_names.resize(inst.num_vars);
    for (int j = 0; j < inst.num_vars; ++j)
      out.var_names[p_vars.map[j]] = inst.var_names[j];
  }

  out.rows.resize(inst.rows.size());
  for (int i = 0; i < inst.num_constraints(); ++i) {
    ConstraintRow row;
    row.sense = inst.rows[i].sense;
    row.rhs = inst.rows[i].rhs;
    row.coeffs.reserve(inst.rows[i].coeffs.size());
    for (const auto& [j, value] : inst.rows[i].coeffs)
      row.coeffs.emplace_back(p_vars.map[j], value);
    std::sort(row.coeffs.begin(), row.coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rows[p_rows.map[i]] = std::move(row);
  }
  if (!inst.row_names.empty()) {
    out.row_names.resize(inst.rows.size());
    for (int i = 0; i < inst.num_constraints(); ++i)
      out.row_names[p_rows.map[i]] = inst.row_names[i];
  }
  return out;
}

bool instances_identical(const Instance& a, const Instance& b) {
  return a.objective_sense == b.objective_sense && a.num_vars == b.num_vars &&
         a.rows.size() == b.rows.size() && a.objective == b.objective &&
         a.var_kinds == b.var_kinds && a.rows == b.rows;
}

}  // namespace milpeq
