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

#include "milpeq/bipartite_graph.hpp"

#include <algorithm>
#include <sstream>

namespace milpeq {

std::size_t BipartiteGraph::num_edges() const {
  std::size_t count = 0;
  for (const auto& adj : constraint_adj) count += adj.size();
  return count;
}

BipartiteGraph encode(const Instance& inst) {
  auto violations = validate_instance(inst);
  if (!violations.empty())
    throw std::invalid_argument("cannot encode invalid instance: " +
                                violations.front().message);

  BipartiteGraph g;
  g.objective_sense = inst.objective_sense;
  g.constraint_features.reserve(inst.rows.size());
  for (const ConstraintRow& row : inst.rows)
    g.constraint_features.push_back({row.rhs, row.sense});
  g.variable_features.reserve(inst.num_vars);
  for (int j = 0; j < inst.num_vars; ++j)
    g.variable_features.push_back({inst.objective[j], inst.var_kinds[j]});

  g.constraint_adj.resize(inst.rows.size());
  g.variable_adj.resize(inst.num_vars);
  for (int i = 0; i < inst.num_constraints(); ++i) {
    g.constraint_adj[i] = inst.rows[i].coeffs;  // already sorted by index
    for (const auto& [j, weight] : inst.rows[i].coeffs)
      g.variable_adj[j].emplace_back(i, weight);
  }
  // row-major fill keeps variable_adj sorted by constraint index already
  return g;
}

Instance decode(const BipartiteGraph& g) {
  const int m = g.num_constraints();
  const int n = g.num_variables();
  if (static_cast<int>(g.constraint_adj.size()) != m ||
      static_cast<int>(g.variable_adj.size()) != n)
    throw std::invalid_argument("adjacency size does not match feature count");

  Instance inst;
  inst.objective_sense = g.objective_sense;
  inst.num_vars = n;
  inst.objective.reserve(n);
  inst.var_kinds.reserve(n);
  for (const VariableFeature& f : g.variable_features) {
    inst.objective.push_back(f.obj_coeff);
    inst.var_kinds.push_back(f.kind);
  }

  inst.rows.reserve(m);
  for (int i = 0; i < m; ++i) {
    ConstraintRow row;
    row.rhs = g.constraint_features[i].rhs;
    row.sense = g.constraint_features[i].sense;
    row.coeffs = g.constraint_adj[i];
    std::sort(row.coeffs.begin(), row.coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int prev = -1;
    for (const auto& [j, weight] : row.coeffs) {
      if (j < 0 || j >= n)
        throw std::invalid_argument("edge references a variable out of range");
      if (j == prev)
        throw std::invalid_argument("duplicate edge in constraint row");
      if (weight == 0) throw std::invalid_argument("zero-weight edge");
      prev = j;
    }
    if (row.coeffs.empty())
      throw std::invalid_argument("constraint node without edges");
    inst.rows.push_back(std::move(row));
  }

  std::vector<std::vector<std::pair<int, Rational>>> mirror(n);
  for (int i = 0; i < m; ++i)
    for (const auto& [j, weight] : inst.rows[i].coeffs)
      mirror[j].emplace_back(i, weight);
  for (int j = 0; j < n; ++j) {
    auto given = g.variable_adj[j];
    std::sort(given.begin(), given.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (given != mirror[j])
      throw std::invalid_argument("adjacency mirrors disagree");
  }
  return inst;
}

std::string dump_edges(const BipartiteGraph& g) {
  std::ostringstream os;
  for (int i = 0; i < g.num_constraints(); ++i) {
    auto edges = g.constraint_adj[i];
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [j, weight] : edges)
      os << i << " " << j << " " << format_rational(weight) << "\n";
  }
  return os.str();
}

}  // namespace milpeq
