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

#include "milpeq/wl.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace milpeq {

long ColoringMultiset::num_constraints() const {
  long total = 0;
  for (const auto& [color, count] : constraint_counts) total += count;
  return total;
}

long ColoringMultiset::num_variables() const {
  long total = 0;
  for (const auto& [color, count] : variable_counts) total += count;
  return total;
}

WlRefiner::WlRefiner(const BipartiteGraph& g) {
  add_graph(g);
  finish_setup();
}

WlRefiner::WlRefiner(const BipartiteGraph& g1, const BipartiteGraph& g2) {
  add_graph(g1);
  add_graph(g2);
  finish_setup();
}

void WlRefiner::add_graph(const BipartiteGraph& g) {
  const int k = num_graphs_++;
  m_[k] = g.num_constraints();
  n_[k] = g.num_variables();
  cf_.insert(cf_.end(), g.constraint_features.begin(),
             g.constraint_features.end());
  vf_.insert(vf_.end(), g.variable_features.begin(),
             g.variable_features.end());
  raw_adj_.push_back({});  // one slot per graph, filled with weight pointers
  auto& rows = raw_adj_.back();
  rows.resize(g.num_constraints());
  for (int i = 0; i < g.num_constraints(); ++i)
    for (const auto& [j, weight] : g.constraint_adj[i])
      rows[i].emplace_back(j, &weight);
}

void WlRefiner::finish_setup() {
  const int total = m_[0] + m_[1] + n_[0] + n_[1];
  nodes_.resize(total);

  // Weight values are interned jointly; the ordinal order is the value
  // order, which keeps signatures canonical.
  std::map<Rational, int> weight_ids;
  for (const auto& rows : raw_adj_)
    for (const auto& row : rows)
      for (const auto& [j, w] : row) weight_ids.emplace(*w, 0);
  weight_values_.reserve(weight_ids.size());
  for (auto& [value, id] : weight_ids) {
    id = static_cast<int>(weight_values_.size());
    weight_values_.push_back(value);
  }

  for (int k = 0; k < num_graphs_; ++k) {
    for (int i = 0; i < m_[k]; ++i) {
      const int u = constraint_base(k) + i;
      for (const auto& [j, w] : raw_adj_[k][i]) {
        const int v = variable_base(k) + j;
        const int word = weight_ids[*w];
        nodes_[u].adj.emplace_back(v, word);
        nodes_[v].adj.emplace_back(u, word);
      }
    }
  }

  // Round-0 colors: one per distinct feature tuple, numbered in the
  // lexicographic order of the tuples, constraint side first.
  initial_.assign(total, 0);
  std::map<std::pair<Rational, int>, int> con_feat, var_feat;
  for (const ConstraintFeature& f : cf_)
    con_feat.emplace(std::make_pair(f.rhs, static_cast<int>(f.sense)), 0);
  int next_color = 0;
  for (auto& [key, id] : con_feat) id = next_color++;
  for (const VariableFeature& f : vf_)
    var_feat.emplace(std::make_pair(f.obj_coeff, static_cast<int>(f.kind)), 0);
  for (auto& [key, id] : var_feat) id = next_color++;
  initial_num_colors_ = next_color;

  int offset = 0;
  for (int k = 0; k < num_graphs_; ++k)
    for (int i = 0; i < m_[k]; ++i, ++offset) {
      const ConstraintFeature& f = cf_[offset];
      initial_[constraint_base(k) + i] =
          con_feat[{f.rhs, static_cast<int>(f.sense)}];
    }
  offset = 0;
  for (int k = 0; k < num_graphs_; ++k)
    for (int j = 0; j < n_[k]; ++j, ++offset) {
      const VariableFeature& f = vf_[offset];
      initial_[variable_base(k) + j] =
          var_feat[{f.obj_coeff, static_cast<int>(f.kind)}];
    }

  raw_adj_.clear();
  cf_.clear();
  vf_.clear();
}

std::vector<int> WlRefiner::flatten(const Coloring& coloring) const {
  if (coloring.num_graphs != num_graphs_)
    throw std::invalid_argument("coloring does not match this refiner");
  std::vector<int> colors(node_count());
  for (int k = 0; k < num_graphs_; ++k) {
    if (static_cast<int>(coloring.constraint_colors[k].size()) != m_[k] ||
        static_cast<int>(coloring.variable_colors[k].size()) != n_[k])
      throw std::invalid_argument("coloring does not cover all nodes");
    for (int i = 0; i < m_[k]; ++i)
      colors[constraint_base(k) + i] = coloring.constraint_colors[k][i];
    for (int j = 0; j < n_[k]; ++j)
      colors[variable_base(k) + j] = coloring.variable_colors[k][j];
  }
  return colors;
}

Coloring WlRefiner::lift(const std::vector<int>& colors, int num_colors,
                         int rounds) const {
  Coloring out;
  out.num_graphs = num_graphs_;
  out.num_colors = num_colors;
  out.rounds = rounds;
  for (int k = 0; k < num_graphs_; ++k) {
    out.constraint_colors[k].resize(m_[k]);
    out.variable_colors[k].resize(n_[k]);
    for (int i = 0; i < m_[k]; ++i)
      out.constraint_colors[k][i] = colors[constraint_base(k) + i];
    for (int j = 0; j < n_[k]; ++j)
      out.variable_colors[k][j] = colors[variable_base(k) + j];
  }
  return out;
}

Coloring WlRefiner::initial_colors() const {
  return lift(initial_, initial_num_colors_, 0);
}

namespace {

// Dense relabeling in lexicographic signature order over [begin, end);
// ids start at next_id. Returns the id past the last one assigned.
template <typename Signature>
int relabel_block(const std::vector<Signature>& sigs, int begin, int end,
                  int next_id, std::vector<int>& out) {
  std::vector<int> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return sigs[a] < sigs[b]; });
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    if (idx > 0 && sigs[order[idx]] != sigs[order[idx - 1]]) ++next_id;
    out[order[idx]] = next_id;
  }
  return order.empty() ? next_id : next_id + 1;
}

}  // namespace

Coloring WlRefiner::refine_step(const Coloring& coloring, WlMode mode) const {
  const std::vector<int> cur = flatten(coloring);
  const int total = node_count();
  const int cons_total = m_[0] + m_[1];
  std::vector<int> next(total, 0);
  int num_colors = 0;

  if (mode == WlMode::kPairMultiset) {
    using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Sig> sigs(total);
    for (int u = 0; u < total; ++u) {
      sigs[u].first = cur[u];
      auto& pairs = sigs[u].second;
      pairs.reserve(nodes_[u].adj.size());
      for (const auto& [v, word] : nodes_[u].adj)
        pairs.emplace_back(word, cur[v]);
      std::sort(pairs.begin(), pairs.end());
    }
    num_colors = relabel_block(sigs, 0, cons_total, 0, next);
    num_colors = relabel_block(sigs, cons_total, total, num_colors, next);
  } else {
    // Literal update rule: exact rational sum of edge weight times a
    // distinct positive integer label per neighbor color.
    using Sig = std::pair<int, Rational>;
    std::vector<Sig> sigs(total);
    for (int u = 0; u < total; ++u) {
      sigs[u].first = cur[u];
      Rational sum = 0;
      for (const auto& [v, word] : nodes_[u].adj)
        sum += weight_values_[word] * Rational(cur[v] + 1);
      sigs[u].second = std::move(sum);
    }
    num_colors = relabel_block(sigs, 0, cons_total, 0, next);
    num_colors = relabel_block(sigs, cons_total, total, num_colors, next);
  }

  if (num_colors < coloring.num_colors)
    throw InternalError("refinement merged color classes");
  return lift(next, num_colors, coloring.rounds + 1);
}

Coloring WlRefiner::run(WlMode mode, int max_rounds) const {
  const int larger = std::max(m_[0] + n_[0], m_[1] + n_[1]);
  if (max_rounds < 0) max_rounds = larger;
  if (max_rounds < larger)
    throw std::invalid_argument("max_rounds below the m+n stabilization bound");

  Coloring current = initial_colors();
  for (int round = 0; round <= max_rounds; ++round) {
    Coloring refined = refine_step(current, mode);
    if (refined.num_colors == current.num_colors) {
      // Equal class counts under refinement means the partition is stable.
      return current;
    }
    current = std::move(refined);
  }
  throw InternalError("refinement did not stabilize within the m+n bound");
}

Coloring run_wl(const BipartiteGraph& g, WlMode mode, int max_rounds) {
  return WlRefiner(g).run(mode, max_rounds);
}

Coloring run_wl(const BipartiteGraph& g1, const BipartiteGraph& g2, WlMode mode,
                int max_rounds) {
  return WlRefiner(g1, g2).run(mode, max_rounds);
}

ColoringMultiset coloring_multisets(const Coloring& coloring, int graph_index) {
  if (graph_index < 0 || graph_index >= coloring.num_graphs)
    throw std::invalid_argument("graph index out of range");
  ColoringMultiset out;
  for (int color : coloring.constraint_colors[graph_index])
    ++out.constraint_counts[color];
  for (int color : coloring.variable_colors[graph_index])
    ++out.variable_counts[color];
  return out;
}

namespace {

std::vector<IndexClass> classes_of(const std::vector<int>& colors) {
  std::map<int, std::vector<int>> by_color;
  for (std::size_t i = 0; i < colors.size(); ++i)
    by_color[colors[i]].push_back(static_cast<int>(i));
  std::vector<IndexClass> out;
  out.reserve(by_color.size());
  for (auto& [color, members] : by_color)
    out.push_back({color, std::move(members)});
  return out;
}

}  // namespace

StablePartition stable_partition(const BipartiteGraph& g,
                                 const Coloring& coloring, int graph_index) {
  if (graph_index < 0 || graph_index >= coloring.num_graphs)
    throw std::invalid_argument("graph index out of range");
  const auto& con_colors = coloring.constraint_colors[graph_index];
  const auto& var_colors = coloring.variable_colors[graph_index];
  if (static_cast<int>(con_colors.size()) != g.num_constraints() ||
      static_cast<int>(var_colors.size()) != g.num_variables())
    throw std::invalid_argument("coloring does not match the graph");

  StablePartition partition;
  partition.constraint_classes = classes_of(con_colors);
  partition.variable_classes = classes_of(var_colors);

  // Internal consistency: a stable refinement coloring must induce an
  // equitable partition. Violations indicate a refinement bug.
  for (const IndexClass& cls : partition.constraint_classes) {
    const ConstraintFeature& first = g.constraint_features[cls.members[0]];
    for (int i : cls.members)
      if (!(g.constraint_features[i] == first))
        throw InternalError("constraint class with unequal features");
  }
  for (const IndexClass& cls : partition.variable_classes) {
    const VariableFeature& first = g.variable_features[cls.members[0]];
    for (int j : cls.members)
      if (!(g.variable_features[j] == first))
        throw InternalError("variable class with unequal features");
  }
  auto class_sums = [](const auto& adj, const std::vector<int>& other_colors,
                       int node) {
    std::map<int, Rational> sums;
    for (const auto& [other, weight] : adj[node])
      sums[other_colors[other]] += weight;
    return sums;
  };
  for (const IndexClass& cls : partition.constraint_classes) {
    auto first = class_sums(g.constraint_adj, var_colors, cls.members[0]);
    for (int i : cls.members)
      if (class_sums(g.constraint_adj, var_colors, i) != first)
        throw InternalError(
            "constraint class with unequal aggregated coefficients");
  }
  for (const IndexClass& cls : partition.variable_classes) {
    auto first = class_sums(g.variable_adj, con_colors, cls.members[0]);
    for (int j : cls.members)
      if (class_sums(g.variable_adj, con_colors, j) != first)
        throw InternalError(
            "variable class with unequal aggregated coefficients");
  }
  return partition;
}

bool is_unfoldable(const StablePartition& partition) {
  auto singleton = [](const IndexClass& cls) { return cls.members.size() == 1; };
  return std::all_of(partition.variable_classes.begin(),
                     partition.variable_classes.end(), singleton) &&
         std::all_of(partition.constraint_classes.begin(),
                     partition.constraint_classes.end(), singleton);
}

std::string dump_colors(const Coloring& coloring, int graph_index) {
  if (graph_index < 0 || graph_index >= coloring.num_graphs)
    throw std::invalid_argument("graph index out of range");
  std::ostringstream os;
  const auto& cons = coloring.constraint_colors[graph_index];
  const auto& vars = coloring.variable_colors[graph_index];
  for (std::size_t i = 0; i < cons.size(); ++i)
    os << "c " << i << " " << cons[i] << "\n";
  for (std::size_t j = 0; j < vars.size(); ++j)
    os << "v " << j << " " << vars[j] << "\n";
  return os.str();
}

}  // namespace milpeq
