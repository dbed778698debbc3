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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "milpeq/bipartite_graph.hpp"

namespace milpeq {

/// Neighborhood aggregation used by a refinement step.
///
/// kPairMultiset (default) keys each node on the sorted multiset of
/// (edge weight, neighbor color) pairs; it is injective by construction,
/// so refinement is collision-free. kWeightedSum follows the literal
/// update rule: each color gets a distinct positive integer label and
/// nodes are keyed on the exact rational sum of weight * label over their
/// neighbors; equal sums of different multisets can collide, which is the
/// assumption that mode inherits.
enum class WlMode { kPairMultiset, kWeightedSum };

/// Node -> color assignment over one or two graphs, refined jointly so
/// ColorIds are directly comparable across the pair. Ids are dense and
/// canonical: within a round, colors are numbered in lexicographic order
/// of their defining signatures (constraint side first), so identical
/// inputs yield identical ids across runs and platforms.
struct Coloring {
  int num_graphs = 1;
  std::array<std::vector<int>, 2> constraint_colors;
  std::array<std::vector<int>, 2> variable_colors;
  int num_colors = 0;
  int rounds = 0;  // refining rounds applied since the initial coloring
};

/// Per-side color multisets of one graph. Equality of two multisets is
/// the necessary condition for isomorphism tested by the equivalence
/// check.
struct ColoringMultiset {
  std::map<int, long> constraint_counts;
  std::map<int, long> variable_counts;

  bool operator==(const ColoringMultiset&) const = default;
  long num_constraints() const;
  long num_variables() const;
};

/// One color class restricted to one side of one graph.
struct IndexClass {
  int color = 0;
  std::vector<int> members;  // ascending

  bool is_type2() const { return members.size() >= 2; }
};

/// The partition induced by a stable coloring on one graph: classes on
/// the variable side and on the constraint side. Within a class all nodes
/// share features, and for any class pair the aggregated coefficients
/// match across members (verified when built).
struct StablePartition {
  std::vector<IndexClass> variable_classes;    // sorted by color
  std::vector<IndexClass> constraint_classes;  // sorted by color
};

/// Runs refinement over one graph or the disjoint union of two.
/// Holds private copies of the structure, so the source graphs need not
/// outlive it.
class WlRefiner {
 public:
  explicit WlRefiner(const BipartiteGraph& g);
  WlRefiner(const BipartiteGraph& g1, const BipartiteGraph& g2);

  /// Round-0 coloring: equal colors iff same side and exactly equal
  /// feature tuples, labeled jointly over both graphs.
  Coloring initial_colors() const;

  /// One simultaneous update of both sides. The result refines the input
  /// partition (never merges classes); a stable input yields the same
  /// partition back.
  Coloring refine_step(const Coloring& coloring, WlMode mode) const;

  /// Iterates refine_step until the partition stops changing. max_rounds
  /// of -1 means the m+n of the larger graph, which can never bind;
  /// passing a smaller explicit limit is a contract violation
  /// (std::invalid_argument).
  Coloring run(WlMode mode = WlMode::kPairMultiset, int max_rounds = -1) const;

  int num_graphs() const { return num_graphs_; }

 private:
  void add_graph(const BipartiteGraph& g);
  void finish_setup();

  struct Node {
    std::vector<std::pair<int, int>> adj;  // (neighbor node id, weight ordinal)
  };
  int num_graphs_ = 0;
  // Node ids: constraint block first (g0 rows then g1 rows), then the
  // variable block; relabeling sweeps constraint signatures before
  // variable signatures so the two sides never share a color.
  std::array<int, 2> m_{0, 0}, n_{0, 0};
  std::vector<Node> nodes_;
  std::vector<Rational> weight_values_;  // ordinal -> value, ascending
  std::vector<int> initial_;             // node id -> round-0 color
  int initial_num_colors_ = 0;

  // setup scratch
  std::vector<ConstraintFeature> cf_;
  std::vector<VariableFeature> vf_;
  std::vector<std::vector<std::vector<std::pair<int, const Rational*>>>>
      raw_adj_;

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int constraint_base(int graph) const { return graph == 0 ? 0 : m_[0]; }
  int variable_base(int graph) const {
    return m_[0] + m_[1] + (graph == 0 ? 0 : n_[0]);
  }
  std::vector<int> flatten(const Coloring& coloring) const;
  Coloring lift(const std::vector<int>& colors, int num_colors,
                int rounds) const;
};

/// Convenience single-shot runs.
Coloring run_wl(const BipartiteGraph& g, WlMode mode = WlMode::kPairMultiset,
                int max_rounds = -1);
Coloring run_wl(const BipartiteGraph& g1, const BipartiteGraph& g2,
                WlMode mode = WlMode::kPairMultiset, int max_rounds = -1);

ColoringMultiset coloring_multisets(const Coloring& coloring, int graph_index);

/// Builds the induced partition of one graph and verifies the
/// equitable-partition conditions (equal features within classes, equal
/// cross-class coefficient sums) with exact arithmetic. A violation means
/// a refinement bug and throws InternalError.
StablePartition stable_partition(const BipartiteGraph& g,
                                 const Coloring& coloring, int graph_index);

/// True iff every class on both sides is a singleton (all nodes uniquely
/// colored).
bool is_unfoldable(const StablePartition& partition);

/// Deterministic debug dump: "side index color" lines, sorted, constraint
/// side first.
std::string dump_colors(const Coloring& coloring, int graph_index);

}  // namespace milpeq
