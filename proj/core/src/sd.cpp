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

#include "milpeq/sd.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "milpeq/rng.hpp"

namespace milpeq {

std::string NodeRef::to_string() const {
  return (side == Side::kConstraint ? "c" : "v") + std::to_string(index);
}

const char* to_string(SdFailure failure) {
  switch (failure) {
    case SdFailure::kUnequalClassSizes: return "unequal-class-sizes";
    case SdFailure::kRepeatedColorInCluster: return "repeated-color-in-cluster";
    case SdFailure::kClustersOverlap: return "clusters-overlap";
    case SdFailure::kClustersConnected: return "clusters-connected";
  }
  return "?";
}

namespace {

struct Type2Class {
  int color = 0;
  std::vector<NodeRef> members;  // ascending node order
};

int color_of(const Coloring& coloring, int graph_index, NodeRef node) {
  return node.side == NodeRef::Side::kConstraint
             ? coloring.constraint_colors[graph_index][node.index]
             : coloring.variable_colors[graph_index][node.index];
}

template <typename Fn>
void for_each_neighbor(const BipartiteGraph& g, NodeRef node, Fn&& fn) {
  if (node.side == NodeRef::Side::kConstraint) {
    for (const auto& [j, w] : g.constraint_adj[node.index])
      fn(NodeRef{NodeRef::Side::kVariable, j});
  } else {
    for (const auto& [i, w] : g.variable_adj[node.index])
      fn(NodeRef{NodeRef::Side::kConstraint, i});
  }
}

// node -> small dense id for flag arrays: constraints first.
int flat_id(const BipartiteGraph& g, NodeRef node) {
  return node.side == NodeRef::Side::kConstraint
             ? node.index
             : g.num_constraints() + node.index;
}

}  // namespace

SdReport detect_symmetric_decomposable(const BipartiteGraph& g,
                                       const Coloring& coloring,
                                       int graph_index,
                                       const StablePartition& partition,
                                       const SdOptions& options) {
  if (graph_index < 0 || graph_index >= coloring.num_graphs)
    throw std::invalid_argument("graph index out of range");
  if (static_cast<int>(coloring.constraint_colors[graph_index].size()) !=
          g.num_constraints() ||
      static_cast<int>(coloring.variable_colors[graph_index].size()) !=
          g.num_variables())
    throw std::invalid_argument("coloring does not match the graph");

  // The partition must be the one induced by the coloring.
  {
    std::size_t class_nodes = 0;
    for (const IndexClass& cls : partition.constraint_classes) {
      class_nodes += cls.members.size();
      for (int i : cls.members)
        if (coloring.constraint_colors[graph_index][i] != cls.color)
          throw std::invalid_argument("partition does not match coloring");
    }
    for (const IndexClass& cls : partition.variable_classes) {
      class_nodes += cls.members.size();
      for (int j : cls.members)
        if (coloring.variable_colors[graph_index][j] != cls.color)
          throw std::invalid_argument("partition does not match coloring");
    }
    if (class_nodes != static_cast<std::size_t>(g.num_constraints()) +
                           static_cast<std::size_t>(g.num_variables()))
      throw std::invalid_argument("partition does not cover the graph");
  }

  SdReport report;

  std::vector<Type2Class> type2;
  std::vector<NodeRef> excluded;
  for (const IndexClass& cls : partition.constraint_classes) {
    if (cls.is_type2()) {
      Type2Class t;
      t.color = cls.color;
      for (int i : cls.members)
        t.members.push_back({NodeRef::Side::kConstraint, i});
      type2.push_back(std::move(t));
    } else {
      excluded.push_back({NodeRef::Side::kConstraint, cls.members[0]});
    }
  }
  for (const IndexClass& cls : partition.variable_classes) {
    if (cls.is_type2()) {
      Type2Class t;
      t.color = cls.color;
      for (int j : cls.members)
        t.members.push_back({NodeRef::Side::kVariable, j});
      type2.push_back(std::move(t));
    } else {
      excluded.push_back({NodeRef::Side::kVariable, cls.members[0]});
    }
  }
  std::sort(excluded.begin(), excluded.end());

  if (type2.empty()) {
    // Every node uniquely colored: decomposable with zero clusters.
    report.is_sd = true;
    report.type2_class_size = 0;
    report.cluster_assignment = ClusterAssignment{{}, std::move(excluded)};
    return report;
  }

  const int k = static_cast<int>(type2[0].members.size());
  for (const Type2Class& cls : type2) {
    if (static_cast<int>(cls.members.size()) != k) {
      report.failure = SdFailure::kUnequalClassSizes;
      report.witnesses = {type2[0].members[0], cls.members[0]};
      return report;
    }
  }

  // Traversal order: classes smallest-color-first, members by node id. A
  // seeded shuffle of both must not change the verdict.
  std::sort(type2.begin(), type2.end(),
            [](const Type2Class& a, const Type2Class& b) {
              return a.color < b.color;
            });
  if (options.shuffle_seed) {
    Rng rng(*options.shuffle_seed);
    for (std::size_t i = type2.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
      std::swap(type2[i], type2[j]);
    }
    for (Type2Class& cls : type2) {
      for (std::size_t i = cls.members.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
        std::swap(cls.members[i], cls.members[j]);
      }
    }
  }

  std::map<int, int> class_of_color;  // type-2 color -> index into type2
  for (std::size_t c = 0; c < type2.size(); ++c)
    class_of_color[type2[c].color] = static_cast<int>(c);

  const int total_nodes = g.num_constraints() + g.num_variables();
  std::vector<bool> is_type2_node(total_nodes, false);
  std::vector<int> node_color(total_nodes, -1);
  for (const Type2Class& cls : type2)
    for (NodeRef node : cls.members) is_type2_node[flat_id(g, node)] = true;
  for (int i = 0; i < g.num_constraints(); ++i)
    node_color[flat_id(g, {NodeRef::Side::kConstraint, i})] =
        coloring.constraint_colors[graph_index][i];
  for (int j = 0; j < g.num_variables(); ++j)
    node_color[flat_id(g, {NodeRef::Side::kVariable, j})] =
        coloring.variable_colors[graph_index][j];

  std::vector<std::vector<NodeRef>> clusters(k);
  // in_cluster[node] == i marks membership in the cluster currently being
  // grown; overlaps across clusters are caught by the post-check below.
  std::vector<int> in_cluster(total_nodes, -1);

  for (int i = 0; i < k; ++i) {
    std::vector<bool> consumed(type2.size(), false);
    std::set<int> colors_in_cluster;
    std::deque<NodeRef> queue;
    for (std::size_t c = 0; c < type2.size(); ++c) {
      if (consumed[c]) continue;
      consumed[c] = true;
      NodeRef seed = type2[c].members[i];
      clusters[i].push_back(seed);
      colors_in_cluster.insert(type2[c].color);
      in_cluster[flat_id(g, seed)] = i;
      queue.push_back(seed);
      while (!queue.empty()) {
        NodeRef u = queue.front();
        queue.pop_front();
        bool repeated = false;
        NodeRef witness;
        for_each_neighbor(g, u, [&](NodeRef w) {
          if (repeated) return;
          const int wid = flat_id(g, w);
          if (!is_type2_node[wid]) return;  // uniquely colored: excluded
          if (in_cluster[wid] == i) return;  // already absorbed
          if (colors_in_cluster.count(node_color[wid])) {
            repeated = true;
            witness = w;
            return;
          }
          clusters[i].push_back(w);
          colors_in_cluster.insert(node_color[wid]);
          consumed[class_of_color[node_color[wid]]] = true;
          in_cluster[wid] = i;
          queue.push_back(w);
        });
        if (repeated) {
          report.failure = SdFailure::kRepeatedColorInCluster;
          report.witnesses = {u, witness};
          return report;
        }
      }
    }
  }

  // Re-verify: distinct colors per cluster, pairwise disjointness, and
  // pairwise disconnectivity over the non-excluded nodes.
  std::vector<int> seen_in(total_nodes, -1);
  for (int i = 0; i < k; ++i) {
    std::set<int> colors;
    for (NodeRef node : clusters[i]) {
      const int id = flat_id(g, node);
      if (!colors.insert(node_color[id]).second) {
        report.failure = SdFailure::kRepeatedColorInCluster;
        report.witnesses = {node};
        return report;
      }
      if (seen_in[id] >= 0) {
        report.failure = SdFailure::kClustersOverlap;
        report.witnesses = {node};
        return report;
      }
      seen_in[id] = i;
    }
  }
  for (int i = 0; i < k; ++i) {
    for (NodeRef node : clusters[i]) {
      bool connected = false;
      NodeRef witness;
      for_each_neighbor(g, node, [&](NodeRef w) {
        const int wid = flat_id(g, w);
        if (seen_in[wid] >= 0 && seen_in[wid] != i && !connected) {
          connected = true;
          witness = w;
        }
      });
      if (connected) {
        report.failure = SdFailure::kClustersConnected;
        report.witnesses = {node, witness};
        return report;
      }
    }
  }

  for (auto& cluster : clusters) std::sort(cluster.begin(), cluster.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  report.is_sd = true;
  report.type2_class_size = k;
  report.cluster_assignment =
      ClusterAssignment{std::move(clusters), std::move(excluded)};
  return report;
}

bool verify_cluster_assignment(const BipartiteGraph& g,
                               const Coloring& coloring, int graph_index,
                               const ClusterAssignment& assignment) {
  if (graph_index < 0 || graph_index >= coloring.num_graphs) return false;

  // Recompute unique/repeated colors directly from the coloring.
  std::map<int, int> multiplicity;
  for (int c : coloring.constraint_colors[graph_index]) ++multiplicity[c];
  for (int c : coloring.variable_colors[graph_index]) ++multiplicity[c];

  auto color_of_node = [&](NodeRef node) {
    return color_of(coloring, graph_index, node);
  };

  std::set<NodeRef> unique_nodes;
  for (int i = 0; i < g.num_constraints(); ++i) {
    NodeRef node{NodeRef::Side::kConstraint, i};
    if (multiplicity[color_of_node(node)] == 1) unique_nodes.insert(node);
  }
  for (int j = 0; j < g.num_variables(); ++j) {
    NodeRef node{NodeRef::Side::kVariable, j};
    if (multiplicity[color_of_node(node)] == 1) unique_nodes.insert(node);
  }

  std::set<NodeRef> excluded(assignment.excluded.begin(),
                             assignment.excluded.end());
  if (excluded != unique_nodes) return false;

  // Clusters: pairwise disjoint, covering exactly the repeated-color nodes.
  std::map<NodeRef, int> where;
  for (std::size_t i = 0; i < assignment.clusters.size(); ++i) {
    for (NodeRef node : assignment.clusters[i]) {
      if (excluded.count(node)) return false;
      if (!where.emplace(node, static_cast<int>(i)).second) return false;
    }
  }
  const std::size_t repeated_total =
      static_cast<std::size_t>(g.num_constraints() + g.num_variables()) -
      unique_nodes.size();
  if (where.size() != repeated_total) return false;

  // Condition 1 and 2: distinct colors within each cluster, identical
  // color sets across clusters (all the same size in particular).
  std::set<int> reference_colors;
  for (std::size_t i = 0; i < assignment.clusters.size(); ++i) {
    std::set<int> colors;
    for (NodeRef node : assignment.clusters[i])
      if (!colors.insert(color_of_node(node)).second) return false;
    if (i == 0)
      reference_colors = colors;
    else if (colors != reference_colors)
      return false;
  }

  // Condition 3: no edge joins two distinct clusters.
  for (int i = 0; i < g.num_constraints(); ++i) {
    for (const auto& [j, w] : g.constraint_adj[i]) {
      auto a = where.find({NodeRef::Side::kConstraint, i});
      auto b = where.find({NodeRef::Side::kVariable, j});
      if (a != where.end() && b != where.end() && a->second != b->second)
        return false;
    }
  }
  return true;
}

}  // namespace milpeq
