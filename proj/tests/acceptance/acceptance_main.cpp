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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Fixture directory from MILPEQ_FIXTURES (or argv[1]).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "milpeq/equivalence.hpp"
#include "milpeq/lp_format.hpp"
#include "milpeq/rng.hpp"
#include "milpeq/sampling.hpp"

using namespace milpeq;
namespace fs = std::filesystem;

namespace {

fs::path g_fixtures;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// ---------------------------------------------------------------------------
// Template corpus helpers for the consistency criterion
// ---------------------------------------------------------------------------

struct TemplatePair {
  std::string name;
  ModelTemplate reference;
  ModelTemplate test;
  ParameterSpec spec;
  bool expect_equivalent;
};

struct TemplateBuilder {
  ModelTemplate model;
  ParameterSpec spec;

  int param(const std::string& name, Rational lo, Rational hi) {
    model.parameter_names.push_back(name);
    spec.names.push_back(name);
    ParamDistribution dist;
    dist.kind = ParamDistribution::Kind::kContinuousUniform;
    dist.lo = std::move(lo);
    dist.hi = std::move(hi);
    spec.distributions.push_back(std::move(dist));
    return static_cast<int>(model.parameter_names.size()) - 1;
  }
};

// min sum c_i x_i  s.t.  sum a_ji x_i >= p_j,  x_i <= u_i
TemplateBuilder blending(int n, int m) {
  TemplateBuilder b;
  b.model.num_vars = n;
  b.model.var_kinds.assign(n, VarKind::kContinuous);
  for (int i = 0; i < n; ++i)
    b.model.objective.push_back(
        CoeffSlot::of_parameter(b.param("c" + std::to_string(i), 1, 10)));
  for (int j = 0; j < m; ++j) {
    TemplateRow row;
    row.sense = Sense::kGe;
    for (int i = 0; i < n; ++i)
      row.coeffs.emplace_back(
          i, CoeffSlot::of_parameter(b.param(
                 "a" + std::to_string(j) + "_" + std::to_string(i), 0, 1)));
    row.rhs = CoeffSlot::of_parameter(b.param("p" + std::to_string(j), 5, 20));
    b.model.rows.push_back(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    TemplateRow row;
    row.sense = Sense::kLe;
    row.coeffs.emplace_back(i, CoeffSlot::of_literal(1));
    row.rhs = CoeffSlot::of_parameter(b.param("u" + std::to_string(i), 10, 30));
    b.model.rows.push_back(std::move(row));
  }
  return b;
}

// min sum cost_sd x_sd  s.t.  sum_d x_sd <= supply_s,  sum_s x_sd >= dem_d
TemplateBuilder transportation(int sources, int sinks) {
  TemplateBuilder b;
  b.model.num_vars = sources * sinks;
  b.model.var_kinds.assign(b.model.num_vars, VarKind::kContinuous);
  auto x = [&](int s, int d) { return s * sinks + d; };
  for (int s = 0; s < sources; ++s)
    for (int d = 0; d < sinks; ++d)
      b.model.objective.push_back(CoeffSlot::of_parameter(b.param(
          "cost" + std::to_string(s) + "_" + std::to_string(d), 1, 9)));
  for (int s = 0; s < sources; ++s) {
    TemplateRow row;
    row.sense = Sense::kLe;
    for (int d = 0; d < sinks; ++d)
      row.coeffs.emplace_back(x(s, d), CoeffSlot::of_literal(1));
    row.rhs =
        CoeffSlot::of_parameter(b.param("supply" + std::to_string(s), 20, 60));
    b.model.rows.push_back(std::move(row));
  }
  for (int d = 0; d < sinks; ++d) {
    TemplateRow row;
    row.sense = Sense::kGe;
    for (int s = 0; s < sources; ++s)
      row.coeffs.emplace_back(x(s, d), CoeffSlot::of_literal(1));
    row.rhs =
        CoeffSlot::of_parameter(b.param("demand" + std::to_string(d), 5, 15));
    b.model.rows.push_back(std::move(row));
  }
  return b;
}

// max sum v_i x_i  s.t.  sum w_i x_i <= cap, 0 <= x_i <= 1, x integer
TemplateBuilder knapsack(int n) {
  TemplateBuilder b;
  b.model.objective_sense = ObjectiveSense::kMaximize;
  b.model.num_vars = n;
  b.model.var_kinds.assign(n, VarKind::kInteger);
  TemplateRow cap_row;
  cap_row.sense = Sense::kLe;
  for (int i = 0; i < n; ++i) {
    b.model.objective.push_back(
        CoeffSlot::of_parameter(b.param("v" + std::to_string(i), 1, 100)));
    cap_row.coeffs.emplace_back(
        i, CoeffSlot::of_parameter(b.param("w" + std::to_string(i), 1, 10)));
  }
  cap_row.rhs = CoeffSlot::of_parameter(b.param("cap", 10, 30));
  b.model.rows.push_back(std::move(cap_row));
  for (int i = 0; i < n; ++i) {
    TemplateRow lo, hi;
    lo.sense = Sense::kGe;
    lo.rhs = CoeffSlot::of_literal(0);
    lo.coeffs.emplace_back(i, CoeffSlot::of_literal(1));
    hi.sense = Sense::kLe;
    hi.rhs = CoeffSlot::of_literal(1);
    hi.coeffs.emplace_back(i, CoeffSlot::of_literal(1));
    b.model.rows.push_back(std::move(lo));
    b.model.rows.push_back(std::move(hi));
  }
  return b;
}

// min sum c_i x_i  s.t. one >= 1 covering row per element
TemplateBuilder covering() {
  TemplateBuilder b;
  b.model.num_vars = 3;
  b.model.var_kinds.assign(3, VarKind::kInteger);
  for (int i = 0; i < 3; ++i)
    b.model.objective.push_back(
        CoeffSlot::of_parameter(b.param("c" + std::to_string(i), 1, 5)));
  const int sets[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  for (const auto& pair : sets) {
    TemplateRow row;
    row.sense = Sense::kGe;
    row.rhs = CoeffSlot::of_literal(1);
    row.coeffs.emplace_back(pair[0], CoeffSlot::of_literal(1));
    row.coeffs.emplace_back(pair[1], CoeffSlot::of_literal(1));
    std::sort(row.coeffs.begin(), row.coeffs.end(),
              [](const auto& a, const auto& c) { return a.first < c.first; });
    b.model.rows.push_back(std::move(row));
  }
  return b;
}

ModelTemplate permute_template(const ModelTemplate& t, const Permutation& pv,
                               const Permutation& pr) {
  ModelTemplate out;
  out.objective_sense = t.objective_sense;
  out.num_vars = t.num_vars;
  out.parameter_names = t.parameter_names;
  out.objective.resize(t.num_vars);
  out.var_kinds.resize(t.num_vars);
  for (int j = 0; j < t.num_vars; ++j) {
    out.objective[pv.map[j]] = t.objective[j];
    out.var_kinds[pv.map[j]] = t.var_kinds[j];
  }
  out.rows.resize(t.rows.size());
  for (int i = 0; i < t.num_constraints(); ++i) {
    TemplateRow row;
    row.sense = t.rows[i].sense;
    row.rhs = t.rows[i].rhs;
    for (const auto& [j, slot] : t.rows[i].coeffs)
      row.coeffs.emplace_back(pv.map[j], slot);
    std::sort(row.coeffs.begin(), row.coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rows[pr.map[i]] = std::move(row);
  }
  return out;
}

std::vector<TemplatePair> build_consistency_corpus() {
  std::vector<TemplatePair> pairs;
  std::vector<std::pair<std::string, TemplateBuilder>> bases;
  bases.emplace_back("blending-2x1", blending(2, 1));
  bases.emplace_back("blending-3x2", blending(3, 2));
  bases.emplace_back("blending-4x3", blending(4, 3));
  bases.emplace_back("blending-3x3", blending(3, 3));
  bases.emplace_back("transport-2x2", transportation(2, 2));
  bases.emplace_back("transport-3x2", transportation(3, 2));
  bases.emplace_back("knapsack-3", knapsack(3));
  bases.emplace_back("covering-3", covering());

  Rng rng(13);
  for (const auto& [name, base] : bases) {
    const ModelTemplate& t = base.model;
    // equivalent by construction: rows reordered
    {
      Permutation pr = random_permutation(t.num_constraints(), rng.next());
      pairs.push_back({name + "/rows-reordered", t,
                       permute_template(t, Permutation::identity(t.num_vars),
                                        pr),
                       base.spec, true});
    }
    // equivalent by construction: variables and rows permuted
    {
      Permutation pv = random_permutation(t.num_vars, rng.next());
      Permutation pr = random_permutation(t.num_constraints(), rng.next());
      pairs.push_back({name + "/fully-permuted", t,
                       permute_template(t, pv, pr), base.spec, true});
    }
    // broken by construction: one constraint sense flipped
    {
      ModelTemplate flipped = t;
      flipped.rows[0].sense =
          flipped.rows[0].sense == Sense::kLe ? Sense::kGe : Sense::kLe;
      pairs.push_back({name + "/sense-flipped", t, flipped, base.spec, false});
    }
    // broken by construction: an extra literal-only row
    {
      ModelTemplate longer = t;
      TemplateRow extra;
      extra.sense = Sense::kLe;
      extra.rhs = CoeffSlot::of_literal(1000);
      extra.coeffs.emplace_back(0, CoeffSlot::of_literal(1));
      longer.rows.push_back(std::move(extra));
      pairs.push_back({name + "/extra-row", t, longer, base.spec, false});
    }
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

std::string criterion_permutation_soundness() {
  Rng rng(101);
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst;
    if (trial % 10 == 9) {
      // symmetric shapes with k > 0: bin packing with distinct sizes
      const int bins = 2 + static_cast<int>(rng.bounded(4));  // 2..5
      const int items = 2 + static_cast<int>(rng.bounded(3));
      std::vector<long> sizes;
      long next_size = 1 + static_cast<long>(rng.bounded(3));
      for (int i = 0; i < items; ++i) {
        sizes.push_back(next_size);
        next_size += 1 + static_cast<long>(rng.bounded(3));
      }
      inst = testgen::bin_packing(bins, items, sizes,
                                  20 + static_cast<long>(rng.bounded(30)));
    } else {
      inst = testgen::random_unfoldable_instance(rng, 50, 50);
    }
    Instance partner = apply_permutation(
        inst, random_permutation(inst.num_vars, rng.next()),
        random_permutation(inst.num_constraints(), rng.next()));
    EquivalenceReport report = check_equivalence(inst, partner);
    if (report.verdict != Verdict::kEquivalent || !report.guaranteed) {
      return "trial " + std::to_string(trial) + ": verdict " +
             to_string(report.verdict) + ", guaranteed " +
             (report.guaranteed ? "true" : "false");
    }
  }
  return "";
}

std::string criterion_oracle_agreement() {
  Rng rng(202);
  const int trials = 520;
  int both_sd = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Instance a = testgen::random_small_instance(rng, 5, 5);
    Instance b;
    switch (trial % 4) {
      case 0:
        b = apply_permutation(
            a, random_permutation(a.num_vars, rng.next()),
            random_permutation(a.num_constraints(), rng.next()));
        break;
      case 1: {  // coefficient perturbation keeps values nonzero
        b = a;
        auto& coeffs = b.rows[rng.bounded(b.rows.size())].coeffs;
        coeffs[rng.bounded(coeffs.size())].second *= 2;
        break;
      }
      case 2: {  // constraint sense flip
        b = a;
        ConstraintRow& row = b.rows[rng.bounded(b.rows.size())];
        row.sense = row.sense == Sense::kLe   ? Sense::kGe
                    : row.sense == Sense::kGe ? Sense::kLe
                                              : Sense::kLt;
        break;
      }
      default:
        b = testgen::random_small_instance(rng, 5, 5);
        break;
    }
    EquivalenceReport report = check_equivalence(a, b);
    auto oracle = brute_force_isomorphic(a, b);
    if (!oracle.has_value())
      return "trial " + std::to_string(trial) + ": oracle budget exceeded";

    if (report.verdict == Verdict::kEquivalent && !*oracle)
      return "trial " + std::to_string(trial) + ": false Equivalent";

    const bool dims_match = a.num_vars == b.num_vars &&
                            a.num_constraints() == b.num_constraints() &&
                            a.objective_sense == b.objective_sense;
    if (dims_match && report.guaranteed) {
      ++both_sd;
      if ((report.verdict == Verdict::kEquivalent) != *oracle)
        return "trial " + std::to_string(trial) +
               ": guaranteed verdict disagrees with the oracle";
    }
  }
  if (both_sd < trials / 4)
    return "only " + std::to_string(both_sd) + " both-SD pairs; corpus too thin";
  return "";
}

std::string criterion_conservative_counterexample() {
  Instance ref = testgen::cycle8();
  Instance test = testgen::two_four_cycles();
  EquivalenceReport report = check_equivalence(ref, test);
  if (!report.multisets_equal) return "coloring multisets differ";
  if (!report.sd_reference || report.sd_reference->is_sd)
    return "reference unexpectedly SD";
  if (!report.sd_test || report.sd_test->is_sd)
    return "test unexpectedly SD";
  if (report.verdict != Verdict::kNotEquivalent ||
      report.reason != Reason::kTestNotSd)
    return std::string("expected NotEquivalent(test-not-sd), got ") +
           to_string(report.reason);
  auto oracle = brute_force_isomorphic(ref, test);
  if (!oracle.has_value()) return "oracle budget exceeded";
  if (*oracle) return "oracle claims the fixtures are isomorphic";
  return "";
}

std::string criterion_bin_packing_structure() {
  Instance inst = testgen::bin_packing(3, 2, {1, 2}, 5);
  BipartiteGraph g = encode(inst);
  Coloring coloring = run_wl(g);
  StablePartition partition = stable_partition(g, coloring, 0);
  SdReport report = detect_symmetric_decomposable(g, coloring, 0, partition);
  if (!report.is_sd) return "not symmetric decomposable";
  if (report.type2_class_size != 3)
    return "k = " + std::to_string(report.type2_class_size.value_or(-1));
  if (report.cluster_assignment->clusters.size() != 3)
    return "cluster count != 3";
  int unique_constraints = 0;
  for (const NodeRef& node : report.cluster_assignment->excluded)
    unique_constraints += node.side == NodeRef::Side::kConstraint;
  if (unique_constraints != 2 ||
      report.cluster_assignment->excluded.size() != 2)
    return "expected exactly 2 uniquely colored constraint nodes";
  if (!verify_cluster_assignment(g, coloring, 0, *report.cluster_assignment))
    return "independent checker rejected the assignment";
  return "";
}

std::string criterion_consistency() {
  std::vector<TemplatePair> corpus = build_consistency_corpus();
  if (corpus.size() < 30)
    return "corpus has only " + std::to_string(corpus.size()) + " pairs";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const TemplatePair& pair = corpus[i];
    ConsistencyReport report = evaluate_consistency(
        pair.reference, pair.test, pair.spec, 5, 7000 + i);
    if (!report.consistent)
      return pair.name + ": verdicts differ across configurations";
    const bool equivalent =
        report.reports.front().verdict == Verdict::kEquivalent;
    if (equivalent != pair.expect_equivalent)
      return pair.name + ": forced verdict mismatch";
  }
  return "";
}

std::string criterion_sampling_theorems() {
  // Theorem-2 shape: blending templates, every variable carries an
  // independent continuous coefficient.
  for (auto [n, m] : {std::pair{3, 2}, std::pair{4, 3}, std::pair{2, 1}}) {
    TemplateBuilder b = blending(n, m);
    SdRateReport report = sd_rate(b.model, b.spec, 200, 42 + n);
    if (report.error_count != 0)
      return "instantiation errors in the blending template";
    if (report.rate != 1.0)
      return "sd_rate " + std::to_string(report.rate) + " for blending " +
             std::to_string(n) + "x" + std::to_string(m);
  }

  // Theorem-3: two independent discrete-uniform({1..l}) parameters collide
  // with probability exactly 1/l.
  for (int l : {10, 100}) {
    ParameterSpec spec;
    for (const char* name : {"a", "b"}) {
      spec.names.push_back(name);
      ParamDistribution dist;
      dist.kind = ParamDistribution::Kind::kDiscreteUniform;
      for (int v = 1; v <= l; ++v) dist.values.push_back(Rational(v));
      spec.distributions.push_back(std::move(dist));
    }
    const int draws = 10000;
    int collisions = 0;
    for (int i = 0; i < draws; ++i) {
      ParameterConfig cfg = sample_config(spec, derive_seed(90210 + l, i));
      collisions += cfg.values[0] == cfg.values[1];
    }
    const double expected = 1.0 / l;
    const double tolerance = 3.0 * std::sqrt(expected * (1 - expected) / draws);
    const double measured = static_cast<double>(collisions) / draws;
    if (std::abs(measured - expected) > tolerance)
      return "collision rate " + std::to_string(measured) + " vs 1/" +
             std::to_string(l) + " (3 sigma = " + std::to_string(tolerance) +
             ")";
  }
  return "";
}

std::string criterion_runtime_scaling() {
  const std::vector<int> sizes = {500, 1000, 2000, 4000};
  std::vector<double> best(sizes.size(), 1e100);
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    Instance inst = testgen::synthetic_sd_instance(sizes[s], 999 + s);
    Instance partner = apply_permutation(
        inst, random_permutation(inst.num_vars, 17),
        random_permutation(inst.num_constraints(), 18));
    for (int rep = 0; rep < 3; ++rep) {
      auto start = std::chrono::steady_clock::now();
      EquivalenceReport report = check_equivalence(inst, partner);
      double elapsed = seconds_since(start);
      if (report.verdict != Verdict::kEquivalent || !report.guaranteed)
        return "size " + std::to_string(sizes[s]) + ": unexpected verdict";
      best[s] = std::min(best[s], elapsed);
    }
  }
  // m+n ~ 2000 must stay under 5 s
  if (best[2] >= 5.0)
    return "size 2000 took " + std::to_string(best[2]) + " s (limit 5 s)";
  // growth no worse than quadratic per doubling, slack 2.5, 1 ms floor
  for (std::size_t s = 1; s < sizes.size(); ++s) {
    double ratio = best[s] / std::max(best[s - 1], 1e-3);
    if (ratio > 4.0 * 2.5)
      return "growth ratio " + std::to_string(ratio) + " from " +
             std::to_string(sizes[s - 1]) + " to " + std::to_string(sizes[s]);
  }
  return "";
}

std::string criterion_parser_round_trip() {
  fs::path dir = g_fixtures / "lp";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".lp") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.size() < 40)
    return "fixture corpus has only " + std::to_string(files.size()) +
           " files";
  for (const fs::path& path : files) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    LpDocument doc = parse_lp(buffer.str());
    if (!doc.ok()) return path.filename().string() + ": does not parse";
    LpDocument again = parse_lp(write_lp(*doc.instance));
    if (!again.ok())
      return path.filename().string() + ": written form does not parse";
    if (!instances_identical(*doc.instance, *again.instance))
      return path.filename().string() + ": round-trip not identical";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    g_fixtures = argv[1];
  } else if (const char* env = std::getenv("MILPEQ_FIXTURES")) {
    g_fixtures = env;
  } else {
    std::cerr << "usage: milpeq_acceptance <fixtures-dir> (or set "
                 "MILPEQ_FIXTURES)\n";
    return 2;
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "permutation soundness over 1000 random SD instances",
       criterion_permutation_soundness},
      {2, "oracle agreement over 520 small pairs",
       criterion_oracle_agreement},
      {3, "conservative verdict on the WL counterexample",
       criterion_conservative_counterexample},
      {4, "bin-packing cluster structure (p=3, q=2)",
       criterion_bin_packing_structure},
      {5, "verdict consistency across sampled configurations (32 pairs, K=5)",
       criterion_consistency},
      {6, "sampling theorems: SD rate 1.0 and 1/l collisions",
       criterion_sampling_theorems},
      {7, "runtime: < 5 s at m+n = 2000, at most quadratic growth",
       criterion_runtime_scaling},
      {8, "parser round-trip over the fixture corpus",
       criterion_parser_round_trip},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = criterion.run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    double elapsed = seconds_since(start);
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.2f s", elapsed);
    if (failure.empty()) {
      std::cout << "[PASS] criterion " << criterion.id << ": "
                << criterion.name << " (" << timing << ")\n";
    } else {
      ++failures;
      std::cout << "[FAIL] criterion " << criterion.id << ": "
                << criterion.name << " -- " << failure << " (" << timing
                << ")\n";
    }
  }
  if (failures == 0)
    std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
  else
    std::cout << failures << " acceptance criteria FAILED\n";
  return failures == 0 ? 0 : 1;
}
