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

// Command-line front end: check (pairwise equivalence), sd (symmetric-
// decomposable detection), wl (refinement inspection), sample (template
// instantiation, SD rate, consistency) and batch (manifest evaluation).
//
// Exit codes: 0 equivalent / success, 1 not equivalent / not SD,
// 2 usage or input error, 3 internal assertion failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "milpeq/batch.hpp"
#include "milpeq/equivalence.hpp"
#include "milpeq/lp_format.hpp"
#include "milpeq/rng.hpp"
#include "milpeq/sampling.hpp"

namespace {

constexpr int kExitEquivalent = 0;
constexpr int kExitNotEquivalent = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_diagnostics(const std::string& path,
                       const std::vector<milpeq::ParseDiagnostic>& diags) {
  for (const auto& d : diags) {
    std::cerr << path << ":" << d.line << ":" << d.column << ": "
              << (d.severity == milpeq::Severity::kError ? "error" : "warning")
              << ": " << d.message << "\n";
  }
}

std::optional<milpeq::Instance> load_instance(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  milpeq::LpDocument doc = milpeq::parse_lp(*text);
  print_diagnostics(path, doc.diagnostics);
  if (!doc.ok()) return std::nullopt;
  return std::move(*doc.instance);
}

std::optional<milpeq::TemplateDocument> load_template(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  milpeq::TemplateDocument doc = milpeq::parse_template(*text);
  print_diagnostics(path, doc.diagnostics);
  if (!doc.ok()) return std::nullopt;
  return doc;
}

milpeq::CheckOptions options_for(const std::string& mode) {
  milpeq::CheckOptions options;
  if (mode == "sum") {
    options.mode = milpeq::WlMode::kWeightedSum;
    std::cerr << "note: weighted-sum mode relies on collision-free weighted "
                 "aggregates; the default pairs mode is exact\n";
  }
  return options;
}

std::uint64_t oracle_budget() {
  if (const char* env = std::getenv("MILPEQ_ORACLE_BUDGET")) {
    char* end = nullptr;
    unsigned long long value = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && value > 0) return value;
    std::cerr << "warning: ignoring malformed MILPEQ_ORACLE_BUDGET\n";
  }
  return 10'000'000ULL;
}

nlohmann::json sd_to_json(const milpeq::SdReport& sd) {
  nlohmann::json j;
  j["is_sd"] = sd.is_sd;
  if (sd.type2_class_size)
    j["k"] = *sd.type2_class_size;
  else
    j["k"] = nullptr;
  if (sd.failure) {
    j["failure"] = milpeq::to_string(*sd.failure);
    nlohmann::json witnesses = nlohmann::json::array();
    for (const auto& w : sd.witnesses) witnesses.push_back(w.to_string());
    j["witnesses"] = witnesses;
  } else {
    j["failure"] = nullptr;
  }
  if (sd.cluster_assignment) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& cluster : sd.cluster_assignment->clusters) {
      nlohmann::json members = nlohmann::json::array();
      for (const auto& node : cluster) members.push_back(node.to_string());
      clusters.push_back(members);
    }
    j["clusters"] = clusters;
    j["num_excluded"] = sd.cluster_assignment->excluded.size();
  }
  return j;
}

struct SdRun {
  milpeq::BipartiteGraph graph;
  milpeq::Coloring coloring;
  milpeq::StablePartition partition;
  milpeq::SdReport report;
};

SdRun run_sd(const milpeq::Instance& inst, milpeq::WlMode mode) {
  SdRun run;
  run.graph = milpeq::encode(inst);
  run.coloring = milpeq::run_wl(run.graph, mode);
  run.partition = milpeq::stable_partition(run.graph, run.coloring, 0);
  run.report = milpeq::detect_symmetric_decomposable(run.graph, run.coloring,
                                                     0, run.partition);
  return run;
}

int cmd_check(const std::string& ref_path, const std::string& test_path,
              const std::string& mode, bool json, bool oracle) {
  auto reference = load_instance(ref_path);
  if (!reference) return kExitUsage;
  auto test = load_instance(test_path);
  if (!test) return kExitUsage;

  milpeq::EquivalenceReport report =
      milpeq::check_equivalence(*reference, *test, options_for(mode));

  std::optional<bool> oracle_result;
  bool oracle_ran = false;
  if (oracle) {
    oracle_result = milpeq::brute_force_isomorphic(*reference, *test, 8,
                                                   oracle_budget());
    oracle_ran = oracle_result.has_value();
  }

  if (json) {
    nlohmann::json j = nlohmann::json::parse(milpeq::report_to_json(report));
    if (oracle) {
      if (oracle_ran) {
        j["oracle_isomorphic"] = *oracle_result;
        j["oracle_agrees"] =
            (*oracle_result ==
             (report.verdict == milpeq::Verdict::kEquivalent));
      } else {
        j["oracle_isomorphic"] = nullptr;
        j["oracle_agrees"] = nullptr;
      }
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << milpeq::explain_report(report) << "\n";
    if (oracle) {
      if (!oracle_ran) {
        std::cout << "oracle: skipped (enumeration budget exceeded)\n";
      } else {
        const bool agrees =
            *oracle_result == (report.verdict == milpeq::Verdict::kEquivalent);
        std::cout << "oracle: " << (*oracle_result ? "isomorphic"
                                                   : "not isomorphic")
                  << ", " << (agrees ? "agrees" : "DISAGREES")
                  << " with the verdict\n";
      }
    }
  }
  return report.verdict == milpeq::Verdict::kEquivalent ? kExitEquivalent
                                                        : kExitNotEquivalent;
}

int cmd_sd(const std::string& path, const std::string& mode, bool json) {
  auto inst = load_instance(path);
  if (!inst) return kExitUsage;
  SdRun run = run_sd(*inst, options_for(mode).mode);
  const milpeq::SdReport& sd = run.report;

  if (json) {
    std::cout << sd_to_json(sd).dump(2) << "\n";
  } else if (sd.is_sd) {
    const int k = *sd.type2_class_size;
    std::cout << "symmetric decomposable, k=" << k;
    if (k == 0) {
      std::cout << " (unfoldable)";
    } else {
      std::cout << " (" << sd.cluster_assignment->clusters.size()
                << " clusters of size "
                << sd.cluster_assignment->clusters.front().size() << ", "
                << sd.cluster_assignment->excluded.size()
                << " uniquely colored nodes)";
    }
    std::cout << "\n";
  } else {
    std::cout << "not SD: " << milpeq::to_string(*sd.failure);
    if (!sd.witnesses.empty()) {
      std::cout << " at";
      for (const auto& w : sd.witnesses) std::cout << " " << w.to_string();
    }
    std::cout << "\n";
  }
  return sd.is_sd ? kExitEquivalent : kExitNotEquivalent;
}

int cmd_wl(const std::string& path, const std::string& mode, bool dump_colors,
           int max_rounds) {
  auto inst = load_instance(path);
  if (!inst) return kExitUsage;
  milpeq::BipartiteGraph g = milpeq::encode(*inst);
  const int bound = g.num_constraints() + g.num_variables();
  if (max_rounds >= 0 && max_rounds < bound) {
    std::cerr << "error: --rounds must be at least m+n = " << bound << "\n";
    return kExitUsage;
  }
  milpeq::Coloring coloring =
      milpeq::run_wl(g, options_for(mode).mode, max_rounds);
  std::cout << "stable after " << coloring.rounds << " refinement rounds, "
            << coloring.num_colors << " colors\n";
  if (dump_colors) std::cout << milpeq::dump_colors(coloring, 0);
  return kExitEquivalent;
}

int cmd_sample(const std::string& tpl_path, const std::string& test_tpl_path,
               const std::string& mode, int configs, std::uint64_t seed,
               int sd_rate_samples, const std::string& data_path,
               std::string out_prefix, bool json) {
  auto doc = load_template(tpl_path);
  if (!doc) return kExitUsage;

  if (!data_path.empty()) {
    auto text = read_file(data_path);
    if (!text) {
      std::cerr << "error: cannot open '" << data_path << "'\n";
      return kExitUsage;
    }
    std::vector<milpeq::ParseDiagnostic> diags;
    auto cfg = milpeq::parse_parameter_file(*text, diags);
    print_diagnostics(data_path, diags);
    if (!cfg) return kExitUsage;
    milpeq::InstantiationResult result = milpeq::instantiate(*doc->model, *cfg);
    for (const std::string& w : result.warnings)
      std::cerr << "warning: " << w << "\n";
    std::cout << milpeq::write_lp(result.instance);
    return kExitEquivalent;
  }

  if (sd_rate_samples > 0) {
    milpeq::SdRateReport report =
        milpeq::sd_rate(*doc->model, doc->spec, sd_rate_samples, seed);
    if (json) {
      nlohmann::json j;
      j["num_samples"] = report.num_samples;
      j["sd_count"] = report.sd_count;
      j["error_count"] = report.error_count;
      j["sd_rate"] = report.rate;
      std::cout << j.dump(2) << "\n";
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f", report.rate);
      std::cout << "sd_rate = " << buf << " (" << report.sd_count << "/"
                << report.num_samples << " SD, " << report.error_count
                << " instantiation errors)\n";
    }
    return kExitEquivalent;
  }

  if (!test_tpl_path.empty()) {
    auto test_doc = load_template(test_tpl_path);
    if (!test_doc) return kExitUsage;
    milpeq::ConsistencyReport report = milpeq::evaluate_consistency(
        *doc->model, *test_doc->model, doc->spec, configs, seed,
        options_for(mode));
    if (json) {
      std::cout << milpeq::consistency_report_to_json(report) << "\n";
    } else {
      for (int i = 0; i < report.num_configs; ++i) {
        const auto& r = report.reports[i];
        std::cout << "config " << i << ": " << milpeq::to_string(r.verdict);
        if (r.verdict == milpeq::Verdict::kNotEquivalent)
          std::cout << " (" << milpeq::to_string(r.reason) << ")";
        std::cout << "\n";
      }
      std::cout << (report.consistent ? "consistent" : "INCONSISTENT")
                << " across " << report.num_configs << " configurations, "
                << report.sd_count << " with both instances SD\n";
    }
    const bool all_equivalent =
        report.consistent &&
        report.reports.front().verdict == milpeq::Verdict::kEquivalent;
    return all_equivalent ? kExitEquivalent : kExitNotEquivalent;
  }

  // emit sampled instances to files
  if (out_prefix.empty()) {
    out_prefix = tpl_path;
    std::size_t dot = out_prefix.find_last_of('.');
    if (dot != std::string::npos && out_prefix.find('/', dot) == std::string::npos)
      out_prefix.resize(dot);
    out_prefix += ".cfg";
  }
  for (int i = 0; i < configs; ++i) {
    milpeq::ParameterConfig cfg =
        milpeq::sample_config(doc->spec, milpeq::derive_seed(seed, i));
    milpeq::InstantiationResult result = milpeq::instantiate(*doc->model, cfg);
    for (const std::string& w : result.warnings)
      std::cerr << "warning: config " << i << ": " << w << "\n";
    std::string path = out_prefix + std::to_string(i) + ".lp";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << path << "'\n";
      return kExitUsage;
    }
    out << milpeq::write_lp(result.instance);
    std::cout << path << "\n";
  }
  return kExitEquivalent;
}

int cmd_batch(const std::string& manifest_path, const std::string& mode,
              bool json, int jobs) {
  auto text = read_file(manifest_path);
  if (!text) {
    std::cerr << "error: cannot open '" << manifest_path << "'\n";
    return kExitUsage;
  }
  std::string error;
  auto entries = milpeq::parse_manifest(*text, error);
  if (!entries) {
    std::cerr << "error: " << manifest_path << ": " << error << "\n";
    return kExitUsage;
  }
  milpeq::BatchReport report =
      milpeq::batch_evaluate(*entries, options_for(mode), jobs);
  if (json)
    std::cout << milpeq::batch_report_to_json(report) << "\n";
  else
    std::cout << milpeq::batch_report_to_text(report);
  const bool has_errors = std::any_of(
      report.entries.begin(), report.entries.end(), [](const auto& r) {
        return r.kind == milpeq::BatchEntryResult::Kind::kError;
      });
  return has_errors ? kExitUsage : kExitEquivalent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural equivalence checking for LP/MILP instances"};
  app.require_subcommand(1);

  std::string ref_path, test_path, mode = "pairs";
  bool json = false, oracle = false, dump = false;
  int jobs = 1, configs = 5, sd_rate_samples = 0, max_rounds = -1;
  std::uint64_t seed = 0;
  std::string data_path, out_prefix;

  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "aggregation mode: pairs (default) or sum")
        ->check(CLI::IsMember({"pairs", "sum"}));
  };

  CLI::App* check = app.add_subcommand(
      "check", "decide equivalence of a reference and a test instance");
  check->add_option("reference", ref_path, "reference .lp file")->required();
  check->add_option("test", test_path, "test .lp file")->required();
  add_mode(check);
  check->add_flag("--json", json, "emit the JSON report");
  check->add_flag("--oracle", oracle,
                  "also run the exhaustive oracle when within budget");

  CLI::App* sd = app.add_subcommand(
      "sd", "detect whether an instance is symmetric decomposable");
  sd->add_option("file", ref_path, ".lp file")->required();
  add_mode(sd);
  sd->add_flag("--json", json, "emit the JSON report");

  CLI::App* wl =
      app.add_subcommand("wl", "run color refinement to stabilization");
  wl->add_option("file", ref_path, ".lp file")->required();
  add_mode(wl);
  wl->add_flag("--dump-colors", dump, "print the canonical color dump");
  wl->add_option("--rounds", max_rounds,
                 "round cap (must be at least m+n; default m+n)");

  CLI::App* sample = app.add_subcommand(
      "sample", "instantiate templates, measure SD rate or consistency");
  sample->add_option("template", ref_path, "template file")->required();
  sample->add_option("test_template", test_path,
                     "second template for a consistency run");
  add_mode(sample);
  sample->add_option("--configs", configs, "number of sampled configs");
  sample->add_option("--seed", seed, "sampling seed");
  sample->add_option("--sd-rate", sd_rate_samples,
                     "sample N instantiations and report the SD fraction");
  sample->add_option("--data", data_path,
                     "parameter file pinning exact values; prints the "
                     "instantiated instance");
  sample->add_option("--out", out_prefix, "output path prefix for instances");
  sample->add_flag("--json", json, "emit JSON reports");

  CLI::App* batch =
      app.add_subcommand("batch", "evaluate a manifest of instance pairs");
  batch->add_option("manifest", ref_path, "manifest JSON file")->required();
  add_mode(batch);
  batch->add_flag("--json", json, "emit the JSON report");
  batch->add_option("--jobs", jobs, "worker count (output is independent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(check))
      return cmd_check(ref_path, test_path, mode, json, oracle);
    if (app.got_subcommand(sd)) return cmd_sd(ref_path, mode, json);
    if (app.got_subcommand(wl)) return cmd_wl(ref_path, mode, dump, max_rounds);
    if (app.got_subcommand(sample))
      return cmd_sample(ref_path, test_path, mode, configs, seed,
                        sd_rate_samples, data_path, out_prefix, json);
    if (app.got_subcommand(batch))
      return cmd_batch(ref_path, mode, json, jobs);
  } catch (const milpeq::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
