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

#include "milpeq/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

#include "milpeq/rng.hpp"

namespace milpeq {

int ParameterSpec::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

const Rational* ParameterConfig::find(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return &values[i];
  return nullptr;
}

std::vector<Violation> validate_template(const ModelTemplate& t) {
  std::vector<Violation> out;
  const int num_params = static_cast<int>(t.parameter_names.size());
  std::vector<bool> referenced(num_params, false);
  auto check_slot = [&](const CoeffSlot& slot, int row, int var) {
    if (!slot.is_param()) return;
    if (slot.param >= num_params)
      out.push_back({"parameter reference out of range", row, var});
    else
      referenced[slot.param] = true;
  };
  for (int j = 0; j < static_cast<int>(t.objective.size()); ++j)
    check_slot(t.objective[j], -1, j);
  for (int i = 0; i < t.num_constraints(); ++i) {
    for (const auto& [j, slot] : t.rows[i].coeffs) check_slot(slot, i, j);
    check_slot(t.rows[i].rhs, i, -1);
  }
  for (int p = 0; p < num_params; ++p) {
    if (!referenced[p])
      out.push_back({"parameter '" + t.parameter_names[p] +
                     "' declared but never referenced"});
  }
  return out;
}

std::optional<ParameterConfig> parse_parameter_file(
    std::string_view text, std::vector<ParseDiagnostic>& diagnostics) {
  ParameterConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  bool failed = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    std::size_t cut = line.find_first_of("#\\");
    if (cut != std::string_view::npos) line = line.substr(0, cut);
    auto strip = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
      return s;
    };
    line = strip(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      diagnostics.push_back(
          {line_no, 1, Severity::kError, "expected 'name = value'"});
      failed = true;
      continue;
    }
    std::string name(strip(line.substr(0, eq)));
    std::string_view value = strip(line.substr(eq + 1));
    auto parsed = try_parse_rational(value);
    if (name.empty() || !parsed) {
      diagnostics.push_back(
          {line_no, 1, Severity::kError, "expected 'name = value'"});
      failed = true;
      continue;
    }
    if (cfg.find(name)) {
      diagnostics.push_back({line_no, 1, Severity::kError,
                             "duplicate parameter '" + name + "'"});
      failed = true;
      continue;
    }
    cfg.names.push_back(std::move(name));
    cfg.values.push_back(std::move(*parsed));
  }
  if (failed) return std::nullopt;
  return cfg;
}

InstantiationResult instantiate(const ModelTemplate& t,
                                const ParameterConfig& cfg) {
  auto violations = validate_template(t);
  if (!violations.empty())
    throw std::invalid_argument("invalid template: " +
                                violations.front().message);

  auto resolve = [&](const CoeffSlot& slot) -> Rational {
    if (!slot.is_param()) return slot.literal;
    const std::string& name = t.parameter_names[slot.param];
    const Rational* value = cfg.find(name);
    if (!value)
      throw std::invalid_argument("missing parameter '" + name + "'");
    return slot.param_sign > 0 ? *value : Rational(-*value);
  };

  InstantiationResult out;
  Instance& inst = out.instance;
  inst.objective_sense = t.objective_sense;
  inst.num_vars = t.num_vars;
  inst.var_kinds = t.var_kinds;
  inst.var_names = t.var_names;
  inst.row_names = t.row_names;
  inst.objective.reserve(t.num_vars);
  for (const CoeffSlot& slot : t.objective)
    inst.objective.push_back(resolve(slot));

  for (int i = 0; i < t.num_constraints(); ++i) {
    ConstraintRow row;
    row.sense = t.rows[i].sense;
    row.rhs = resolve(t.rows[i].rhs);
    for (const auto& [j, slot] : t.rows[i].coeffs) {
      Rational value = resolve(slot);
      if (value == 0) {
        out.warnings.push_back("structural zero dropped at row " +
                               std::to_string(i) + ", variable " +
                               std::to_string(j));
        continue;
      }
      row.coeffs.emplace_back(j, std::move(value));
    }
    inst.rows.push_back(std::move(row));
  }

  auto inst_violations = validate_instance(inst);
  if (!inst_violations.empty())
    throw std::invalid_argument("instance invalid after substitution: " +
                                inst_violations.front().message);
  return out;
}

ParameterConfig sample_config(const ParameterSpec& spec, std::uint64_t seed) {
  if (spec.names.size() != spec.distributions.size())
    throw std::invalid_argument("parameter spec names/distributions mismatch");
  ParameterConfig cfg;
  cfg.names = spec.names;
  cfg.values.reserve(spec.names.size());
  Rng rng(seed);
  // 2^64 grid denominator for continuous draws
  Integer grid = 1;
  grid <<= 64;
  for (const ParamDistribution& dist : spec.distributions) {
    if (dist.kind == ParamDistribution::Kind::kContinuousUniform) {
      std::uint64_t u = rng.next();
      Rational offset = make_rational(Integer(u), grid);
      cfg.values.push_back(dist.lo + (dist.hi - dist.lo) * offset);
    } else {
      if (dist.values.empty())
        throw std::invalid_argument("empty discrete distribution");
      std::uint64_t pick = rng.bounded(dist.values.size());
      cfg.values.push_back(dist.values[pick]);
    }
  }
  return cfg;
}

SdRateReport sd_rate(const ModelTemplate& t, const ParameterSpec& spec,
                     int num_samples, std::uint64_t seed) {
  if (num_samples < 1)
    throw std::invalid_argument("sd_rate needs at least one sample");
  SdRateReport report;
  report.num_samples = num_samples;
  for (int i = 0; i < num_samples; ++i) {
    ParameterConfig cfg = sample_config(spec, derive_seed(seed, i));
    try {
      InstantiationResult result = instantiate(t, cfg);
      BipartiteGraph g = encode(result.instance);
      Coloring coloring = run_wl(g);
      StablePartition partition = stable_partition(g, coloring, 0);
      SdReport sd = detect_symmetric_decomposable(g, coloring, 0, partition);
      if (sd.is_sd) ++report.sd_count;
    } catch (const std::invalid_argument&) {
      ++report.error_count;
    }
  }
  report.rate = static_cast<double>(report.sd_count) / num_samples;
  return report;
}

ConsistencyReport evaluate_consistency(const ModelTemplate& reference,
                                       const ModelTemplate& test,
                                       const ParameterSpec& spec,
                                       int num_configs, std::uint64_t seed,
                                       const CheckOptions& options) {
  if (num_configs < 1)
    throw std::invalid_argument("need at least one configuration");
  {
    std::set<std::string> ref_params(reference.parameter_names.begin(),
                                     reference.parameter_names.end());
    std::set<std::string> test_params(test.parameter_names.begin(),
                                      test.parameter_names.end());
    if (ref_params != test_params)
      throw std::invalid_argument(
          "templates do not share a parameter support");
    for (const std::string& name : ref_params)
      if (spec.index_of(name) < 0)
        throw std::invalid_argument("spec is missing parameter '" + name +
                                    "'");
  }

  ConsistencyReport report;
  report.num_configs = num_configs;
  for (int round = 0; round < num_configs; ++round) {
    // both templates consume the identical config in each round
    ParameterConfig cfg = sample_config(spec, derive_seed(seed, round));
    InstantiationResult ref_inst = instantiate(reference, cfg);
    InstantiationResult test_inst = instantiate(test, cfg);
    EquivalenceReport r =
        check_equivalence(ref_inst.instance, test_inst.instance, options);
    if (r.guaranteed) ++report.sd_count;
    report.reports.push_back(std::move(r));
  }
  report.consistent = std::all_of(
      report.reports.begin(), report.reports.end(),
      [&](const EquivalenceReport& r) {
        return r.verdict == report.reports.front().verdict &&
               r.reason == report.reports.front().reason;
      });
  return report;
}

std::string consistency_report_to_json(const ConsistencyReport& report) {
  nlohmann::json j;
  j["num_configs"] = report.num_configs;
  j["consistent"] = report.consistent;
  j["sd_count"] = report.sd_count;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const EquivalenceReport& r : report.reports) {
    verdicts.push_back(
        {{"verdict", to_string(r.verdict)}, {"reason", to_string(r.reason)}});
  }
  j["verdicts"] = verdicts;
  return j.dump(2);
}

}  // namespace milpeq
