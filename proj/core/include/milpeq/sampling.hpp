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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "milpeq/equivalence.hpp"
#include "milpeq/instance.hpp"
#include "milpeq/lp_format.hpp"

namespace milpeq {

/// A coefficient position in a model template: either a literal rational
/// or a (possibly negated) reference to a named parameter.
struct CoeffSlot {
  Rational literal = 0;
  int param = -1;  // index into ModelTemplate::parameter_names, -1 = literal
  int param_sign = 1;

  bool is_param() const { return param >= 0; }
  static CoeffSlot of_literal(Rational value) {
    CoeffSlot s;
    s.literal = std::move(value);
    return s;
  }
  static CoeffSlot of_parameter(int index, int sign = 1) {
    CoeffSlot s;
    s.param = index;
    s.param_sign = sign;
    return s;
  }
  bool operator==(const CoeffSlot&) const = default;
};

struct TemplateRow {
  std::vector<std::pair<int, CoeffSlot>> coeffs;  // sorted by variable index
  Sense sense = Sense::kLe;
  CoeffSlot rhs;
};

/// A parameterized model: an instance skeleton whose objective entries,
/// row coefficients and right-hand sides may reference named parameters.
/// Structure (shape, senses, kinds) is fixed; values are free.
struct ModelTemplate {
  ObjectiveSense objective_sense = ObjectiveSense::kMinimize;
  int num_vars = 0;
  std::vector<CoeffSlot> objective;
  std::vector<VarKind> var_kinds;
  std::vector<TemplateRow> rows;
  std::vector<std::string> parameter_names;  // declaration order
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;

  int num_constraints() const { return static_cast<int>(rows.size()); }
};

/// Every parameter reference names a declared parameter and every declared
/// parameter is referenced at least once.
std::vector<Violation> validate_template(const ModelTemplate& t);

struct ParamDistribution {
  enum class Kind { kContinuousUniform, kDiscreteUniform };
  Kind kind = Kind::kContinuousUniform;
  Rational lo, hi;               // continuous: lo < hi
  std::vector<Rational> values;  // discrete: non-empty, distinct
};

/// Per-parameter sampling distributions, aligned with a template's
/// parameter names.
struct ParameterSpec {
  std::vector<std::string> names;
  std::vector<ParamDistribution> distributions;

  int index_of(std::string_view name) const;
  int size() const { return static_cast<int>(names.size()); }
};

/// Concrete values, one per declared parameter.
struct ParameterConfig {
  std::vector<std::string> names;
  std::vector<Rational> values;

  const Rational* find(std::string_view name) const;
};

/// Template file: the LP dialect extended with ${name} placeholders in
/// coefficient positions and a "Parameters" section before "End":
///
///   parameters := "parameters" ( name "uniform" val val
///                              | name "discrete" val+ )*
struct TemplateDocument {
  std::optional<ModelTemplate> model;
  ParameterSpec spec;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

TemplateDocument parse_template(std::string_view text);

/// "name = value" lines, '#' or '\' comments. A pinned-value data file that
/// can be fed to instantiate() in place of a sampled config.
std::optional<ParameterConfig> parse_parameter_file(
    std::string_view text, std::vector<ParseDiagnostic>& diagnostics);

struct InstantiationResult {
  Instance instance;
  std::vector<std::string> warnings;  // one per dropped structural zero
};

/// Substitutes cfg into every slot. A row coefficient that becomes zero is
/// dropped as a structural zero with a warning. Throws
/// std::invalid_argument on a missing parameter or when the result fails
/// validation (e.g. a fully zero row).
InstantiationResult instantiate(const ModelTemplate& t,
                                const ParameterConfig& cfg);

/// Draws one value per parameter, deterministically for a fixed seed.
/// Continuous draws land on the dyadic grid lo + (hi-lo) * u / 2^64 with u
/// uniform in [0, 2^64), keeping everything exact while making collisions
/// between independent draws vanishingly unlikely (<= 2^-64 per pair).
ParameterConfig sample_config(const ParameterSpec& spec, std::uint64_t seed);

struct SdRateReport {
  int num_samples = 0;
  int sd_count = 0;
  int error_count = 0;  // instantiation failures, reported separately
  double rate = 0.0;    // sd_count / num_samples
};

/// Fraction of num_samples independently sampled instantiations whose
/// encoding passes SD detection.
SdRateReport sd_rate(const ModelTemplate& t, const ParameterSpec& spec,
                     int num_samples, std::uint64_t seed);

struct ConsistencyReport {
  int num_configs = 0;
  std::vector<EquivalenceReport> reports;  // one per sampled config
  bool consistent = false;  // all verdicts (value and reason) equal
  int sd_count = 0;         // configs where both instances were SD
};

/// Samples num_configs configs; each round instantiates BOTH templates
/// with the same config and runs check_equivalence. The two templates must
/// declare the same parameter set (std::invalid_argument otherwise).
ConsistencyReport evaluate_consistency(const ModelTemplate& reference,
                                       const ModelTemplate& test,
                                       const ParameterSpec& spec,
                                       int num_configs, std::uint64_t seed,
                                       const CheckOptions& options = {});

std::string consistency_report_to_json(const ConsistencyReport& report);

}  // namespace milpeq
