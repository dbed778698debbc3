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
#include <vector>

#include "milpeq/sampling.hpp"

namespace milpeq {

/// One manifest record. Plain entries name two LP files and produce an
/// EquivalenceReport; template entries name two template files and produce
/// a ConsistencyReport over `num_configs` shared-parameter samples.
struct BatchEntry {
  std::string id;
  std::string reference_path;
  std::string test_path;
  bool is_template = false;
  int num_configs = 5;
  std::uint64_t seed = 0;
};

struct BatchEntryResult {
  enum class Kind { kPair, kConsistency, kError };
  std::string id;
  Kind kind = Kind::kError;
  std::optional<EquivalenceReport> pair;
  std::optional<ConsistencyReport> consistency;
  std::string error;

  /// Equivalent outcome: pair verdict Equivalent, or a consistent
  /// all-Equivalent consistency run.
  bool equivalent() const;
};

struct BatchReport {
  std::vector<BatchEntryResult> entries;  // manifest order
  int num_decided = 0;     // entries without errors
  int num_equivalent = 0;  // decided entries with an Equivalent outcome
  std::optional<double> accuracy;  // num_equivalent / num_decided, null if 0
};

/// Manifest: a JSON array of {id, reference, test, template?, configs?,
/// seed?} objects. Returns nullopt with `error` set on malformed input.
std::optional<std::vector<BatchEntry>> parse_manifest(std::string_view text,
                                                      std::string& error);

/// Evaluates all entries, `jobs` at a time. Per-entry file and parse
/// errors are recorded in place without aborting the batch. Results keep
/// manifest order and are byte-identical for any job count; per-entry
/// random streams derive from (entry seed, entry index).
BatchReport batch_evaluate(const std::vector<BatchEntry>& entries,
                           const CheckOptions& options = {}, int jobs = 1);

std::string batch_report_to_json(const BatchReport& report);
std::string batch_report_to_text(const BatchReport& report);

}  // namespace milpeq
