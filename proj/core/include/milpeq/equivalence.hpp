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

#include "milpeq/sd.hpp"

namespace milpeq {

enum class Verdict { kEquivalent, kNotEquivalent };

enum class Reason {
  kNone,  // Equivalent
  kColoringMismatch,
  kTestNotSd,
  kReferenceNotSd,
  kSenseMismatch,
  kDimensionMismatch,
};

const char* to_string(Verdict verdict);
const char* to_string(Reason reason);

/// One color whose multiplicities differ between the two graphs.
struct MultisetDiff {
  char side = 'c';  // 'c' constraint, 'v' variable
  int color = 0;
  long reference_count = 0;
  long test_count = 0;
};

/// Full evidence for an equivalence verdict. `guaranteed` is true iff
/// both instances were found symmetric decomposable, in which case the
/// verdict is exact; otherwise a NotEquivalent on matching colorings is
/// the conservative branch of the decision rule.
struct EquivalenceReport {
  Verdict verdict = Verdict::kNotEquivalent;
  Reason reason = Reason::kNone;
  bool guaranteed = false;
  bool multisets_equal = false;
  std::optional<SdReport> sd_reference;
  std::optional<SdReport> sd_test;
  int wl_rounds = 0;
  double elapsed_ms = 0.0;
  std::vector<MultisetDiff> multiset_diff;  // at most 5 entries
};

struct CheckOptions {
  WlMode mode = WlMode::kPairMultiset;
};

/// Decides equivalence of two instances: O(1) dimension and objective-
/// sense pre-checks, joint refinement, per-side multiset comparison, then
/// SD detection on both graphs. Equivalent requires equal multisets and
/// both instances SD; equal multisets with a non-SD test instance yield
/// the conservative NotEquivalent(test-not-sd). Inputs must pass
/// validate_instance (std::invalid_argument otherwise).
EquivalenceReport check_equivalence(const Instance& reference,
                                    const Instance& test,
                                    const CheckOptions& options = {});

/// Exhaustive ground truth for small instances: true iff some variable
/// and row permutation maps `a` exactly onto `b`. Only feature-class
/// preserving variable permutations are enumerated (lossless pruning:
/// any such permutation must map equal-feature nodes to equal-feature
/// nodes), and for each the row mapping reduces to an exact multiset
/// comparison. Returns nullopt when n or m exceeds size_limit or the
/// enumeration would exceed `budget` candidates - never a wrong answer.
std::optional<bool> brute_force_isomorphic(const Instance& a,
                                           const Instance& b,
                                           int size_limit = 8,
                                           std::uint64_t budget = 10'000'000);

/// Deterministic human-readable summary naming the deciding branch.
std::string explain_report(const EquivalenceReport& report);

/// Stable-field JSON: {verdict, reason, guaranteed, multisets_equal,
/// wl_rounds, k_reference, k_test, sd_failure_reference, sd_failure_test,
/// elapsed_ms}.
std::string report_to_json(const EquivalenceReport& report);

}  // namespace milpeq
