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

#include "milpeq/batch.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "milpeq/rng.hpp"

namespace milpeq {

bool BatchEntryResult::equivalent() const {
  if (kind == Kind::kPair)
    return pair && pair->verdict == Verdict::kEquivalent;
  if (kind == Kind::kConsistency) {
    return consistency && consistency->consistent &&
           !consistency->reports.empty() &&
           consistency->reports.front().verdict == Verdict::kEquivalent;
  }
  return false;
}

std::optional<std::vector<BatchEntry>> parse_manifest(std::string_view text,
                                                      std::string& error) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    error = "manifest must be a JSON array of entries";
    return std::nullopt;
  }
  std::vector<BatchEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const nlohmann::json& e = doc[i];
    if (!e.is_object() || !e.contains("reference") || !e.contains("test") ||
        !e["reference"].is_string() || !e["test"].is_string()) {
      error = "entry " + std::to_string(i) +
              " must be an object with 'reference' and 'test' paths";
      return std::nullopt;
    }
    BatchEntry entry;
    entry.id = e.value("id", "entry-" + std::to_string(i));
    entry.reference_path = e["reference"].get<std::string>();
    entry.test_path = e["test"].get<std::string>();
    entry.is_template = e.value("template", false);
    entry.num_configs = e.value("configs", 5);
    entry.seed = e.value("seed", 0ULL);
    if (entry.num_configs < 1) {
      error = "entry " + std::to_string(i) + " has configs < 1";
      return std::nullopt;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

std::optional<std::string> read_file(const std::string& path,
                                     std::string& error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot open '" + path + "'";
    return std::nullopt;
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_error(const std::vector<ParseDiagnostic>& diagnostics) {
  for (const ParseDiagnostic& d : diagnostics) {
    if (d.severity == Severity::kError) {
      return "line " + std::to_string(d.line) + ":" +
             std::to_string(d.column) + ": " + d.message;
    }
  }
  return "parse failed";
}

BatchEntryResult evaluate_entry(const BatchEntry& entry, std::size_t index,
                                const CheckOptions& options) {
  BatchEntryResult result;
  result.id = entry.id;
  result.kind = BatchEntryResult::Kind::kError;

  std::string error;
  auto ref_text = read_file(entry.reference_path, error);
  if (!ref_text) {
    result.error = error;
    return result;
  }
  auto test_text = read_file(entry.test_path, error);
  if (!test_text) {
    result.error = error;
    return result;
  }

  try {
    if (entry.is_template) {
      TemplateDocument ref_doc = parse_template(*ref_text);
      if (!ref_doc.ok()) {
        result.error = entry.reference_path + ": " +
                       first_error(ref_doc.diagnostics);
        return result;
      }
      TemplateDocument test_doc = parse_template(*test_text);
      if (!test_doc.ok()) {
        result.error = entry.test_path + ": " +
                       first_error(test_doc.diagnostics);
        return result;
      }
      result.consistency = evaluate_consistency(
          *ref_doc.model, *test_doc.model, ref_doc.spec, entry.num_configs,
          derive_seed(entry.seed, index), options);
      result.kind = BatchEntryResult::Kind::kConsistency;
    } else {
      LpDocument ref_doc = parse_lp(*ref_text);
      if (!ref_doc.ok()) {
        result.error = entry.reference_path + ": " +
                       first_error(ref_doc.diagnostics);
        return result;
      }
      LpDocument test_doc = parse_lp(*test_text);
      if (!test_doc.ok()) {
        result.error = entry.test_path + ": " +
                       first_error(test_doc.diagnostics);
        return result;
      }
      result.pair =
          check_equivalence(*ref_doc.instance, *test_doc.instance, options);
      result.kind = BatchEntryResult::Kind::kPair;
    }
  } catch (const std::invalid_argument& e) {
    result.kind = BatchEntryResult::Kind::kError;
    result.error = e.what();
  }
  return result;
}

}  // namespace

BatchReport batch_evaluate(const std::vector<BatchEntry>& entries,
                           const CheckOptions& options, int jobs) {
  BatchReport report;
  report.entries.resize(entries.size());
  if (jobs < 1) jobs = 1;

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t index = cursor.fetch_add(1);
      if (index >= entries.size()) break;
      report.entries[index] = evaluate_entry(entries[index], index, options);
    }
  };
  if (jobs == 1 || entries.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int count = std::min<int>(jobs, static_cast<int>(entries.size()));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (const BatchEntryResult& r : report.entries) {
    if (r.kind == BatchEntryResult::Kind::kError) continue;
    ++report.num_decided;
    if (r.equivalent()) ++report.num_equivalent;
  }
  if (report.num_decided > 0)
    report.accuracy =
        static_cast<double>(report.num_equivalent) / report.num_decided;
  return report;
}

std::string batch_report_to_json(const BatchReport& report) {
  nlohmann::json j;
  nlohmann::json entries = nlohmann::json::array();
  for (const BatchEntryResult& r : report.entries) {
    nlohmann::json e;
    e["id"] = r.id;
    switch (r.kind) {
      case BatchEntryResult::Kind::kPair: {
        e["type"] = "pair";
        e["report"] = nlohmann::json::parse(report_to_json(*r.pair));
        break;
      }
      case BatchEntryResult::Kind::kConsistency: {
        e["type"] = "consistency";
        e["report"] =
            nlohmann::json::parse(consistency_report_to_json(*r.consistency));
        break;
      }
      case BatchEntryResult::Kind::kError: {
        e["type"] = "error";
        e["error"] = r.error;
        break;
      }
    }
    entries.push_back(std::move(e));
  }
  j["entries"] = entries;
  j["num_entries"] = report.entries.size();
  j["num_decided"] = report.num_decided;
  j["num_equivalent"] = report.num_equivalent;
  if (report.accuracy)
    j["accuracy"] = *report.accuracy;
  else
    j["accuracy"] = nullptr;
  return j.dump(2);
}

std::string batch_report_to_text(const BatchReport& report) {
  std::ostringstream os;
  for (const BatchEntryResult& r : report.entries) {
    os << r.id << ": ";
    switch (r.kind) {
      case BatchEntryResult::Kind::kPair:
        os << to_string(r.pair->verdict);
        if (r.pair->verdict == Verdict::kNotEquivalent)
          os << " (" << to_string(r.pair->reason) << ")";
        break;
      case BatchEntryResult::Kind::kConsistency:
        os << (r.consistency->consistent ? "consistent" : "INCONSISTENT")
           << " over " << r.consistency->num_configs << " configs, "
           << to_string(r.consistency->reports.front().verdict);
        break;
      case BatchEntryResult::Kind::kError:
        os << "entry-error: " << r.error;
        break;
    }
    os << "\n";
  }
  os << report.entries.size() << " entries, " << report.num_decided
     << " decided, " << report.num_equivalent << " equivalent\n";
  if (report.accuracy) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", *report.accuracy * 100.0);
    os << "accuracy: " << buf << "% (" << report.num_equivalent << "/"
       << report.num_decided << " pairs equivalent)\n";
  } else {
    os << "accuracy: n/a (no decided entries)\n";
  }
  return os.str();
}

}  // namespace milpeq
