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

// End-to-end checks of the milpeq binary. The binary path and the fixture
// directory come from the MILPEQ_CLI / MILPEQ_FIXTURES environment
// variables, wired up by CTest.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("MILPEQ_CLI");
  REQUIRE_MESSAGE(env != nullptr, "MILPEQ_CLI must point at the binary");
  return env;
}

fs::path fixture_dir() {
  const char* env = std::getenv("MILPEQ_FIXTURES");
  REQUIRE_MESSAGE(env != nullptr, "MILPEQ_FIXTURES must point at fixtures/");
  return fs::path(env);
}

std::string fixture(const std::string& rel) {
  return (fixture_dir() / rel).string();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  static int counter = 0;
  fs::path out_file = fs::temp_directory_path() /
                      ("milpeq-cli-out-" + std::to_string(::getpid()) + "-" +
                       std::to_string(counter++));
  std::string command =
      "'" + cli_path() + "' " + args + " >'" + out_file.string() + "' 2>&1";
  int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.out = buffer.str();
  fs::remove(out_file);
  return result;
}

std::string mask_elapsed(std::string text) {
  static const std::regex pattern("\"elapsed_ms\": [0-9.e+-]+");
  return std::regex_replace(text, pattern, "\"elapsed_ms\": 0");
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("milpeq-cli-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) {
    fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("check: permuted copy is equivalent with exit 0") {
  TempDir dir;
  std::string permuted = dir.file("permuted.lp",
                                  "Minimize\n obj: 2 q + p\n"
                                  "Subject To\n r: q + p <= 3\n"
                                  "Bounds\n q free\n p free\nEnd\n");
  CliResult r = run("check " + fixture("lp/01_minimal.lp") + " " + permuted);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Equivalent -- guaranteed (both instances symmetric "
                   "decomposable)") != std::string::npos);
}

TEST_CASE("check: rhs change exits 1") {
  TempDir dir;
  std::string changed = dir.file("changed.lp",
                                 "Minimize\n obj: x + 2 y\n"
                                 "Subject To\n c1: x + y <= 4\n"
                                 "Bounds\n x free\n y free\nEnd\n");
  CliResult r = run("check " + fixture("lp/01_minimal.lp") + " " + changed);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("coloring multisets differ") != std::string::npos);
}

TEST_CASE("check: missing file exits 2") {
  CliResult r =
      run("check " + fixture("lp/01_minimal.lp") + " /nonexistent/zzz.lp");
  CHECK(r.exit_code == 2);
}

TEST_CASE("check: unparsable file exits 2 with diagnostics") {
  TempDir dir;
  std::string bad = dir.file("bad.lp", "this is not an lp file\n");
  CliResult r = run("check " + fixture("lp/01_minimal.lp") + " " + bad);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("error") != std::string::npos);
}

TEST_CASE("check --json --oracle on the WL counterexample") {
  CliResult r = run("check " + fixture("lp/42_cycle8.lp") + " " +
                    fixture("lp/43_two_four_cycles.lp") + " --json --oracle");
  CHECK(r.exit_code == 1);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "not-equivalent");
  CHECK(j["reason"] == "test-not-sd");
  CHECK(j["multisets_equal"] == true);
  CHECK(j["guaranteed"] == false);
  CHECK(j["oracle_isomorphic"] == false);
  CHECK(j["oracle_agrees"] == true);
}

TEST_CASE("sd: bin packing, cycle and unfoldable fixtures") {
  CliResult bp = run("sd " + fixture("lp/41_binpacking.lp"));
  CHECK(bp.exit_code == 0);
  CHECK(bp.out.find("symmetric decomposable, k=3") != std::string::npos);

  CliResult cyc = run("sd " + fixture("lp/42_cycle8.lp"));
  CHECK(cyc.exit_code == 1);
  CHECK(cyc.out.find("not SD: repeated-color-in-cluster") !=
        std::string::npos);

  CliResult tiny = run("sd " + fixture("lp/01_minimal.lp"));
  CHECK(tiny.exit_code == 0);
  CHECK(tiny.out.find("symmetric decomposable, k=0 (unfoldable)") !=
        std::string::npos);
}

TEST_CASE("sd --json") {
  CliResult r = run("sd " + fixture("lp/41_binpacking.lp") + " --json");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["is_sd"] == true);
  CHECK(j["k"] == 3);
  CHECK(j["clusters"].size() == 3);
  CHECK(j["num_excluded"] == 2);
}

TEST_CASE("wl: round counts and deterministic dumps") {
  CliResult tiny = run("wl " + fixture("lp/01_minimal.lp"));
  CHECK(tiny.exit_code == 0);
  CHECK(tiny.out.find("stable after 0 refinement rounds, 3 colors") !=
        std::string::npos);

  CliResult cyc = run("wl " + fixture("lp/42_cycle8.lp"));
  CHECK(cyc.out.find("2 colors") != std::string::npos);

  CliResult a = run("wl " + fixture("lp/41_binpacking.lp") + " --dump-colors");
  CliResult b = run("wl " + fixture("lp/41_binpacking.lp") + " --dump-colors");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("stable after 2 refinement rounds, 6 colors") !=
        std::string::npos);
}

TEST_CASE("wl --rounds below the bound is a usage error") {
  CliResult r = run("wl " + fixture("lp/01_minimal.lp") + " --rounds 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("sample: sd-rate and deterministic instance emission") {
  CliResult rate =
      run("sample " + fixture("tpl/blending.tpl") + " --sd-rate 25 --seed 3");
  CHECK(rate.exit_code == 0);
  CHECK(rate.out.find("sd_rate = 1.000") != std::string::npos);

  TempDir dir;
  std::string prefix1 = (dir.path / "one").string();
  std::string prefix2 = (dir.path / "two").string();
  CliResult s1 = run("sample " + fixture("tpl/blending.tpl") +
                     " --configs 2 --seed 7 --out " + prefix1);
  CliResult s2 = run("sample " + fixture("tpl/blending.tpl") +
                     " --configs 2 --seed 7 --out " + prefix2);
  CHECK(s1.exit_code == 0);
  CHECK(s2.exit_code == 0);
  for (int i = 0; i < 2; ++i) {
    std::ifstream f1(prefix1 + std::to_string(i) + ".lp");
    std::ifstream f2(prefix2 + std::to_string(i) + ".lp");
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    CHECK(b1.str() == b2.str());
    CHECK(!b1.str().empty());
  }
}

TEST_CASE("sample: consistency over two templates") {
  CliResult r = run("sample " + fixture("tpl/blending.tpl") + " " +
                    fixture("tpl/blending_reordered.tpl") +
                    " --configs 5 --seed 11");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("consistent across 5 configurations") != std::string::npos);

  CliResult broken = run("sample " + fixture("tpl/blending.tpl") + " " +
                         fixture("tpl/blending_flipped.tpl") +
                         " --configs 5 --seed 11");
  CHECK(broken.exit_code == 1);  // consistent, but not equivalent
  CHECK(broken.out.find("not-equivalent (coloring-mismatch)") !=
        std::string::npos);
}

TEST_CASE("sample: pinned data file") {
  CliResult r = run("sample " + fixture("tpl/blending.tpl") + " --data " +
                    fixture("tpl/pinned.dat"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Minimize") != std::string::npos);
  CHECK(r.out.find("3 x1 + 5 x2 + 2 x3") != std::string::npos);
  CHECK(r.out.find("1/2 x1 + 3/4 x2 + x3 >= 18") != std::string::npos);
}

TEST_CASE("sample: template errors exit 2") {
  TempDir dir;
  std::string bad = dir.file("bad.tpl",
                             "Minimize obj: ${c} x Subject To r: x <= 1 "
                             "Parameters c uniform 5 1 End\n");
  CliResult r = run("sample " + bad + " --sd-rate 5");
  CHECK(r.exit_code == 2);
}

TEST_CASE("batch: table, accuracy and exit codes") {
  TempDir dir;
  std::string changed = dir.file("changed.lp",
                                 "Minimize\n obj: x + 2 y\n"
                                 "Subject To\n c1: x + y <= 4\n"
                                 "Bounds\n x free\n y free\nEnd\n");
  std::string bad = dir.file("bad.lp", "garbage");
  nlohmann::json manifest = nlohmann::json::array(
      {{{"id", "same"},
        {"reference", fixture("lp/01_minimal.lp")},
        {"test", fixture("lp/01_minimal.lp")}},
       {{"id", "rhs"},
        {"reference", fixture("lp/01_minimal.lp")},
        {"test", changed}},
       {{"id", "bad"},
        {"reference", fixture("lp/01_minimal.lp")},
        {"test", bad}}});
  std::string path = dir.file("manifest.json", manifest.dump());

  CliResult r = run("batch " + path);
  CHECK(r.exit_code == 2);  // entry error present
  CHECK(r.out.find("accuracy: 50.0% (1/2 pairs equivalent)") !=
        std::string::npos);

  nlohmann::json ok_manifest = nlohmann::json::array(
      {{{"id", "same"},
        {"reference", fixture("lp/01_minimal.lp")},
        {"test", fixture("lp/01_minimal.lp")}}});
  std::string ok_path = dir.file("ok.json", ok_manifest.dump());
  CHECK(run("batch " + ok_path).exit_code == 0);
}

TEST_CASE("batch: empty manifest exits 0") {
  TempDir dir;
  std::string path = dir.file("empty.json", "[]");
  CliResult r = run("batch " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 entries") != std::string::npos);
}

TEST_CASE("batch: --jobs does not change the output") {
  TempDir dir;
  nlohmann::json manifest = nlohmann::json::array();
  for (const char* name :
       {"37_knapsack.lp", "38_transportation.lp", "39_blending.lp",
        "40_assignment.lp", "41_binpacking.lp", "47_facility.lp"}) {
    manifest.push_back({{"id", name},
                        {"reference", fixture(std::string("lp/") + name)},
                        {"test", fixture(std::string("lp/") + name)}});
  }
  std::string path = dir.file("manifest.json", manifest.dump());
  CliResult serial = run("batch " + path + " --jobs 1");
  CliResult parallel = run("batch " + path + " --jobs 8");
  CHECK(serial.exit_code == 0);
  CHECK(serial.out == parallel.out);

  CliResult js = run("batch " + path + " --jobs 1 --json");
  CliResult jp = run("batch " + path + " --jobs 8 --json");
  CHECK(mask_elapsed(js.out) == mask_elapsed(jp.out));
}

TEST_CASE("sum mode prints its banner and stays deterministic") {
  CliResult r = run("check " + fixture("lp/01_minimal.lp") + " " +
                    fixture("lp/01_minimal.lp") + " --mode sum");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("weighted-sum mode") != std::string::npos);
}

TEST_CASE("determinism: identical runs produce identical bytes") {
  CliResult a = run("check " + fixture("lp/41_binpacking.lp") + " " +
                    fixture("lp/41_binpacking.lp") + " --json");
  CliResult b = run("check " + fixture("lp/41_binpacking.lp") + " " +
                    fixture("lp/41_binpacking.lp") + " --json");
  CHECK(mask_elapsed(a.out) == mask_elapsed(b.out));
}
