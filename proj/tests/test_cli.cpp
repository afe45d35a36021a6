// Copyright 2026 The vnfprof Authors.
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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace vnfprof;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(VNFPROF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string capture(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(VNFPROF_CLI_PATH) + " " + args + " >" + out.string() + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

struct Pipeline {
  vnfprof::testing::TempDir dir{"cli"};
  fs::path gen = dir / "gen";
  fs::path profile = dir / "profile.json";
  Pipeline() {
    write(dir / "grid.json", grid_to_json(vnfprof::testing::small_forwarding_grid()));
    REQUIRE(run("generate --vnf forwarding --grid " + q(dir / "grid.json") + " --seed 7 --out " + q(gen)) == 0);
    REQUIRE(run("fit --data " + q(gen / "dataset.csv") + " --schema " + q(gen / "schema.json") + " --out " + q(profile)) == 0);
  }
};

}  // namespace

TEST_CASE("generate is deterministic for a seed") {
  vnfprof::testing::TempDir d("cli_gen");
  write(d / "grid.json", grid_to_json(vnfprof::testing::small_forwarding_grid()));
  for (const char* sub : {"a", "b"})
    REQUIRE(run("generate --vnf forwarding --grid " + q(d / "grid.json") + " --seed 7 --out " + q(d / sub)) == 0);
  for (const char* f : {"dataset.csv", "schema.json", "ground_truth.json"}) {
    CHECK(!slurp(d / "a" / f).empty());
    CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
  }
  REQUIRE(run("generate --vnf forwarding --grid " + q(d / "grid.json") + " --seed 8 --out " + q(d / "c")) == 0);
  CHECK(slurp(d / "a" / "dataset.csv") != slurp(d / "c" / "dataset.csv"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("fit --data x.csv") == 1);
  CHECK(run("generate --vnf router") == 1);
}

TEST_CASE("data errors exit 2") {
  vnfprof::testing::TempDir d("cli_bad");
  write(d / "grid.json", "{ not json");
  CHECK(run("generate --grid " + q(d / "grid.json") + " --out " + q(d / "o")) == 2);
  CHECK(run("fit --data " + q(d / "missing.csv") + " --schema " + q(d / "missing.json")) == 2);
  CHECK(run("stability --trace " + q(d / "missing.csv")) == 2);

  // Every sample invalid: nothing to fit.
  write(d / "schema.json", schema_to_json(forwarding_schema()));
  std::string csv = "vcpu,packetsize,flows,packetrate,cpu_used,loss,repetition,valid\n";
  for (int i = 1; i <= 10; ++i) csv += "1,64,1," + std::to_string(i) + ",0.5,0,0,0\n";
  write(d / "all_invalid.csv", csv);
  CHECK(run("fit --data " + q(d / "all_invalid.csv") + " --schema " + q(d / "schema.json")) == 2);
}

TEST_CASE("fit, evaluate and recommend") {
  Pipeline p;
  const auto prof = nlohmann::json::parse(slurp(p.profile));
  CHECK(prof.contains("entries"));

  const auto report = p.dir / "report.json";
  CHECK(run("evaluate --data " + q(p.gen / "dataset.csv") + " --schema " + q(p.gen / "schema.json") +
            " --models curvefit knn --folds 3 --report " + q(report) + " --buckets") == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["models"].size() == 2);
  CHECK(fs::exists(p.dir / "report.buckets.csv"));
  CHECK(run("evaluate --data " + q(p.gen / "dataset.csv") + " --schema " + q(p.gen / "schema.json") +
            " --models oracle") == 1);

  const auto rec = nlohmann::json::parse(
      capture("recommend --profile " + q(p.profile) + " --kpi-target 1 --workload-target 5 --shape packetsize=64,flows=1",
              p.dir / "rec.json"));
  CHECK(rec["resources"]["vcpu"].get<double>() > 0);
  CHECK(run("recommend --profile " + q(p.profile) + " --kpi-target 1 --workload-target 5 --shape packetsize") == 1);
  CHECK(run("recommend --profile " + q(p.profile) + " --kpi-target 1 --workload-target 5 --shape packetsize=64") == 1);
  CHECK(run("recommend --profile " + q(p.profile) + " --kpi-target 1 --workload-target 1e6 --shape packetsize=64,flows=1") == 4);
}

TEST_CASE("capped truth: infeasible target exits 4 with the cap") {
  vnfprof::testing::TempDir d("cli_cap");
  write(d / "grid.json", grid_to_json(vnfprof::testing::small_forwarding_grid()));
  REQUIRE(run("generate --vnf forwarding --cap 1 --noise 0 --hetero 0 --grid " + q(d / "grid.json") + " --out " + q(d / "g")) == 0);
  REQUIRE(run("fit --data " + q(d / "g" / "dataset.csv") + " --schema " + q(d / "g" / "schema.json") + " --out " + q(d / "p.json")) == 0);
  const std::string base = "recommend --profile " + q(d / "p.json") + " --kpi-target 1 --shape packetsize=64,flows=1";
  CHECK(run(base + " --workload-target 1") == 0);
  const std::string cmd = std::string(VNFPROF_CLI_PATH) + " " + base + " --workload-target 100 >" + (d / "err.json").string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 4);
  const auto j = nlohmann::json::parse(slurp(d / "err.json"));
  CHECK(j["cap"]["resources"]["vcpu"] == 1.0);
  CHECK(j["per_resource_table"].size() == 3);
}

TEST_CASE("scalesim writes both outcomes") {
  vnfprof::testing::TempDir d("cli_sim");
  write(d / "grid.json", grid_to_json(default_request_grid()));
  REQUIRE(run("generate --vnf request --noise 0 --hetero 0 --out " + q(d / "g")) == 0);
  REQUIRE(run("fit --data " + q(d / "g" / "dataset.csv") + " --schema " + q(d / "g" / "schema.json") + " --out " + q(d / "p.json")) == 0);
  const auto csv = capture("scalesim --profile " + q(d / "p.json") + " --policy threshold profile --out " + q(d / "sim"),
                           d / "cmp.csv");
  CHECK(csv.rfind("policy,", 0) == 0);
  for (const char* f : {"threshold_outcome.csv", "profile_outcome.json", "comparison.csv", "trace.csv"})
    CHECK(fs::exists(d / "sim" / f));
  const auto prof = nlohmann::json::parse(slurp(d / "sim" / "profile_outcome.json"));
  CHECK(prof["events"].size() == 1);
  CHECK(run("scalesim --policy threshold --shape filesize=50,hit_ratio --out " + q(d / "sim2")) == 1);
  CHECK(run("scalesim --policy profile --out " + q(d / "sim3")) != 0);
}

TEST_CASE("stability verdict on a constant trace") {
  vnfprof::testing::TempDir d("cli_stab");
  std::string csv = "t,cpu,loss\n";
  for (int t = 1; t <= 60; ++t) csv += std::to_string(t) + ",0.5,1\n";
  write(d / "trace.csv", csv);
  const auto j = nlohmann::json::parse(capture("stability --trace " + q(d / "trace.csv"), d / "v.json"));
  CHECK(j["stable"] == true);
  CHECK(j["detected_at"] == 15);
  CHECK(j["recorded_means"]["cpu"] == 0.5);
}
