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

#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "vnfprof/dataset.hpp"
#include "vnfprof/errors.hpp"

using namespace vnfprof;
using vnfprof::testing::TempDir;

namespace {

MetricSchema tiny_schema() {
  return MetricSchema(VnfKind::forwarding, "loss", "rate", "cpu",
                      {{"vcpu", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"size", MetricCategory::workload, MetricScale::log, "B"},
                       {"rate", MetricCategory::workload, MetricScale::log, "kpps"},
                       {"cpu", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"loss", MetricCategory::performance, MetricScale::linear, "%"}});
}

const char* kTinyCsv =
    "vcpu,size,rate,cpu,loss,repetition,valid\n"
    "1,64,10,0.5,0,0,1\n"
    "1,64,20,0.9,1.5,0,1\n"
    "2,1500,10,0.3,0,0,1\n";

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

ProfiledDataset grid_dataset(int configs, int workloads) {
  ProfiledDataset ds{tiny_schema(), {}};
  for (int c = 0; c < configs; ++c)
    for (int w = workloads; w >= 1; --w)
      ds.samples.push_back({ConfigurationKey({{"vcpu", 1.0 + c}, {"size", 64.0 * (1 + c % 3)}}), 10.0 * w, 0.1 * w,
                            1.0 * w, 0, true, {}});
  return ds;
}

}  // namespace

TEST_CASE("schema roles come from categories") {
  const auto s = tiny_schema();
  CHECK(s.config_columns() == std::vector<std::string>{"vcpu", "size"});
  CHECK(s.resource_columns() == std::vector<std::string>{"vcpu"});
  CHECK(s.shape_columns() == std::vector<std::string>{"size"});
  CHECK(s.kpi_upper_bound() == 100.0);
  CHECK(s.clamp_kpi(120.0) == 100.0);
  CHECK(s.clamp_kpi(-1.0) == 0.0);
}

TEST_CASE("schema rejects a KPI that is not a performance column") {
  CHECK_THROWS_AS(MetricSchema(VnfKind::forwarding, "cpu", "rate", "cpu",
                               {{"rate", MetricCategory::workload, MetricScale::log, ""},
                                {"cpu", MetricCategory::resource, MetricScale::linear, ""}}),
                  Error);
}

TEST_CASE("schema json round trip") {
  const auto s = tiny_schema();
  CHECK(schema_from_json(schema_to_json(s)) == s);
}

TEST_CASE("csv load keeps rows and flags") {
  const auto ds = from_csv(kTinyCsv, tiny_schema());
  REQUIRE(ds.samples.size() == 3);
  CHECK(ds.valid_count() == 3);
  CHECK(ds.samples[1].kpi == 1.5);
  CHECK(ds.samples[1].workload == 20.0);
  CHECK(ds.samples[2].config.at("size") == 1500.0);
}

TEST_CASE("csv errors name the problem") {
  const auto schema = tiny_schema();
  CHECK(code_of([&] { from_csv("vcpu,size,rate,cpu,loss,repetition,valid\n1,64,10,0.5,NaN,0,1\n", schema); }) ==
        Errc::non_numeric_cell);
  CHECK(code_of([&] { from_csv("vcpu,size,rate,cpu,repetition,valid\n1,64,10,0.5,0,1\n", schema); }) ==
        Errc::missing_column);
  CHECK(code_of([&] { from_csv("vcpu,size,rate,cpu,loss,repetition,valid\n1,64,10,0.5\n", schema); }) != Errc::io_error);
  CHECK(code_of([&] { load_csv("/nonexistent/file.csv", schema); }) == Errc::io_error);
}

TEST_CASE("save and load round trip at nine significant digits") {
  TempDir dir("dataset_rt");
  Rng rng(3);
  ProfiledDataset ds{tiny_schema(), {}};
  for (int i = 0; i < 200; ++i)
    ds.samples.push_back({ConfigurationKey({{"vcpu", std::stod(format_number(rng.uniform(0.25, 8)))},
                                            {"size", std::stod(format_number(rng.uniform(64, 1500)))}}),
                          std::stod(format_number(rng.uniform(0.1, 1000))),
                          std::stod(format_number(rng.uniform(0, 8))), std::stod(format_number(rng.uniform(0, 100))),
                          static_cast<int>(rng.below(5)), rng.uniform() < 0.9, {}});
  save_csv(ds, dir / "d.csv");
  save_schema(ds.schema, dir / "s.json");
  const auto back = load_csv(dir / "d.csv", dir / "s.json");
  CHECK(back.schema == ds.schema);
  CHECK(back.samples == ds.samples);
  CHECK(to_csv(back) == to_csv(ds));
}

TEST_CASE("empty dataset cannot be saved") {
  TempDir dir("dataset_empty");
  CHECK(code_of([&] { save_csv(ProfiledDataset{tiny_schema(), {}}, dir / "x.csv"); }) == Errc::empty_dataset);
}

TEST_CASE("format_number uses nine significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(std::stod(format_number(123456789012.0)) == doctest::Approx(123456789000.0));
}

TEST_CASE("standardize z-scores and log-transforms") {
  ProfiledDataset ds{tiny_schema(), {}};
  const double sizes[] = {10, 100, 1000};
  for (int i = 0; i < 3; ++i)
    ds.samples.push_back({ConfigurationKey({{"vcpu", 2.0 + 2.0 * i}, {"size", sizes[i]}}), 1.0 + i, 0, 0, 0, true, {}});
  const auto view = standardize(ds);
  REQUIRE(view.features.rows() == 3);
  for (int j = 0; j < 2; ++j) {
    CHECK(view.features(0, j) == doctest::Approx(-1.0));
    CHECK(view.features(1, j) == doctest::Approx(0.0));
    CHECK(view.features(2, j) == doctest::Approx(1.0));
  }
  // Inverse mapping restores raw values.
  for (int i = 0; i < 3; ++i) {
    const auto raw = view.scaler.inverse(view.features.row(i).transpose());
    CHECK(raw[0] == doctest::Approx(2.0 + 2.0 * i).epsilon(1e-12));
    CHECK(raw[1] == doctest::Approx(sizes[i]).epsilon(1e-12));
  }
}

TEST_CASE("standardize rejects a constant column") {
  ProfiledDataset ds{tiny_schema(), {}};
  for (int i = 0; i < 3; ++i)
    ds.samples.push_back({ConfigurationKey({{"vcpu", 5.0}, {"size", 64.0 + i}}), 1.0 + i, 0, 0, 0, true, {}});
  CHECK(code_of([&] { standardize(ds); }) == Errc::degenerate_column);
  CHECK_NOTHROW(standardize(ds, DegeneratePolicy::pass_through));
}

TEST_CASE("kfold partitions configurations") {
  const auto ds = grid_dataset(10, 3);
  const auto folds = kfold_split(ds, 5, 42);
  REQUIRE(folds.size() == 5);
  std::multiset<ConfigurationKey> seen;
  for (const auto& f : folds) {
    const auto test = f.test.configurations();
    CHECK(test.size() == 2);
    for (const auto& c : test) seen.insert(c);
    // No configuration on both sides.
    for (const auto& c : f.train.configurations()) CHECK(std::find(test.begin(), test.end(), c) == test.end());
    CHECK(f.train.samples.size() + f.test.samples.size() == ds.samples.size());
  }
  CHECK(seen.size() == 10);
  CHECK(std::set<ConfigurationKey>(seen.begin(), seen.end()).size() == 10);

  const auto again = kfold_split(ds, 5, 42);
  for (std::size_t i = 0; i < folds.size(); ++i) CHECK(again[i].test.samples == folds[i].test.samples);
}

TEST_CASE("kfold needs enough configurations") {
  CHECK(code_of([] { kfold_split(grid_dataset(4, 2), 5, 1); }) == Errc::too_few_configurations);
  CHECK(code_of([] { kfold_split(grid_dataset(4, 2), 1, 1); }) == Errc::invalid_argument);
}

TEST_CASE("grouping orders by workload and skips invalid samples") {
  auto ds = grid_dataset(2, 3);
  auto groups = group_by_configuration(ds);
  REQUIRE(groups.size() == 2);
  for (const auto& [key, samples] : groups) {
    CHECK(samples.size() == 3);
    CHECK(std::is_sorted(samples.begin(), samples.end(),
                         [](const auto& a, const auto& b) { return a.workload < b.workload; }));
  }
  for (auto& s : ds.samples) s.valid = false;
  CHECK(group_by_configuration(ds).empty());
}

TEST_CASE("default forwarding campaign has 270 configurations of 20 workloads") {
  const auto ds = run_profiling_campaign(GroundTruthForwarding(), default_forwarding_grid(1), {}, 1);
  CHECK(ds.samples.size() == 5400);
  const auto groups = group_by_configuration(ds);
  CHECK(groups.size() == 270);
  for (const auto& [key, samples] : groups) CHECK(samples.size() == 20);
}

TEST_CASE("atomic write replaces content and leaves no temp file") {
  TempDir dir("atomic");
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  CHECK(read_file(dir / "f.txt") == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path)) ++files;
  CHECK(files == 1);
}
