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

#include <cmath>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/eval.hpp"

using namespace vnfprof;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

const ProfiledDataset& small_ds() {
  static const ProfiledDataset ds = vnfprof::testing::noiseless_forwarding(vnfprof::testing::small_forwarding_grid());
  return ds;
}

// Loss that is linear in vcpu and log10(rate), well inside [0, 100].
ProfiledDataset linear_ds() {
  ProfiledDataset ds{forwarding_schema(), {}};
  for (double v : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0})
    for (double ps : {64.0, 512.0, 1500.0})
      for (double r : log_spaced(1, 1000, 8)) {
        ProfiledSample s;
        s.config = vnfprof::testing::fwd_config(v, ps, 10);
        s.workload = r;
        s.resource_used = v;
        s.kpi = 5 + 3 * v + 2 * std::log10(r);
        ds.samples.push_back(s);
      }
  return ds;
}

}  // namespace

TEST_CASE("metrics on known residuals") {
  const std::vector<double> t = {1, 2, 3, 4};
  const std::vector<double> p = {2, 4, 6, 4};  // residuals 1, 2, 3, 0
  const auto m = metrics(t, p);
  CHECK(m.mae == doctest::Approx(1.5));
  CHECK(m.mad == doctest::Approx(1.5));
  CHECK(m.rmse == doctest::Approx(std::sqrt(14.0 / 4)));
  REQUIRE(m.r2.has_value());
  CHECK(*m.r2 == doctest::Approx(1 - 14.0 / 5));

  const auto odd = metrics(std::vector<double>{0, 0, 0}, std::vector<double>{1, 2, 3});
  CHECK(odd.mae == doctest::Approx(2));
  CHECK(odd.mad == doctest::Approx(2));
  CHECK(odd.rmse == doctest::Approx(std::sqrt(14.0 / 3)));
  CHECK_FALSE(odd.r2.has_value());

  const auto perfect = metrics(t, t);
  CHECK(perfect.mae == 0);
  CHECK(*perfect.r2 == 1);
}

TEST_CASE("metric errors") {
  const std::vector<double> a = {1, 2, 3}, b = {1, 2};
  CHECK(code_of([&] { metrics(a, b); }) == Errc::length_mismatch);
  CHECK(code_of([&] { metrics(std::vector<double>{1}, std::vector<double>{1}); }) == Errc::invalid_argument);
  CHECK(code_of([&] { r2_score(std::vector<double>{2, 2, 2}, a); }) == Errc::zero_variance);
}

TEST_CASE("bucketed MAE") {
  const std::vector<double> t = {0.5, 1.0, 5.0, 100.0};
  const std::vector<double> p = {1.5, 1.0, 7.0, 90.0};
  const auto b = bucketed_mae(t, p);
  REQUIRE(b.size() == 3);
  CHECK(b[0].count == 2);
  CHECK(b[0].mae == doctest::Approx(0.5));
  CHECK(b[1].mae == doctest::Approx(2.0));
  CHECK(b[2].bucket.lo == 50);  // 100 lands in the closed last bucket
  CHECK(b[2].mae == doctest::Approx(10.0));

  CHECK(bucketed_mae(std::vector<double>{}, std::vector<double>{}).empty());
  const std::vector<double> single = {3, 4};
  CHECK(bucketed_mae(single, single).size() == 1);
  CHECK(code_of([&] { bucketed_mae(single, single, {{0, 10}, {5, 20}}); }) == Errc::invalid_argument);
}

TEST_CASE("cross validation holds out every valid sample once") {
  const auto& ds = small_ds();
  const auto rep = cross_validate(ds, {ModelKind::curvefit, ModelKind::knn}, 3, 11);
  CHECK(rep.folds == 3);
  CHECK(rep.kpi_name == "loss");
  for (const auto& m : rep.models) {
    CHECK(m.error.empty());
    CHECK(m.y_true.size() == ds.valid_count());
    std::multiset<double> a(m.y_true.begin(), m.y_true.end()), b;
    for (const auto& s : ds.samples)
      if (s.valid) b.insert(s.kpi);
    CHECK(a == b);
  }
  const auto again = cross_validate(ds, {ModelKind::curvefit, ModelKind::knn}, 3, 11);
  for (std::size_t i = 0; i < rep.models.size(); ++i) CHECK(rep.models[i].y_pred == again.models[i].y_pred);
}

TEST_CASE("held-out configurations never reach the model") {
  // A held-out configuration's exact samples would give kNN zero error.
  const auto rep = cross_validate(small_ds(), {ModelKind::knn}, 3, 2);
  CHECK(rep.models[0].metrics->mae > 0.01);
}

TEST_CASE("one failing model does not abort the others") {
  ProfiledDataset ds{forwarding_schema(), {}};
  for (const auto& s : small_ds().samples)
    if (s.workload < 0.12) ds.samples.push_back(s);  // one workload per configuration
  const auto rep = cross_validate(ds, {ModelKind::curvefit, ModelKind::knn}, 3, 1);
  CHECK_FALSE(rep.find(ModelKind::curvefit)->error.empty());
  CHECK_FALSE(rep.find(ModelKind::curvefit)->metrics.has_value());
  CHECK(rep.find(ModelKind::knn)->metrics.has_value());
}

TEST_CASE("regression recovers a linear target") {
  const auto rep = cross_validate(linear_ds(), {ModelKind::regression}, 3, 4);
  REQUIRE(rep.models[0].metrics.has_value());
  CHECK(rep.models[0].metrics->mae < 0.1);
  CHECK(*rep.models[0].metrics->r2 > 0.999);
}

TEST_CASE("size sweep") {
  const auto& ds = small_ds();
  const auto rows = size_sweep(ds, {ModelKind::knn}, {1.0, 0.5}, 3, 5);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].fraction == 0.5);
  CHECK(rows[0].configurations == 6);
  CHECK(rows[1].configurations == 12);

  const auto full = cross_validate(ds, {ModelKind::knn}, 3, 5);
  const auto b = bucketed_mae(full.models[0].y_true, full.models[0].y_pred, {default_loss_buckets().front()});
  CHECK(*rows[1].mae.at(ModelKind::knn) == doctest::Approx(b.front().mae));

  CHECK(code_of([&] { size_sweep(ds, {ModelKind::knn}, {0.1}, 3, 5); }) == Errc::too_few_configurations);
  CHECK(code_of([&] { size_sweep(ds, {ModelKind::knn}, {1.5}, 3, 5); }) == Errc::invalid_argument);

  const auto csv = sweep_to_csv(rows, {ModelKind::knn});
  CHECK(csv.rfind("fraction,configurations,knn", 0) == 0);
}

TEST_CASE("normalisation against regression") {
  AccuracyReport r;
  ModelResult reg, cf;
  reg.kind = ModelKind::regression;
  reg.metrics = Metrics{std::nullopt, 2.0, 4.0, 8.0};
  cf.kind = ModelKind::curvefit;
  cf.metrics = Metrics{std::nullopt, 1.0, 1.0, 2.0};
  r.models = {reg, cf};
  AccuracyReport r2 = r;
  r2.models[1].metrics->mae = 3.0;
  const auto n = normalized_averages({r, r2});
  CHECK(n.at(ModelKind::regression).at("mae") == 1.0);
  CHECK(n.at(ModelKind::curvefit).at("mae") == doctest::Approx(1.0));  // (0.5 + 1.5) / 2
  CHECK(n.at(ModelKind::curvefit).at("mad") == doctest::Approx(0.25));
  CHECK(n.at(ModelKind::curvefit).at("rmse") == doctest::Approx(0.25));
  r.models.erase(r.models.begin());
  CHECK(normalized_averages({r}).empty());
}

TEST_CASE("report json") {
  const auto rep = cross_validate(small_ds(), {ModelKind::knn, ModelKind::regression}, 3, 1);
  const auto buckets = default_loss_buckets();
  const auto j = nlohmann::json::parse(report_to_json(rep, &buckets));
  CHECK(j["folds"] == 3);
  CHECK(j["kpi_name"] == "loss");
  CHECK(j["models"].size() == 2);
  CHECK(j["normalized_to_regression"]["regression"]["mae"] == 1.0);
  CHECK(report_to_json(rep, &buckets) == report_to_json(cross_validate(small_ds(), {ModelKind::knn, ModelKind::regression}, 3, 1), &buckets));
  const auto csv = buckets_to_csv(rep, buckets);
  CHECK(csv.find("knn") != std::string::npos);
}
