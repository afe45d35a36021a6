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

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vnfprof/baselines.hpp"
#include "vnfprof/curvefit.hpp"

namespace vnfprof {

struct Metrics {
  std::optional<double> r2;  // absent when the true values have zero variance
  double mae = 0.0;
  double mad = 0.0;  // median absolute residual
  double rmse = 0.0;
};

// Throws length_mismatch, or invalid_argument for fewer than two values.
Metrics metrics(std::span<const double> y_true, std::span<const double> y_pred);
// Throws zero_variance when the true values are constant.
double r2_score(std::span<const double> y_true, std::span<const double> y_pred);

// The curve-fit profile behind the common model interface.
class CurveFitModel final : public PerformanceModel {
 public:
  CurveFitModel() = default;
  explicit CurveFitModel(VnfProfile profile);
  static CurveFitModel fit(const ProfiledDataset& ds, const TrainOptions& options = {});

  ModelKind kind() const noexcept override { return ModelKind::curvefit; }
  bool fitted() const noexcept override { return fitted_; }
  std::map<std::string, double> hyperparameters() const override;
  const VnfProfile& profile() const noexcept { return profile_; }

 protected:
  double predict_unchecked(const ConfigurationKey& config, double workload) const override;

 private:
  bool fitted_ = false;
  VnfProfile profile_;
};

struct ModelOptions {
  TrainOptions curvefit{};
  RegressionOptions regression{};
  KnnOptions knn{};
  MlpOptions mlp{};
};

std::unique_ptr<PerformanceModel> fit_model(ModelKind kind, const ProfiledDataset& ds, const ModelOptions& options = {});

struct ModelResult {
  ModelKind kind = ModelKind::curvefit;
  std::optional<Metrics> metrics;
  std::string error;  // fit or prediction failure, empty on success
  // Held-out valid samples in fold order.
  std::vector<double> y_true;
  std::vector<double> y_pred;
};

struct AccuracyReport {
  std::string kpi_name;
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<ModelResult> models;

  const ModelResult* find(ModelKind kind) const;
};

// Configuration-level k-fold cross-validation. Failures of one model are
// recorded in its result and never abort the others.
AccuracyReport cross_validate(const ProfiledDataset& ds, const std::vector<ModelKind>& kinds, int k,
                              std::uint64_t seed, const ModelOptions& options = {});

struct Bucket {
  double lo = 0.0;
  double hi = 0.0;  // exclusive, except for the last bucket
};

std::vector<Bucket> default_loss_buckets();

struct BucketMae {
  Bucket bucket;
  double mae = 0.0;
  std::size_t count = 0;
};

// Residuals are assigned by the true KPI; empty buckets are left out.
std::vector<BucketMae> bucketed_mae(std::span<const double> y_true, std::span<const double> y_pred,
                                    const std::vector<Bucket>& buckets = default_loss_buckets());

struct SweepRow {
  double fraction = 0.0;
  std::size_t configurations = 0;
  // Per model: MAE in the lowest KPI bucket (all held-out samples for
  // unbounded KPIs); absent when the model failed.
  std::map<ModelKind, std::optional<double>> mae;
};

// Rows sorted by fraction ascending. Each fraction keeps a deterministic
// subset of configurations and cross-validates on it.
std::vector<SweepRow> size_sweep(const ProfiledDataset& ds, const std::vector<ModelKind>& kinds,
                                 std::vector<double> fractions, int k, std::uint64_t seed,
                                 const ModelOptions& options = {});

// Each metric divided by the regression baseline's value per report, then
// averaged over reports.
std::map<ModelKind, std::map<std::string, double>> normalized_averages(const std::vector<AccuracyReport>& reports);

// Bucketed MAE is added per model when `buckets` is given.
std::string report_to_json(const AccuracyReport& report, const std::vector<Bucket>* buckets = nullptr,
                           const std::vector<SweepRow>* sweep = nullptr);
std::string buckets_to_csv(const AccuracyReport& report, const std::vector<Bucket>& buckets);
std::string sweep_to_csv(const std::vector<SweepRow>& rows, const std::vector<ModelKind>& kinds);

}  // namespace vnfprof
