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

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vnfprof/dataset.hpp"
#include "vnfprof/simplex_interp.hpp"

namespace vnfprof {

enum class ModelKind { regression, knn, interpolation, mlp, curvefit };

std::string_view to_string(ModelKind k) noexcept;
// Accepts the canonical names plus "interp".
ModelKind parse_model_kind(std::string_view s);

/// f(configuration, workload) -> KPI.
class PerformanceModel {
 public:
  virtual ~PerformanceModel() = default;

  virtual ModelKind kind() const noexcept = 0;
  virtual bool fitted() const noexcept = 0;
  // Chosen hyperparameters, for reports.
  virtual std::map<std::string, double> hyperparameters() const { return {}; }

  // Throws unfitted_model / schema_mismatch. Result is finite and clamped to
  // the KPI range.
  double predict(const ConfigurationKey& config, double workload) const;
  const MetricSchema& schema() const noexcept { return schema_; }

 protected:
  virtual double predict_unchecked(const ConfigurationKey& config, double workload) const = 0;
  MetricSchema schema_;
};

// Standardized predictor space shared by the data-driven baselines.
struct PredictorSpace {
  FeatureScaler scaler;
  std::vector<std::string> predictors;
  Eigen::VectorXd encode(const MetricSchema& schema, const ConfigurationKey& config, double workload) const;
};

// ---------------------------------------------------------------- regression

// Seven log-spaced values from 1e-4 to 1e1.
std::vector<double> default_lambda_grid();

struct RegressionOptions {
  int degree = 3;
  std::vector<double> lambda_grid = default_lambda_grid();
  int cv_folds = 5;
  std::uint64_t seed = 1;
};

// Polynomial expansion of standardized predictors, Lasso by coordinate
// descent, lambda picked by configuration-level inner cross-validation.
class RegressionModel final : public PerformanceModel {
 public:
  RegressionModel() = default;
  static RegressionModel fit(const ProfiledDataset& ds, const RegressionOptions& options = {});

  ModelKind kind() const noexcept override { return ModelKind::regression; }
  bool fitted() const noexcept override { return fitted_; }
  std::map<std::string, double> hyperparameters() const override;

  double lambda() const noexcept { return lambda_; }
  // Coefficients over the (standardized) monomial features.
  const Eigen::VectorXd& coefficients() const noexcept { return beta_; }
  // Exponent vectors of the monomials, one per coefficient.
  const std::vector<std::vector<int>>& monomials() const noexcept { return monomials_; }

 protected:
  double predict_unchecked(const ConfigurationKey& config, double workload) const override;

 private:
  bool fitted_ = false;
  int degree_ = 1;
  double lambda_ = 0.0;
  PredictorSpace space_;
  std::vector<std::vector<int>> monomials_;
  Eigen::VectorXd feature_mean_, feature_scale_, beta_;
  double intercept_ = 0.0;
};

RegressionModel fit_regression(const ProfiledDataset& ds, const RegressionOptions& options = {});

// All monomials of p variables with total degree 1..degree, graded order.
std::vector<std::vector<int>> monomial_exponents(int p, int degree);

/// Minimizes (1/2n)|y - X b|^2 + lambda |b|_1 for centred X and y given
/// only G = X'X / n and c = X'y / n (covariance-update coordinate descent).
Eigen::VectorXd lasso_gram(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, double lambda,
                           const Eigen::VectorXd& warm_start, int max_sweeps = 10000, double tol = 1e-10);

// ---------------------------------------------------------------- kNN

struct KnnOptions {
  std::vector<int> k_grid = {1, 2, 3, 5, 8, 13, 21};
  int cv_folds = 5;
  std::uint64_t seed = 1;
};

class KnnModel final : public PerformanceModel {
 public:
  KnnModel();
  ~KnnModel() override;
  KnnModel(KnnModel&&) noexcept;
  KnnModel& operator=(KnnModel&&) noexcept;
  static KnnModel fit(const ProfiledDataset& ds, const KnnOptions& options = {});

  ModelKind kind() const noexcept override { return ModelKind::knn; }
  bool fitted() const noexcept override;
  std::map<std::string, double> hyperparameters() const override;
  int k() const noexcept { return k_; }

 protected:
  double predict_unchecked(const ConfigurationKey& config, double workload) const override;

 private:
  struct Index;
  std::unique_ptr<Index> index_;
  int k_ = 1;
};

KnnModel fit_knn(const ProfiledDataset& ds, const KnnOptions& options = {});

// ---------------------------------------------------------------- interpolation

class InterpolationModel final : public PerformanceModel {
 public:
  InterpolationModel() = default;
  // Repeated (configuration, workload) points are averaged first.
  static InterpolationModel fit(const ProfiledDataset& ds);

  ModelKind kind() const noexcept override { return ModelKind::interpolation; }
  bool fitted() const noexcept override { return fitted_; }
  bool degenerate() const noexcept { return interpolator_.degenerate(); }

 protected:
  double predict_unchecked(const ConfigurationKey& config, double workload) const override;

 private:
  bool fitted_ = false;
  PredictorSpace space_;
  SimplexInterpolator interpolator_;
  Eigen::VectorXd values_;
};

InterpolationModel fit_interpolation(const ProfiledDataset& ds);

// ---------------------------------------------------------------- MLP

struct MlpOptions {
  int hidden1 = 18;
  int hidden2 = 18;
  std::vector<double> alpha_grid = {1e-4, 1e-2};
  int epochs = 60;
  int batch_size = 64;
  double learning_rate = 1e-3;
  // Early stopping on a held-out share of the training rows.
  double validation_fraction = 0.1;
  int patience = 8;
  int cv_folds = 3;
  std::uint64_t seed = 1;
};

/// Fully connected p -> h1 -> h2 -> 1 network, relu hidden units, linear
/// output. Parameters live in one flat vector (W1, b1, W2, b2, W3, b3).
class Mlp {
 public:
  Mlp() = default;
  Mlp(int inputs, int hidden1, int hidden2);

  int inputs() const noexcept { return inputs_; }
  std::size_t parameter_count() const noexcept;
  Eigen::VectorXd& parameters() noexcept { return params_; }
  const Eigen::VectorXd& parameters() const noexcept { return params_; }

  // Glorot-uniform weights, zero biases.
  void initialize(std::uint64_t seed);
  Eigen::VectorXd forward(const Eigen::MatrixXd& X) const;
  // (1/2n) sum (f(x) - y)^2 + (alpha / 2n) |W|^2 over weights (not biases);
  // writes the gradient when `grad` is non-null.
  double loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha, Eigen::VectorXd* grad) const;

  // Mini-batch Adam with early stopping. Throws non_finite_loss on divergence.
  void train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha, const MlpOptions& options);

 private:
  int inputs_ = 0, h1_ = 0, h2_ = 0;
  Eigen::VectorXd params_;
};

class MlpModel final : public PerformanceModel {
 public:
  MlpModel() = default;
  static MlpModel fit(const ProfiledDataset& ds, const MlpOptions& options = {});

  ModelKind kind() const noexcept override { return ModelKind::mlp; }
  bool fitted() const noexcept override { return fitted_; }
  std::map<std::string, double> hyperparameters() const override;
  const Mlp& network() const noexcept { return net_; }

 protected:
  double predict_unchecked(const ConfigurationKey& config, double workload) const override;

 private:
  bool fitted_ = false;
  PredictorSpace space_;
  Mlp net_;
  double alpha_ = 0.0;
  double y_mean_ = 0.0, y_scale_ = 1.0;
};

MlpModel fit_mlp(const ProfiledDataset& ds, const MlpOptions& options = {});

}  // namespace vnfprof
