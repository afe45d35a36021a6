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

#include "vnfprof/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "baselines_internal.hpp"
#include "nearest.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/random.hpp"
#include "vnfprof/synthvnf.hpp"

namespace vnfprof {

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::regression: return "regression";
    case ModelKind::knn: return "knn";
    case ModelKind::interpolation: return "interpolation";
    case ModelKind::mlp: return "mlp";
    case ModelKind::curvefit: return "curvefit";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "regression") return ModelKind::regression;
  if (s == "knn") return ModelKind::knn;
  if (s == "interpolation" || s == "interp") return ModelKind::interpolation;
  if (s == "mlp") return ModelKind::mlp;
  if (s == "curvefit") return ModelKind::curvefit;
  fail(Errc::invalid_argument, "unknown model '" + std::string(s) + "'");
}

double PerformanceModel::predict(const ConfigurationKey& config, double workload) const {
  if (!fitted()) fail(Errc::unfitted_model, std::string(to_string(kind())) + " model used before fitting");
  const auto& cols = schema_.config_columns();
  if (config.size() != cols.size())
    fail(Errc::schema_mismatch, "configuration " + config.to_string() + " does not match the training schema");
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (config.values()[j].first != cols[j])
      fail(Errc::schema_mismatch, "configuration " + config.to_string() + " does not match the training schema");
  if (!std::isfinite(workload)) fail(Errc::invalid_argument, "workload must be finite");
  const double v = predict_unchecked(config, workload);
  if (!std::isfinite(v)) fail(Errc::non_finite_loss, std::string(to_string(kind())) + " produced a non-finite prediction");
  return schema_.clamp_kpi(v);
}

Eigen::VectorXd PredictorSpace::encode(const MetricSchema& schema, const ConfigurationKey& config,
                                       double workload) const {
  const auto row = predictor_row(schema, config, workload);
  for (std::size_t j = 0; j < row.size(); ++j)
    if (scaler.transforms()[j].log10 && !(row[j] > 0.0))
      fail(Errc::invalid_argument, "log-scaled predictor '" + predictors[j] + "' must be positive");
  return scaler.transform(row);
}

namespace detail {

TrainingMatrix training_matrix(const ProfiledDataset& ds) {
  TrainingMatrix t;
  auto view = standardize(ds, DegeneratePolicy::pass_through);
  if (view.features.rows() == 0) fail(Errc::empty_training_set, "no valid samples to train on");
  t.space.scaler = std::move(view.scaler);
  t.space.predictors = std::move(view.predictors);
  t.X = std::move(view.features);
  t.y = std::move(view.kpi);
  for (auto i : view.sample_index) t.configs.push_back(ds.samples[i].config);
  return t;
}

std::vector<int> fold_ids(const std::vector<ConfigurationKey>& row_configs, int k, std::uint64_t seed) {
  std::vector<ConfigurationKey> configs = row_configs;
  std::sort(configs.begin(), configs.end());
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
  const int kk = std::min<int>(k, static_cast<int>(configs.size()));
  if (kk < 2) return {};
  Rng rng(seed);
  deterministic_shuffle(configs.begin(), configs.end(), rng);
  std::map<ConfigurationKey, int> fold_of;
  for (std::size_t i = 0; i < configs.size(); ++i) fold_of.emplace(configs[i], static_cast<int>(i % static_cast<std::size_t>(kk)));
  std::vector<int> ids;
  ids.reserve(row_configs.size());
  for (const auto& c : row_configs) ids.push_back(fold_of.at(c));
  return ids;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& y, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(rows[i]);
  return out;
}

}  // namespace detail

namespace {

using detail::select_rows;

// ---------------------------------------------------------------- regression helpers

Eigen::MatrixXd expand(const Eigen::MatrixXd& X, const std::vector<std::vector<int>>& monomials) {
  Eigen::MatrixXd F(X.rows(), static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    auto col = F.col(static_cast<Eigen::Index>(m));
    col.setOnes();
    for (std::size_t j = 0; j < monomials[m].size(); ++j)
      for (int e = 0; e < monomials[m][j]; ++e) col.array() *= X.col(static_cast<Eigen::Index>(j)).array();
  }
  return F;
}

struct CentredGram {
  Eigen::MatrixXd G;
  Eigen::VectorXd c;
  Eigen::VectorXd mean;
  double y_mean = 0.0;
};

CentredGram centred_gram(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y) {
  CentredGram g;
  const double n = static_cast<double>(Z.rows());
  g.mean = Z.colwise().mean().transpose();
  g.y_mean = y.mean();
  const Eigen::MatrixXd Zc = Z.rowwise() - g.mean.transpose();
  g.G = Zc.transpose() * Zc / n;
  g.c = Zc.transpose() * (y.array() - g.y_mean).matrix() / n;
  return g;
}

}  // namespace

std::vector<double> default_lambda_grid() { return log_spaced(1e-4, 1e1, 7); }

std::vector<std::vector<int>> monomial_exponents(int p, int degree) {
  if (p < 0 || degree < 1) fail(Errc::invalid_argument, "polynomial degree must be at least 1");
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(p), 0);
  // Enumerate exponent vectors of each total degree in lexicographic order.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == p - 1) {
      e[static_cast<std::size_t>(pos)] = left;
      out.push_back(e);
      e[static_cast<std::size_t>(pos)] = 0;
      return;
    }
    for (int v = left; v >= 0; --v) {
      e[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
    e[static_cast<std::size_t>(pos)] = 0;
  };
  if (p == 0) return out;
  for (int d = 1; d <= degree; ++d) rec(0, d);
  return out;
}

Eigen::VectorXd lasso_gram(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, double lambda,
                           const Eigen::VectorXd& warm_start, int max_sweeps, double tol) {
  const Eigen::Index m = G.rows();
  Eigen::VectorXd beta = warm_start.size() == m ? warm_start : Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r = c - G * beta;  // partial correlations with the current residual
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_step = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double gjj = G(j, j);
      if (gjj <= 0.0) {
        beta(j) = 0.0;
        continue;
      }
      const double z = r(j) + gjj * beta(j);
      const double shrunk = std::copysign(std::max(std::abs(z) - lambda, 0.0), z) / gjj;
      const double delta = shrunk - beta(j);
      if (delta != 0.0) {
        r -= G.col(j) * delta;
        beta(j) = shrunk;
        max_step = std::max(max_step, std::abs(delta) * std::sqrt(gjj));
      }
    }
    if (max_step < tol) break;
  }
  return beta;
}

RegressionModel RegressionModel::fit(const ProfiledDataset& ds, const RegressionOptions& options) {
  if (options.degree < 1) fail(Errc::invalid_argument, "polynomial degree must be at least 1");
  if (options.lambda_grid.empty()) fail(Errc::invalid_argument, "lambda grid is empty");
  for (double l : options.lambda_grid)
    if (!(l >= 0.0)) fail(Errc::invalid_argument, "lambda values must be non-negative");
  auto t = detail::training_matrix(ds);
  RegressionModel model;
  model.schema_ = ds.schema;
  model.degree_ = options.degree;
  model.space_ = std::move(t.space);
  model.monomials_ = monomial_exponents(static_cast<int>(t.X.cols()), options.degree);

  Eigen::MatrixXd F = expand(t.X, model.monomials_);
  model.feature_mean_ = F.colwise().mean().transpose();
  model.feature_scale_.resize(F.cols());
  for (Eigen::Index j = 0; j < F.cols(); ++j) {
    const double sd = std::sqrt((F.col(j).array() - model.feature_mean_(j)).square().mean());
    model.feature_scale_(j) = sd > 0.0 ? sd : 1.0;
  }
  const Eigen::MatrixXd Z =
      (F.rowwise() - model.feature_mean_.transpose()).array().rowwise() / model.feature_scale_.transpose().array();

  std::vector<double> grid = options.lambda_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());

  // Inner cross-validation over configurations.
  std::vector<double> mse(grid.size(), 0.0);
  const auto ids = detail::fold_ids(t.configs, options.cv_folds, options.seed);
  if (!ids.empty() && grid.size() > 1) {
    const int k = *std::max_element(ids.begin(), ids.end()) + 1;
    for (int f = 0; f < k; ++f) {
      std::vector<Eigen::Index> tr, te;
      for (std::size_t i = 0; i < ids.size(); ++i) (ids[i] == f ? te : tr).push_back(static_cast<Eigen::Index>(i));
      const Eigen::MatrixXd Ztr = select_rows(Z, tr), Zte = select_rows(Z, te);
      const Eigen::VectorXd ytr = select_rows(t.y, tr), yte = select_rows(t.y, te);
      const auto g = centred_gram(Ztr, ytr);
      Eigen::VectorXd beta = Eigen::VectorXd::Zero(Z.cols());
      for (std::size_t li = 0; li < grid.size(); ++li) {
        beta = lasso_gram(g.G, g.c, grid[li], beta);
        const Eigen::VectorXd pred =
            ((Zte.rowwise() - g.mean.transpose()) * beta).array() + g.y_mean;
        mse[li] += (pred - yte).squaredNorm();
      }
    }
  }
  const auto g = centred_gram(Z, t.y);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(Z.cols());
  std::vector<Eigen::VectorXd> path;
  bool any_nonzero = false;
  for (double l : grid) {
    beta = lasso_gram(g.G, g.c, l, beta);
    any_nonzero = any_nonzero || (beta.array() != 0.0).any();
    path.push_back(beta);
  }
  if (!any_nonzero) fail(Errc::singular_fit, "Lasso zeroed every coefficient at every lambda");
  // Smallest CV error; ties go to the larger (sparser) lambda.
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (mse[i] < mse[best]) best = i;
  model.lambda_ = grid[best];
  // Fold the centring of Z into the intercept.
  model.beta_ = path[best];
  model.intercept_ = g.y_mean - g.mean.dot(model.beta_);
  model.fitted_ = true;
  return model;
}

std::map<std::string, double> RegressionModel::hyperparameters() const {
  return {{"degree", static_cast<double>(degree_)}, {"lambda", lambda_},
          {"nonzero", static_cast<double>((beta_.array() != 0.0).count())}};
}

double RegressionModel::predict_unchecked(const ConfigurationKey& config, double workload) const {
  const Eigen::VectorXd x = space_.encode(schema_, config, workload);
  const Eigen::MatrixXd F = expand(x.transpose(), monomials_);
  const Eigen::VectorXd z = (F.row(0).transpose() - feature_mean_).cwiseQuotient(feature_scale_);
  return intercept_ + z.dot(beta_);
}

RegressionModel fit_regression(const ProfiledDataset& ds, const RegressionOptions& options) {
  return RegressionModel::fit(ds, options);
}

// ---------------------------------------------------------------- kNN

struct KnnModel::Index {
  PredictorSpace space;
  detail::NearestIndex tree;
  Eigen::VectorXd y;
};

KnnModel::KnnModel() = default;
KnnModel::~KnnModel() = default;
KnnModel::KnnModel(KnnModel&&) noexcept = default;
KnnModel& KnnModel::operator=(KnnModel&&) noexcept = default;

bool KnnModel::fitted() const noexcept { return index_ != nullptr; }

KnnModel KnnModel::fit(const ProfiledDataset& ds, const KnnOptions& options) {
  if (options.k_grid.empty()) fail(Errc::invalid_argument, "k grid is empty");
  auto t = detail::training_matrix(ds);
  const auto n = static_cast<std::size_t>(t.X.rows());
  std::vector<int> grid = options.k_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 1) fail(Errc::invalid_argument, "k must be at least 1");
  if (static_cast<std::size_t>(grid.front()) > n)
    fail(Errc::invalid_argument, "k = " + std::to_string(grid.front()) + " exceeds the " + std::to_string(n) +
                                     " training samples");
  // Grid values beyond the training set are not candidates.
  while (static_cast<std::size_t>(grid.back()) > n) grid.pop_back();

  std::vector<double> sse(grid.size(), 0.0);
  std::vector<bool> usable(grid.size(), true);
  const auto ids = detail::fold_ids(t.configs, options.cv_folds, options.seed);
  if (!ids.empty() && grid.size() > 1) {
    const int k = *std::max_element(ids.begin(), ids.end()) + 1;
    for (int f = 0; f < k; ++f) {
      std::vector<Eigen::Index> tr, te;
      for (std::size_t i = 0; i < ids.size(); ++i) (ids[i] == f ? te : tr).push_back(static_cast<Eigen::Index>(i));
      const Eigen::MatrixXd Xtr = select_rows(t.X, tr);
      const Eigen::VectorXd ytr = select_rows(t.y, tr);
      detail::NearestIndex tree(Xtr);
      const auto kmax = std::min<std::size_t>(static_cast<std::size_t>(grid.back()), tr.size());
      for (std::size_t gi = 0; gi < grid.size(); ++gi)
        if (static_cast<std::size_t>(grid[gi]) > tr.size()) usable[gi] = false;
      for (auto row : te) {
        const auto nn = tree.query(t.X.row(row).transpose(), kmax);
        double sum = 0.0;
        std::size_t gi = 0;
        for (std::size_t j = 0; j < nn.size() && gi < grid.size(); ++j) {
          sum += ytr(static_cast<Eigen::Index>(nn[j]));
          while (gi < grid.size() && static_cast<std::size_t>(grid[gi]) == j + 1) {
            const double e = sum / static_cast<double>(j + 1) - t.y(row);
            sse[gi] += e * e;
            ++gi;
          }
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (usable[i] && sse[i] < sse[best]) best = i;

  KnnModel model;
  model.schema_ = ds.schema;
  model.k_ = grid[best];
  auto index = std::make_unique<Index>();
  index->space = std::move(t.space);
  index->tree = detail::NearestIndex(t.X);
  index->y = std::move(t.y);
  model.index_ = std::move(index);
  return model;
}

std::map<std::string, double> KnnModel::hyperparameters() const { return {{"k", static_cast<double>(k_)}}; }

double KnnModel::predict_unchecked(const ConfigurationKey& config, double workload) const {
  const auto x = index_->space.encode(schema_, config, workload);
  const auto nn = index_->tree.query(x, static_cast<std::size_t>(k_));
  double sum = 0.0;
  for (auto i : nn) sum += index_->y(static_cast<Eigen::Index>(i));
  return sum / static_cast<double>(nn.size());
}

KnnModel fit_knn(const ProfiledDataset& ds, const KnnOptions& options) { return KnnModel::fit(ds, options); }

// ---------------------------------------------------------------- interpolation

InterpolationModel InterpolationModel::fit(const ProfiledDataset& ds) {
  auto t = detail::training_matrix(ds);
  // Average repeated measurements of the same point.
  std::map<std::vector<double>, std::pair<double, int>> merged;
  for (Eigen::Index i = 0; i < t.X.rows(); ++i) {
    std::vector<double> key(static_cast<std::size_t>(t.X.cols()));
    for (Eigen::Index j = 0; j < t.X.cols(); ++j) key[static_cast<std::size_t>(j)] = t.X(i, j);
    auto& slot = merged[key];
    slot.first += t.y(i);
    slot.second += 1;
  }
  Eigen::MatrixXd P(static_cast<Eigen::Index>(merged.size()), t.X.cols());
  Eigen::VectorXd v(static_cast<Eigen::Index>(merged.size()));
  Eigen::Index r = 0;
  for (const auto& [key, acc] : merged) {
    for (Eigen::Index j = 0; j < t.X.cols(); ++j) P(r, j) = key[static_cast<std::size_t>(j)];
    v(r) = acc.first / acc.second;
    ++r;
  }
  InterpolationModel model;
  model.schema_ = ds.schema;
  model.space_ = std::move(t.space);
  model.interpolator_ = SimplexInterpolator(P);
  model.values_ = std::move(v);
  model.fitted_ = true;
  return model;
}

double InterpolationModel::predict_unchecked(const ConfigurationKey& config, double workload) const {
  return interpolator_.interpolate(space_.encode(schema_, config, workload), values_);
}

InterpolationModel fit_interpolation(const ProfiledDataset& ds) { return InterpolationModel::fit(ds); }

}  // namespace vnfprof
