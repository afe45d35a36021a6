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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "baselines_internal.hpp"
#include "vnfprof/baselines.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/random.hpp"

namespace vnfprof {

namespace {

// Flat parameter layout: W1 (h1 x p), b1, W2 (h2 x h1), b2, W3 (1 x h2), b3.
template <typename Vec>
struct Layers {
  using Mat = std::conditional_t<std::is_const_v<Vec>, Eigen::Map<const Eigen::MatrixXd>, Eigen::Map<Eigen::MatrixXd>>;
  using Col = std::conditional_t<std::is_const_v<Vec>, Eigen::Map<const Eigen::VectorXd>, Eigen::Map<Eigen::VectorXd>>;
  Mat W1, W2, W3;
  Col b1, b2, b3;

  Layers(Vec& v, int p, int h1, int h2)
      : W1(v.data(), h1, p),
        W2(v.data() + h1 * p + h1, h2, h1),
        W3(v.data() + h1 * p + h1 + h2 * h1 + h2, 1, h2),
        b1(v.data() + h1 * p, h1),
        b2(v.data() + h1 * p + h1 + h2 * h1, h2),
        b3(v.data() + h1 * p + h1 + h2 * h1 + h2 + h2, 1) {}
};

}  // namespace

Mlp::Mlp(int inputs, int hidden1, int hidden2) : inputs_(inputs), h1_(hidden1), h2_(hidden2) {
  if (inputs < 1 || hidden1 < 1 || hidden2 < 1) fail(Errc::invalid_argument, "layer sizes must be positive");
  params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(parameter_count()));
}

std::size_t Mlp::parameter_count() const noexcept {
  return static_cast<std::size_t>(h1_ * inputs_ + h1_ + h2_ * h1_ + h2_ + h2_ + 1);
}

void Mlp::initialize(std::uint64_t seed) {
  Rng rng(seed);
  params_.setZero();
  Layers<Eigen::VectorXd> L(params_, inputs_, h1_, h2_);
  auto glorot = [&](auto& W) {
    const double r = std::sqrt(6.0 / static_cast<double>(W.rows() + W.cols()));
    for (Eigen::Index j = 0; j < W.cols(); ++j)
      for (Eigen::Index i = 0; i < W.rows(); ++i) W(i, j) = rng.uniform(-r, r);
  };
  glorot(L.W1);
  glorot(L.W2);
  glorot(L.W3);
}

Eigen::VectorXd Mlp::forward(const Eigen::MatrixXd& X) const {
  if (X.cols() != inputs_) fail(Errc::invalid_argument, "input width does not match the network");
  Layers<const Eigen::VectorXd> L(params_, inputs_, h1_, h2_);
  const Eigen::MatrixXd A1 = ((X * L.W1.transpose()).rowwise() + L.b1.transpose()).cwiseMax(0.0);
  const Eigen::MatrixXd A2 = ((A1 * L.W2.transpose()).rowwise() + L.b2.transpose()).cwiseMax(0.0);
  return (A2 * L.W3.transpose()).array() + L.b3(0);
}

double Mlp::loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha, Eigen::VectorXd* grad) const {
  if (X.cols() != inputs_) fail(Errc::invalid_argument, "input width does not match the network");
  if (X.rows() != y.size() || X.rows() == 0) fail(Errc::invalid_argument, "loss needs matching, non-empty X and y");
  const double n = static_cast<double>(X.rows());
  Layers<const Eigen::VectorXd> L(params_, inputs_, h1_, h2_);
  const Eigen::MatrixXd Z1 = (X * L.W1.transpose()).rowwise() + L.b1.transpose();
  const Eigen::MatrixXd A1 = Z1.cwiseMax(0.0);
  const Eigen::MatrixXd Z2 = (A1 * L.W2.transpose()).rowwise() + L.b2.transpose();
  const Eigen::MatrixXd A2 = Z2.cwiseMax(0.0);
  const Eigen::VectorXd out = (A2 * L.W3.transpose()).array() + L.b3(0);
  const Eigen::VectorXd e = out - y;
  const double wsq = L.W1.squaredNorm() + L.W2.squaredNorm() + L.W3.squaredNorm();
  const double value = 0.5 * e.squaredNorm() / n + 0.5 * alpha * wsq / n;
  if (grad) {
    grad->resize(params_.size());
    Layers<Eigen::VectorXd> G(*grad, inputs_, h1_, h2_);
    const Eigen::VectorXd d3 = e / n;
    G.W3 = d3.transpose() * A2 + (alpha / n) * L.W3;
    G.b3(0) = d3.sum();
    const Eigen::MatrixXd d2 = ((d3 * L.W3).array() * (Z2.array() > 0.0).cast<double>()).matrix();
    G.W2 = d2.transpose() * A1 + (alpha / n) * L.W2;
    G.b2 = d2.colwise().sum().transpose();
    const Eigen::MatrixXd d1 = ((d2 * L.W2).array() * (Z1.array() > 0.0).cast<double>()).matrix();
    G.W1 = d1.transpose() * X + (alpha / n) * L.W1;
    G.b1 = d1.colwise().sum().transpose();
  }
  return value;
}

void Mlp::train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha, const MlpOptions& o) {
  if (o.epochs < 1 || o.batch_size < 1 || !(o.learning_rate > 0.0) || o.patience < 1)
    fail(Errc::invalid_argument, "invalid MLP training options");
  if (!(o.validation_fraction >= 0.0 && o.validation_fraction < 1.0))
    fail(Errc::invalid_argument, "validation fraction must be in [0, 1)");
  Rng rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  deterministic_shuffle(order.begin(), order.end(), rng);
  auto n_val = static_cast<std::size_t>(std::floor(o.validation_fraction * static_cast<double>(order.size())));
  if (order.size() - n_val < 1) n_val = 0;
  const std::vector<Eigen::Index> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<Eigen::Index> tr(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  const Eigen::MatrixXd Xv = detail::select_rows(X, val);
  const Eigen::VectorXd yv = detail::select_rows(y, val);

  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(params_.size()), v = m, g;
  long step = 0;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_params = params_;
  int stale = 0;
  const auto bs = static_cast<std::size_t>(o.batch_size);
  for (int epoch = 0; epoch < o.epochs; ++epoch) {
    deterministic_shuffle(tr.begin(), tr.end(), rng);
    double train_loss = 0.0;
    for (std::size_t s = 0; s < tr.size(); s += bs) {
      const std::vector<Eigen::Index> idx(tr.begin() + static_cast<std::ptrdiff_t>(s),
                                          tr.begin() + static_cast<std::ptrdiff_t>(std::min(s + bs, tr.size())));
      const double l = loss(detail::select_rows(X, idx), detail::select_rows(y, idx), alpha, &g);
      if (!std::isfinite(l) || !g.allFinite()) fail(Errc::non_finite_loss, "MLP training diverged");
      train_loss += l;
      ++step;
      m = b1 * m + (1.0 - b1) * g;
      v = b2 * v + (1.0 - b2) * g.cwiseAbs2();
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
      params_.array() -= o.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    }
    const double monitor = n_val > 0 ? loss(Xv, yv, 0.0, nullptr) : train_loss;
    if (!std::isfinite(monitor)) fail(Errc::non_finite_loss, "MLP training diverged");
    if (monitor < best - 1e-12) {
      best = monitor;
      best_params = params_;
      stale = 0;
    } else if (++stale >= o.patience) {
      break;
    }
  }
  params_ = best_params;
}

MlpModel MlpModel::fit(const ProfiledDataset& ds, const MlpOptions& options) {
  if (options.alpha_grid.empty()) fail(Errc::invalid_argument, "alpha grid is empty");
  if (options.hidden1 < 1 || options.hidden2 < 1) fail(Errc::invalid_argument, "hidden layer sizes must be positive");
  auto t = detail::training_matrix(ds);
  MlpModel model;
  model.schema_ = ds.schema;
  model.y_mean_ = t.y.mean();
  const double sd = std::sqrt((t.y.array() - model.y_mean_).square().mean());
  model.y_scale_ = sd > 0.0 ? sd : 1.0;
  const Eigen::VectorXd ys = (t.y.array() - model.y_mean_) / model.y_scale_;
  const auto p = static_cast<int>(t.X.cols());

  std::size_t best = 0;
  const auto ids = detail::fold_ids(t.configs, options.cv_folds, options.seed);
  if (!ids.empty() && options.alpha_grid.size() > 1) {
    const int k = *std::max_element(ids.begin(), ids.end()) + 1;
    std::vector<double> sse(options.alpha_grid.size(), 0.0);
    for (std::size_t ai = 0; ai < options.alpha_grid.size(); ++ai) {
      for (int f = 0; f < k; ++f) {
        std::vector<Eigen::Index> tr, te;
        for (std::size_t i = 0; i < ids.size(); ++i) (ids[i] == f ? te : tr).push_back(static_cast<Eigen::Index>(i));
        Mlp net(p, options.hidden1, options.hidden2);
        net.initialize(options.seed + static_cast<std::uint64_t>(f));
        net.train(detail::select_rows(t.X, tr), detail::select_rows(ys, tr), options.alpha_grid[ai], options);
        sse[ai] += (net.forward(detail::select_rows(t.X, te)) - detail::select_rows(ys, te)).squaredNorm();
      }
    }
    for (std::size_t i = 1; i < sse.size(); ++i)
      if (sse[i] < sse[best]) best = i;
  }
  model.alpha_ = options.alpha_grid[best];
  model.net_ = Mlp(p, options.hidden1, options.hidden2);
  model.net_.initialize(options.seed);
  model.net_.train(t.X, ys, model.alpha_, options);
  model.space_ = std::move(t.space);
  model.fitted_ = true;
  return model;
}

std::map<std::string, double> MlpModel::hyperparameters() const {
  return {{"alpha", alpha_}, {"parameters", static_cast<double>(net_.parameter_count())}};
}

double MlpModel::predict_unchecked(const ConfigurationKey& config, double workload) const {
  const Eigen::VectorXd x = space_.encode(schema_, config, workload);
  return y_mean_ + y_scale_ * net_.forward(x.transpose())(0);
}

MlpModel fit_mlp(const ProfiledDataset& ds, const MlpOptions& options) { return MlpModel::fit(ds, options); }

}  // namespace vnfprof
