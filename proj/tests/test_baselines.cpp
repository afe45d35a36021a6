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

#include "doctest.h"
#include "test_util.hpp"
#include "vnfprof/baselines.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/simplex_interp.hpp"

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

// Unbounded KPI y over one configuration column u and workload axis x.
MetricSchema ux_schema() {
  return MetricSchema(VnfKind::request, "y", "x", "used",
                      {{"u", MetricCategory::resource, MetricScale::linear, ""},
                       {"x", MetricCategory::workload, MetricScale::linear, ""},
                       {"used", MetricCategory::resource, MetricScale::linear, ""},
                       {"y", MetricCategory::performance, MetricScale::linear, ""}});
}

ConfigurationKey u_key(double u) { return ConfigurationKey({{"u", u}}); }

template <class F>
ProfiledDataset ux_dataset(const std::vector<double>& us, const std::vector<double>& xs, F&& f) {
  ProfiledDataset ds{ux_schema(), {}};
  for (double u : us)
    for (double x : xs) ds.samples.push_back({u_key(u), x, 0.0, f(u, x), 0, true, {}});
  return ds;
}

// Population standard deviation of `v` with every value repeated.
double population_sd(const std::vector<double>& v, std::size_t repeat) {
  double m = 0.0, n = 0.0;
  for (double x : v) m += x * repeat, n += repeat;
  m /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m) * repeat;
  return std::sqrt(ss / n);
}

}  // namespace

TEST_CASE("model kind names") {
  CHECK(parse_model_kind("interp") == ModelKind::interpolation);
  CHECK(parse_model_kind("regression") == ModelKind::regression);
  CHECK(to_string(ModelKind::knn) == "knn");
  CHECK(code_of([] { parse_model_kind("forest"); }) == Errc::invalid_argument);
}

TEST_CASE("monomials up to degree 2 in 2 variables") {
  const auto m = monomial_exponents(2, 2);
  CHECK(m.size() == 5);
  CHECK(monomial_exponents(3, 3).size() == 19);
  CHECK(code_of([] { monomial_exponents(2, 0); }) == Errc::invalid_argument);
}

TEST_CASE("lasso on the Gram matrix soft-thresholds an orthonormal design") {
  const Eigen::MatrixXd G = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd c(3);
  c << 2.0, -0.5, 0.1;
  const auto b = lasso_gram(G, c, 0.3, Eigen::VectorXd::Zero(3));
  CHECK(b[0] == doctest::Approx(1.7));
  CHECK(b[1] == doctest::Approx(-0.2));
  CHECK(b[2] == 0.0);
}

TEST_CASE("regression recovers an exact linear target") {
  const std::vector<double> us = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, xs = {1, 2, 4, 8, 16};
  const auto ds = ux_dataset(us, xs, [](double u, double x) { return 2 * u + 3 * x; });
  RegressionOptions opt;
  opt.degree = 1;
  opt.lambda_grid = {1e-12};
  const auto m = fit_regression(ds, opt);
  REQUIRE(m.coefficients().size() == 2);
  // Coefficients live on the standardized expanded features: 2 sd(u), 3 sd(x).
  CHECK(m.coefficients()[0] == doctest::Approx(2 * population_sd(us, xs.size())).epsilon(1e-6));
  CHECK(m.coefficients()[1] == doctest::Approx(3 * population_sd(xs, us.size())).epsilon(1e-6));
  CHECK(m.predict(u_key(3.5), 3.0) == doctest::Approx(16.0).epsilon(1e-6));
  CHECK(m.predict(u_key(3), 0.0) == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("regression on noise shrinks to zero at large lambda") {
  Rng rng(3);
  const auto ds = ux_dataset({1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6}, [&](double, double) { return 50 + rng.normal(); });
  RegressionOptions opt;
  opt.degree = 2;
  opt.lambda_grid = {1.0};
  CHECK(code_of([&] { fit_regression(ds, opt); }) == Errc::singular_fit);
  opt.lambda_grid = {0.05};
  const auto m = fit_regression(ds, opt);
  CHECK(m.coefficients().cwiseAbs().maxCoeff() < 0.5);
  opt.degree = 0;
  CHECK(code_of([&] { fit_regression(ds, opt); }) == Errc::invalid_argument);
}

TEST_CASE("regression is invariant to affine rescaling of inputs") {
  Rng rng(5);
  std::vector<double> noise(60);
  for (auto& v : noise) v = rng.normal();
  std::size_t i = 0;
  const std::vector<double> us = {1, 2, 3, 4, 5, 6}, xs = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  const auto a = ux_dataset(us, xs, [&](double u, double x) { return 10 + u * u + 0.3 * x + noise[i++ % 60]; });
  std::vector<double> us2;
  for (double u : us) us2.push_back(7.0 * u + 100.0);
  i = 0;
  const auto b = ux_dataset(us2, xs, [&](double u, double x) {
    const double raw = (u - 100.0) / 7.0;
    return 10 + raw * raw + 0.3 * x + noise[i++ % 60];
  });
  const auto ma = fit_regression(a), mb = fit_regression(b);
  CHECK(ma.lambda() == mb.lambda());
  for (double u : {1.5, 3.0, 5.5})
    for (double x : {2.0, 40.0}) CHECK(ma.predict(u_key(u), x) == doctest::Approx(mb.predict(u_key(7 * u + 100), x)).epsilon(1e-9));
}

TEST_CASE("knn: self, mean of equidistant neighbours, k bound") {
  auto ds = ux_dataset({1, 3}, {1, 100}, [](double u, double x) { return x > 50 ? 500.0 : (u < 2 ? 10.0 : 20.0); });
  KnnOptions one;
  one.k_grid = {1};
  const auto m1 = fit_knn(ds, one);
  for (const auto& s : ds.samples) CHECK(m1.predict(s.config, s.workload) == s.kpi);
  KnnOptions two;
  two.k_grid = {2};
  CHECK(fit_knn(ds, two).predict(u_key(2), 1.0) == doctest::Approx(15.0));
  KnnOptions big;
  big.k_grid = {5};
  CHECK(code_of([&] { fit_knn(ds, big); }) == Errc::invalid_argument);
  ds.samples.clear();
  CHECK(code_of([&] { fit_knn(ds, one); }) == Errc::empty_training_set);
}

TEST_CASE("knn picks k by cross-validation") {
  Rng rng(1);
  const auto ds = ux_dataset(lin_spaced(1, 20, 20), lin_spaced(1, 20, 20), [&](double u, double x) { return u + x + 5 * rng.normal() + 50; });
  const auto m = fit_knn(ds);
  CHECK(m.k() > 1);
  CHECK(m.hyperparameters().at("k") == m.k());
}

TEST_CASE("interpolation: exact on points, linear between, nearest outside") {
  const auto ds = ux_dataset({1, 2, 3}, {1, 2, 3}, [](double u, double x) { return 10 * u + x; });
  const auto m = fit_interpolation(ds);
  for (const auto& s : ds.samples) CHECK(m.predict(s.config, s.workload) == doctest::Approx(s.kpi).epsilon(1e-12));
  // Linear data is reproduced anywhere inside the hull.
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double u = rng.uniform(1, 3), x = rng.uniform(1, 3);
    CHECK(m.predict(u_key(u), x) == doctest::Approx(10 * u + x).epsilon(1e-9));
  }
  CHECK(m.predict(u_key(10), 3.0) == doctest::Approx(33.0));
  CHECK(m.predict(u_key(0.5), 0.5) == doctest::Approx(11.0));
}

TEST_CASE("simplex interpolator midpoint and barycentric weights") {
  Eigen::MatrixXd line(2, 1);
  line << 0, 1;
  Eigen::VectorXd vals(2);
  vals << 0, 10;
  const SimplexInterpolator li(line);
  CHECK(li.interpolate(Eigen::VectorXd::Constant(1, 0.5), vals) == doctest::Approx(5.0));

  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  const SimplexInterpolator ti(tri);
  Eigen::VectorXd q(2);
  q << 0.2, 0.3;
  const auto w = ti.weights(q);
  CHECK(w.inside_hull);
  double by_index[3] = {0, 0, 0};
  for (std::size_t i = 0; i < w.index.size(); ++i) by_index[w.index[i]] += w.weight[i];
  CHECK(by_index[0] == doctest::Approx(0.5));
  CHECK(by_index[1] == doctest::Approx(0.2));
  CHECK(by_index[2] == doctest::Approx(0.3));
}

TEST_CASE("simplex interpolator reproduces affine functions in random clouds") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3, n = 40;
    Eigen::MatrixXd pts(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) pts(i, j) = rng.uniform(-1, 1);
    Eigen::VectorXd coef(d);
    for (int j = 0; j < d; ++j) coef[j] = rng.uniform(-3, 3);
    const Eigen::VectorXd vals = (pts * coef).array() + 1.0;
    const SimplexInterpolator si(pts);
    for (int k = 0; k < 50; ++k) {
      // Convex combination of three points is inside the hull.
      Eigen::VectorXd q = Eigen::VectorXd::Zero(d);
      double a = rng.uniform(), b = rng.uniform() * (1 - a);
      q = a * pts.row(rng.below(n)).transpose() + b * pts.row(rng.below(n)).transpose() +
          (1 - a - b) * pts.row(rng.below(n)).transpose();
      const auto w = si.weights(q);
      double sum = 0.0;
      for (double x : w.weight) {
        CHECK(x >= -1e-12);
        sum += x;
      }
      CHECK(sum == doctest::Approx(1.0));
      CHECK(si.interpolate(q, vals) == doctest::Approx(q.dot(coef) + 1.0).epsilon(1e-7));
    }
  }
}

TEST_CASE("degenerate cloud falls back to inverse distance weighting") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 1, 1, 2, 2;
  const SimplexInterpolator si(pts);
  CHECK(si.degenerate());
  Eigen::VectorXd q(2);
  q << 1, 0;
  const auto w = si.weights(q);
  CHECK(w.degenerate);
  Eigen::VectorXd vals(3);
  vals << 1, 2, 3;
  const double v = si.interpolate(q, vals);
  CHECK(std::isfinite(v));
  CHECK(v >= 1.0);
  CHECK(v <= 3.0);
}

TEST_CASE("mlp gradient matches central differences") {
  Mlp net(3, 5, 4);
  net.initialize(7);
  Rng rng(1);
  Eigen::MatrixXd X(5, 3);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = rng.uniform(-1, 1);
    y[i] = rng.uniform(-1, 1);
  }
  Eigen::VectorXd grad;
  net.loss(X, y, 0.01, &grad);
  REQUIRE(static_cast<std::size_t>(grad.size()) == net.parameter_count());
  const double h = 1e-6;
  for (Eigen::Index p = 0; p < grad.size(); ++p) {
    Mlp probe = net;
    probe.parameters()[p] += h;
    const double up = probe.loss(X, y, 0.01, nullptr);
    probe.parameters()[p] -= 2 * h;
    const double down = probe.loss(X, y, 0.01, nullptr);
    const double fd = (up - down) / (2 * h);
    CHECK(grad[p] == doctest::Approx(fd).epsilon(1e-4).scale(1e-6));
  }
}

TEST_CASE("mlp learns a constant and is deterministic") {
  const auto ds = ux_dataset({1, 2, 3, 4, 5, 6}, {1, 2, 3, 4}, [](double, double) { return 7.5; });
  MlpOptions opt;
  opt.alpha_grid = {1e-4};
  opt.epochs = 2000;
  opt.patience = 2000;
  opt.validation_fraction = 0.0;
  const auto a = fit_mlp(ds, opt), b = fit_mlp(ds, opt);
  for (double u : {1.0, 3.3, 6.0})
    for (double x : {1.0, 2.5, 4.0}) CHECK(a.predict(u_key(u), x) == doctest::Approx(7.5).epsilon(1e-2 / 7.5));
  CHECK(a.network().parameters() == b.network().parameters());
}

TEST_CASE("mlp fits a smooth target") {
  const auto ds = ux_dataset(lin_spaced(1, 10, 10), lin_spaced(1, 10, 10), [](double u, double x) { return 20 + 2 * u + x; });
  const auto m = fit_mlp(ds);
  double err = 0.0;
  for (const auto& s : ds.samples) err += std::abs(m.predict(s.config, s.workload) - s.kpi) / ds.samples.size();
  CHECK(err < 2.0);
}

TEST_CASE("predict contract") {
  const auto ds = ux_dataset({1, 2, 3}, {1, 2, 3}, [](double u, double x) { return u * x; });
  CHECK(code_of([] { RegressionModel().predict(u_key(1), 1); }) == Errc::unfitted_model);
  const auto m = fit_interpolation(ds);
  CHECK(code_of([&] { m.predict(ConfigurationKey({{"v", 1.0}}), 1); }) == Errc::schema_mismatch);

  // Loss predictions are clamped to [0, 100] whatever the model does.
  const auto fw = run_profiling_campaign(GroundTruthForwarding(), vnfprof::testing::small_forwarding_grid(), {}, 1);
  const auto reg = fit_regression(fw);
  const auto knn = fit_knn(fw);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto k = vnfprof::testing::fwd_config(rng.uniform(0.25, 8), rng.uniform(32, 3000), rng.uniform(1, 1e5));
    const double x = std::exp(rng.uniform(-5, 10));
    for (const PerformanceModel* pm : {static_cast<const PerformanceModel*>(&reg), static_cast<const PerformanceModel*>(&knn)}) {
      const double y = pm->predict(k, x);
      CHECK(std::isfinite(y));
      CHECK(y >= 0.0);
      CHECK(y <= 100.0);
    }
  }
}
