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

#include "vnfprof/curvefit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unsupported/Eigen/NonLinearOptimization>

#include "json.hpp"
#include "vnfprof/curves.hpp"
#include "vnfprof/errors.hpp"

namespace vnfprof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- split

void standardize_in_place(std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  for (double& x : v) x = sd > 0.0 ? (x - mean) / sd : 0.0;
}

double covariance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size() - 1);
}

// ---------------------------------------------------------------- least squares

// Residuals r(theta) and, when J is non-null, their Jacobian.
using Residuals = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd*)>;

struct LmFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Residuals* f;
  int n_inputs;
  int n_values;

  int inputs() const { return n_inputs; }
  int values() const { return n_values; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    (*f)(x, r, nullptr);
    return r.allFinite() ? 0 : -1;
  }
  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
    Eigen::VectorXd r(n_values);
    (*f)(x, r, &J);
    return J.allFinite() ? 0 : -1;
  }
};

struct LmRun {
  Eigen::VectorXd theta;
  double sse = kInf;
  bool converged = false;
  int iterations = 0;
};

LmRun run_lm(const Residuals& f, Eigen::VectorXd theta, int m) {
  LmFunctor functor{&f, static_cast<int>(theta.size()), m};
  Eigen::LevenbergMarquardt<LmFunctor> lm(functor);
  lm.parameters.maxfev = 200;
  lm.parameters.xtol = 1e-9;
  lm.parameters.ftol = 1e-14;
  LmRun run;
  Eigen::VectorXd r(m);
  f(theta, r, nullptr);
  if (!r.allFinite()) return run;
  const auto status = lm.minimize(theta);
  f(theta, r, nullptr);
  if (!theta.allFinite() || !r.allFinite()) return run;
  run.theta = theta;
  run.sse = r.squaredNorm();
  run.iterations = static_cast<int>(lm.iter);
  using S = Eigen::LevenbergMarquardtSpace::Status;
  run.converged = status == S::RelativeReductionTooSmall || status == S::RelativeErrorTooSmall ||
                  status == S::RelativeErrorAndReductionTooSmall || status == S::CosinusTooSmall ||
                  status == S::FtolTooSmall || status == S::XtolTooSmall || status == S::GtolTooSmall;
  return run;
}

LmRun best_of(const Residuals& f, const std::vector<Eigen::VectorXd>& starts, int m) {
  LmRun best;
  for (const auto& s : starts) {
    auto run = run_lm(f, s, m);
    if (run.sse < best.sse) best = std::move(run);
  }
  return best;
}

CurveFit finish(const LmRun& run, std::vector<double> params, std::size_t n) {
  for (double p : params)
    if (!std::isfinite(p)) fail(Errc::fit_diverged, "curve fit produced non-finite parameters");
  CurveFit fit;
  fit.params = std::move(params);
  fit.rmse = std::sqrt(run.sse / static_cast<double>(n));
  fit.converged = run.converged;
  fit.iterations = run.iterations;
  return fit;
}

void check_xy(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
  if (x.size() != y.size()) fail(Errc::length_mismatch, "curve fit inputs differ in length");
  if (x.size() < min_n)
    fail(Errc::insufficient_samples,
         "curve fit needs at least " + std::to_string(min_n) + " samples, got " + std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) fail(Errc::invalid_argument, "curve fit inputs must be finite");
}

// Forwarding, pre-saturation: theta = (ln a, ln b).
CurveFit fit_forwarding_nonsat(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y, 2);
  const int m = static_cast<int>(x.size());
  Residuals f = [&](const Eigen::VectorXd& t, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const double a = std::exp(t(0)), b = std::exp(t(1));
    const double e0 = curves::safe_exp(-a * b);
    if (J) J->resize(m, 2);
    for (int i = 0; i < m; ++i) {
      const double e1 = curves::safe_exp(a * (x[i] - b));
      r(i) = -e0 + e1 - y[i];
      if (J) {
        (*J)(i, 0) = a * (b * e0 + (x[i] - b) * e1);
        (*J)(i, 1) = b * (a * e0 - a * e1);
      }
    }
  };
  const double xmax = *std::max_element(x.begin(), x.end());
  std::vector<Eigen::VectorXd> starts;
  for (double bf : {0.5, 1.0, 1.5, 3.0})
    for (double ab : {1.0, 3.0, 6.0, 12.0}) {
      const double b = bf * std::max(xmax, 1e-9);
      starts.push_back(Eigen::Vector2d(std::log(ab / b), std::log(b)));
    }
  const auto run = best_of(f, starts, m);
  if (!std::isfinite(run.sse)) fail(Errc::fit_diverged, "non-saturated forwarding fit diverged");
  return finish(run, {std::exp(run.theta(0)), std::exp(run.theta(1))}, x.size());
}

// Forwarding, saturated: theta = (ln c, phi) with d = min(x) - exp(phi), so
// every sample stays right of the pole.
CurveFit fit_forwarding_sat(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y, 2);
  const int m = static_cast<int>(x.size());
  const double xmin = *std::min_element(x.begin(), x.end());
  if (!(xmin > 0.0)) fail(Errc::invalid_argument, "saturated forwarding samples need positive workloads");
  Residuals f = [&](const Eigen::VectorXd& t, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const double c = std::exp(t(0)), gap = std::exp(t(1));
    const double d = xmin - gap;
    if (J) J->resize(m, 2);
    for (int i = 0; i < m; ++i) {
      const double u = x[i] - d;
      r(i) = 100.0 * (1.0 - c / u) - y[i];
      if (J) {
        (*J)(i, 0) = -100.0 * c / u;
        (*J)(i, 1) = 100.0 * c / (u * u) * gap;  // d(r)/d(d) * d(d)/d(phi)
      }
    }
  };
  std::vector<double> cs;
  for (int i = 0; i < m; ++i)
    if (y[i] < 100.0) cs.push_back(x[i] * (1.0 - y[i] / 100.0));
  double c0 = xmin * 0.5;
  if (!cs.empty()) {
    std::nth_element(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(cs.size() / 2), cs.end());
    c0 = std::max(cs[cs.size() / 2], 1e-9 * xmin);
  }
  std::vector<Eigen::VectorXd> starts;
  for (double cf : {1.0, 0.5, 1.5})
    for (double d0 : {0.0, 0.5 * xmin, -xmin})
      starts.push_back(Eigen::Vector2d(std::log(cf * c0), std::log(xmin - d0)));
  const auto run = best_of(f, starts, m);
  if (!std::isfinite(run.sse)) fail(Errc::fit_diverged, "saturated forwarding fit diverged");
  return finish(run, {std::exp(run.theta(0)), xmin - std::exp(run.theta(1))}, x.size());
}

// Request, pre-saturation: theta = (a, ln b, c).
CurveFit fit_request_nonsat(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y, 3);
  const int m = static_cast<int>(x.size());
  Residuals f = [&](const Eigen::VectorXd& t, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const double a = t(0), b = std::exp(t(1)), c = t(2);
    if (J) J->resize(m, 3);
    for (int i = 0; i < m; ++i) {
      const double e = curves::safe_exp(b * (x[i] - c));
      r(i) = a + e - y[i];
      if (J) {
        (*J)(i, 0) = 1.0;
        (*J)(i, 1) = e * (x[i] - c) * b;
        (*J)(i, 2) = -e * b;
      }
    }
  };
  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double yrange = std::max(*ymax_it - *ymin_it, 1e-9);
  const double xrange = std::max(*xmax_it - *xmin_it, 1e-9);
  std::vector<Eigen::VectorXd> starts;
  for (double frac : {0.01, 0.1, 0.5, 0.9}) {
    const double a0 = *ymin_it - frac * yrange;
    // ln(y - a) is linear in x for the exact curve.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (int i = 0; i < m; ++i) {
      const double v = y[i] - a0;
      if (v <= 0.0) continue;
      const double ly = std::log(v);
      sx += x[i], sy += ly, sxx += x[i] * x[i], sxy += x[i] * ly, ++k;
    }
    const double den = k * sxx - sx * sx;
    if (k >= 2 && den > 0.0) {
      const double slope = (k * sxy - sx * sy) / den;
      const double icpt = (sy - slope * sx) / k;
      if (slope > 0.0) starts.push_back(Eigen::Vector3d(a0, std::log(slope), -icpt / slope));
    }
    for (double bf : {1.0, 5.0}) {
      const double b0 = bf / xrange;
      starts.push_back(Eigen::Vector3d(a0, std::log(b0), *xmax_it - std::log(std::max(frac * yrange, 1e-9)) / b0));
    }
  }
  const auto run = best_of(f, starts, m);
  if (!std::isfinite(run.sse)) fail(Errc::fit_diverged, "non-saturated request fit diverged");
  return finish(run, {run.theta(0), std::exp(run.theta(1)), run.theta(2)}, x.size());
}

// Request, saturated: ordinary least squares y = d (x - e) with e >= 0.
CurveFit fit_request_sat(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y, 2);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(Errc::insufficient_samples, "saturated request fit needs two distinct workloads");
  double d = sxy / sxx;
  double e = d > 0.0 ? mx - my / d : 0.0;
  if (d > 0.0 && e < 0.0) {
    // Constrained to e = 0: line through the origin.
    double xx = 0, xy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) xx += x[i] * x[i], xy += x[i] * y[i];
    d = xy / xx;
    e = 0.0;
  }
  if (!(d > 0.0) || !std::isfinite(e)) fail(Errc::fit_diverged, "saturated request fit has a non-positive slope");
  LmRun run;
  run.sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) run.sse += std::pow(d * (x[i] - e) - y[i], 2);
  run.converged = true;
  return finish(run, {d, e}, x.size());
}

std::pair<std::vector<double>, std::vector<double>> xy_of(std::span<const ProfiledSample> s) {
  std::vector<double> x, y;
  x.reserve(s.size());
  y.reserve(s.size());
  for (const auto& p : s) {
    x.push_back(p.workload);
    y.push_back(p.kpi);
  }
  return {x, y};
}

}  // namespace

// ---------------------------------------------------------------- split

std::size_t saturation_split_index(std::span<const double> workload, std::span<const double> resource,
                                   std::span<const double> kpi, int window_n) {
  if (window_n < 3) fail(Errc::invalid_argument, "saturation window must hold at least 3 samples");
  if (workload.size() != resource.size() || workload.size() != kpi.size())
    fail(Errc::length_mismatch, "saturation split series differ in length");
  const auto w = static_cast<std::size_t>(window_n);
  const std::size_t n = workload.size();
  if (n < w) fail(Errc::too_few_samples, "saturation split needs at least " + std::to_string(w) + " samples");
  std::vector<double> zx(w), zr(w), zk(w);
  for (std::size_t start = 0; start + w <= n; ++start) {
    std::copy_n(workload.begin() + static_cast<std::ptrdiff_t>(start), w, zx.begin());
    std::copy_n(resource.begin() + static_cast<std::ptrdiff_t>(start), w, zr.begin());
    std::copy_n(kpi.begin() + static_cast<std::ptrdiff_t>(start), w, zk.begin());
    standardize_in_place(zx);
    standardize_in_place(zr);
    standardize_in_place(zk);
    if (covariance(zk, zx) > covariance(zr, zx)) return start;
  }
  return n;
}

SaturationSplit split_saturation(std::span<const ProfiledSample> samples, int window_n) {
  std::vector<double> x, r, k;
  for (const auto& s : samples) {
    x.push_back(s.workload);
    r.push_back(s.resource_used);
    k.push_back(s.kpi);
  }
  SaturationSplit out;
  out.split_index = saturation_split_index(x, r, k, window_n);
  out.non_sat.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(out.split_index));
  out.sat.assign(samples.begin() + static_cast<std::ptrdiff_t>(out.split_index), samples.end());
  return out;
}

// ---------------------------------------------------------------- fits

CurveFit fit_nonsat(std::span<const double> x, std::span<const double> y, VnfKind kind) {
  return kind == VnfKind::forwarding ? fit_forwarding_nonsat(x, y) : fit_request_nonsat(x, y);
}

CurveFit fit_sat(std::span<const double> x, std::span<const double> y, VnfKind kind) {
  return kind == VnfKind::forwarding ? fit_forwarding_sat(x, y) : fit_request_sat(x, y);
}

CurveFit fit_nonsat(std::span<const ProfiledSample> samples, VnfKind kind) {
  const auto [x, y] = xy_of(samples);
  return fit_nonsat(x, y, kind);
}

CurveFit fit_sat(std::span<const ProfiledSample> samples, VnfKind kind) {
  const auto [x, y] = xy_of(samples);
  return fit_sat(x, y, kind);
}

// ---------------------------------------------------------------- curve pair

double FittedCurvePair::nonsat_value(double x) const {
  if (kind == VnfKind::forwarding) return curves::forwarding_nonsat(nonsat.at(0), nonsat.at(1), x);
  return curves::request_nonsat(nonsat.at(0), nonsat.at(1), nonsat.at(2), x);
}

double FittedCurvePair::sat_value(double x) const {
  if (kind == VnfKind::forwarding) return curves::forwarding_sat(sat.at(0), sat.at(1), x);
  return curves::request_sat(sat.at(0), sat.at(1), x);
}

double FittedCurvePair::evaluate(double x) const {
  if (!has_sat()) return nonsat_value(x);
  if (!has_nonsat()) return sat_value(x);
  if (x <= boundary_x) return nonsat_value(x);
  return std::max(sat_value(x), nonsat_value(boundary_x));
}

double boundary_point(const FittedCurvePair& curves, double x_lo, double x_hi) {
  if (!(x_lo < x_hi)) fail(Errc::invalid_argument, "boundary search needs x_lo < x_hi");
  auto gap = [&](double x) { return curves.nonsat_value(x) - curves.sat_value(x); };
  constexpr int kSamples = 100;
  std::vector<double> xs(kSamples), gs(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    xs[i] = i == kSamples - 1 ? x_hi : x_lo + (x_hi - x_lo) * i / (kSamples - 1);
    gs[i] = gap(xs[i]);
  }
  for (int i = 0; i < kSamples; ++i) {
    if (gs[i] == 0.0) return xs[i];
    if (i + 1 < kSamples && (gs[i] > 0.0) != (gs[i + 1] > 0.0) && gs[i + 1] != 0.0) {
      double lo = xs[i], hi = xs[i + 1];
      const bool lo_positive = gs[i] > 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if (g == 0.0) return mid;
        ((g > 0.0) == lo_positive ? lo : hi) = mid;
      }
      return std::abs(gap(lo)) <= std::abs(gap(hi)) ? lo : hi;
    }
  }
  int best = 0;
  for (int i = 1; i < kSamples; ++i)
    if (std::abs(gs[i]) < std::abs(gs[best])) best = i;
  return xs[best];
}

double inverse_workload(const FittedCurvePair& entry, double y) {
  if (!std::isfinite(y)) fail(Errc::target_unattainable, "KPI target must be finite");
  const bool fwd = entry.kind == VnfKind::forwarding;
  if (fwd && y >= 100.0) fail(Errc::target_unattainable, "loss target at or above 100% is never met");
  if (!entry.has_nonsat() && !entry.has_sat()) fail(Errc::target_unattainable, "curve has no fitted branch");

  auto nonsat_inverse = [&](double v) {
    if (fwd) return curves::forwarding_nonsat_inverse(entry.nonsat[0], entry.nonsat[1], v);
    if (v <= entry.nonsat[0]) return -kInf;
    return curves::request_nonsat_inverse(entry.nonsat[0], entry.nonsat[1], entry.nonsat[2], v);
  };
  auto sat_inverse = [&](double v) {
    return fwd ? curves::forwarding_sat_inverse(entry.sat[0], entry.sat[1], v)
               : curves::request_sat_inverse(entry.sat[0], entry.sat[1], v);
  };

  double x;
  if (!entry.has_sat()) {
    x = nonsat_inverse(y);
  } else if (!entry.has_nonsat()) {
    x = y > 0.0 ? sat_inverse(y) : -kInf;
  } else if (y < entry.nonsat_value(entry.boundary_x)) {
    x = nonsat_inverse(y);
  } else {
    x = std::max(entry.boundary_x, sat_inverse(y));
  }
  if (!(x > 0.0) || !std::isfinite(x))
    fail(Errc::target_unattainable, "no positive workload meets the KPI target " + format_number(y));
  return x;
}

FittedCurvePair fit_configuration(std::span<const ProfiledSample> samples, VnfKind kind, int window_n,
                                  bool refine_split) {
  const std::size_t n = samples.size();
  const std::size_t min_nonsat = kind == VnfKind::forwarding ? 2 : 3;
  const std::size_t min_sat = 2;
  const auto [x, y] = xy_of(samples);
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] < x[i - 1]) fail(Errc::invalid_argument, "configuration samples must be ordered by workload");

  FittedCurvePair pair;
  pair.kind = kind;
  if (window_n < 3) fail(Errc::invalid_argument, "saturation window must hold at least 3 samples");

  // Repeated measurements of one workload level are averaged for the
  // covariance test; fits use every sample. Splits fall between levels.
  std::vector<std::size_t> level_start;
  std::vector<double> lx, lr, ly;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || x[i] != x[i - 1]) {
      level_start.push_back(i);
      lx.push_back(x[i]);
      lr.push_back(0.0);
      ly.push_back(0.0);
    }
    lr.back() += samples[i].resource_used;
    ly.back() += y[i];
  }
  const std::size_t levels = level_start.size();
  level_start.push_back(n);
  for (std::size_t l = 0; l < levels; ++l) {
    const auto count = static_cast<double>(level_start[l + 1] - level_start[l]);
    lr[l] /= count;
    ly[l] /= count;
  }

  if (levels < static_cast<std::size_t>(window_n)) {
    const auto fit = fit_nonsat(x, y, kind);
    pair.nonsat = fit.params;
    pair.boundary_x = kInf;
    pair.diagnostics.rmse_nonsat = fit.rmse;
    pair.diagnostics.n_nonsat = n;
    pair.diagnostics.covariance_split = n;
    pair.diagnostics.short_series = true;
    return pair;
  }

  const std::size_t l0 = saturation_split_index(lx, lr, ly, window_n);
  const std::size_t s0 = level_start[l0];
  pair.diagnostics.covariance_split = s0;

  auto feasible = [&](std::size_t l) {
    const std::size_t ns = level_start[l], nt = n - ns;
    return (ns == 0 || ns >= min_nonsat) && (nt == 0 || nt >= min_sat);
  };
  // Resource hinge: usage rising linearly with the workload up to level l,
  // flat from l on. Its squared error places the split at or after the
  // window that triggered the covariance test.
  auto hinge_sse = [&](std::size_t l) {
    double sse = 0.0;
    if (l >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < l; ++i) mx += lx[i], my += lr[i];
      mx /= static_cast<double>(l);
      my /= static_cast<double>(l);
      double sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < l; ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (lr[i] - my);
      const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
      for (std::size_t i = 0; i < l; ++i) sse += std::pow(lr[i] - my - slope * (lx[i] - mx), 2);
    }
    if (l < levels) {
      double m = 0;
      for (std::size_t i = l; i < levels; ++i) m += lr[i];
      m /= static_cast<double>(levels - l);
      for (std::size_t i = l; i < levels; ++i) sse += std::pow(lr[i] - m, 2);
    }
    return sse;
  };

  std::vector<std::size_t> candidates;  // in samples, best first
  if (l0 == levels) {
    candidates.push_back(n);
  } else {
    std::vector<std::size_t> all, near;
    for (std::size_t l = 0; l <= levels; ++l) {
      if (!feasible(l)) continue;
      all.push_back(l);
      if (l >= l0 && l < levels) near.push_back(l);
    }
    auto dist = [&](std::size_t l) { return l > l0 ? l - l0 : l0 - l; };
    std::stable_sort(all.begin(), all.end(), [&](auto a, auto b) { return dist(a) < dist(b); });
    if (refine_split && !near.empty()) {
      std::vector<double> score(levels + 1, 0.0);
      for (auto l : near) score[l] = hinge_sse(l);
      std::stable_sort(near.begin(), near.end(), [&](auto a, auto b) { return score[a] < score[b]; });
      // Remaining feasible splits stay behind as fallbacks if fits fail.
      for (auto l : all)
        if (std::find(near.begin(), near.end(), l) == near.end()) near.push_back(l);
      all = std::move(near);
    }
    for (auto l : all) candidates.push_back(level_start[l]);
  }

  struct Choice {
    std::size_t s;
    std::optional<CurveFit> nonsat, sat;
  };
  std::optional<Choice> best;
  std::string last_error = "no feasible split";
  for (auto s : candidates) {
    Choice c{s, std::nullopt, std::nullopt};
    try {
      if (s > 0) c.nonsat = fit_nonsat(std::span(x).first(s), std::span(y).first(s), kind);
      if (s < n) c.sat = fit_sat(std::span(x).subspan(s), std::span(y).subspan(s), kind);
    } catch (const Error& e) {
      last_error = e.what();
      continue;
    }
    best = std::move(c);
    break;
  }
  if (!best) fail(Errc::fit_diverged, "no split of the configuration could be fitted: " + last_error);

  const std::size_t s = best->s;
  if (best->nonsat) {
    pair.nonsat = best->nonsat->params;
    pair.diagnostics.rmse_nonsat = best->nonsat->rmse;
  }
  if (best->sat) {
    pair.sat = best->sat->params;
    pair.diagnostics.rmse_sat = best->sat->rmse;
  }
  pair.diagnostics.n_nonsat = s;
  pair.diagnostics.n_sat = n - s;
  if (pair.has_nonsat() && pair.has_sat()) {
    pair.boundary_x = boundary_point(pair, x[s - 1], x[s]);
    pair.diagnostics.boundary_gap = std::abs(pair.nonsat_value(pair.boundary_x) - pair.sat_value(pair.boundary_x));
  } else {
    pair.boundary_x = pair.has_sat() ? -kInf : kInf;
  }
  return pair;
}

// ---------------------------------------------------------------- profile

namespace {

// Per-axis stretch for the interpolation space: the magnitude of each
// standardized column's coefficient in an OLS fit of log10(boundary_x).
// Neighbours are then chosen along the directions in which the saturation
// point moves least. Identity when too few boundaries are known.
Eigen::VectorXd capacity_axis_scale(const Eigen::MatrixXd& z, const std::vector<ProfileEntry>& entries) {
  const Eigen::Index p = z.cols();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(p);
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double b = entries[i].curve.boundary_x;
    if (std::isfinite(b) && b > 0.0) rows.push_back(static_cast<Eigen::Index>(i));
  }
  if (static_cast<Eigen::Index>(rows.size()) < p + 2) return scale;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), p + 1);
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    X.row(r).head(p) = z.row(rows[static_cast<std::size_t>(r)]);
    X(r, p) = 1.0;
    y(r) = std::log10(entries[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])].curve.boundary_x);
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd mag = beta.head(p).cwiseAbs();
  const double top = mag.maxCoeff();
  if (!(top > 0.0) || !mag.allFinite()) return scale;
  constexpr double kFloor = 0.02;  // keeps every axis able to separate configurations
  for (Eigen::Index j = 0; j < p; ++j) scale(j) = std::max(mag(j), kFloor * top) / top;
  return scale;
}

}  // namespace

VnfProfile::VnfProfile(MetricSchema schema, std::vector<ProfileEntry> entries, std::vector<DroppedConfiguration> dropped)
    : schema_(std::move(schema)), entries_(std::move(entries)), dropped_(std::move(dropped)) {
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.config < b.config; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].curve.kind != schema_.vnf_kind())
      fail(Errc::schema_mismatch, "profile entry kind differs from the schema kind");
    if (i > 0 && entries_[i].config == entries_[i - 1].config)
      fail(Errc::invalid_argument, "duplicate profile entry " + entries_[i].config.to_string());
  }
  if (entries_.empty()) return;
  const auto& cols = schema_.config_columns();
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(entries_.size()), static_cast<Eigen::Index>(cols.size()));
  std::vector<bool> logs;
  for (const auto& c : cols) logs.push_back(schema_.column(c).scale == MetricScale::log);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& key = entries_[i].config;
    if (key.size() != cols.size()) fail(Errc::schema_mismatch, "profile entry does not match the schema columns");
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (key.values()[j].first != cols[j]) fail(Errc::schema_mismatch, "profile entry columns out of schema order");
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = key.values()[j].second;
    }
  }
  scaler_ = FeatureScaler::fit(cols, raw, logs, DegeneratePolicy::pass_through);
  const Eigen::MatrixXd z = scaler_.transform(raw);
  axis_scale_ = capacity_axis_scale(z, entries_);
  interpolator_ = SimplexInterpolator(z * axis_scale_.asDiagonal());
}

std::optional<std::size_t> VnfProfile::index_of(const ConfigurationKey& config) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), config,
                             [](const ProfileEntry& e, const ConfigurationKey& k) { return e.config < k; });
  if (it == entries_.end() || !(it->config == config)) return std::nullopt;
  return static_cast<std::size_t>(it - entries_.begin());
}

const FittedCurvePair* VnfProfile::find(const ConfigurationKey& config) const {
  const auto i = index_of(config);
  return i ? &entries_[*i].curve : nullptr;
}

Eigen::VectorXd VnfProfile::coordinates(const ConfigurationKey& config) const {
  const auto& cols = schema_.config_columns();
  if (config.size() != cols.size()) fail(Errc::schema_mismatch, "configuration " + config.to_string() + " does not match the profile schema");
  std::vector<double> raw(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (config.values()[j].first != cols[j])
      fail(Errc::schema_mismatch, "configuration " + config.to_string() + " does not match the profile schema");
    raw[j] = config.values()[j].second;
    if (!std::isfinite(raw[j])) fail(Errc::invalid_argument, "configuration values must be finite");
    if (schema_.column(cols[j]).scale == MetricScale::log && !(raw[j] > 0.0))
      fail(Errc::invalid_argument, "log-scaled column '" + cols[j] + "' must be positive");
  }
  return scaler_.transform(raw).cwiseProduct(axis_scale_);
}

BarycentricWeights VnfProfile::weights(const ConfigurationKey& config) const {
  if (entries_.empty()) fail(Errc::unfitted_profile, "profile has no entries");
  if (const auto i = index_of(config)) {
    BarycentricWeights w;
    w.index = {*i};
    w.weight = {1.0};
    return w;
  }
  return interpolator_.weights(coordinates(config));
}

double VnfProfile::predict(const ConfigurationKey& config, double workload) const {
  if (!std::isfinite(workload)) fail(Errc::invalid_argument, "workload must be finite");
  const auto w = weights(config);
  double v = 0.0;
  for (std::size_t i = 0; i < w.index.size(); ++i) v += w.weight[i] * entries_[w.index[i]].curve.evaluate(workload);
  return schema_.clamp_kpi(v);
}

VnfProfile train_profile(const ProfiledDataset& ds, const TrainOptions& options) {
  if (options.window_n < 3) fail(Errc::invalid_argument, "saturation window must hold at least 3 samples");
  const auto groups = group_by_configuration(ds);
  if (groups.empty()) fail(Errc::no_valid_configurations, "dataset has no valid samples");
  std::vector<ProfileEntry> entries;
  std::vector<DroppedConfiguration> dropped;
  for (const auto& [config, samples] : groups) {
    try {
      entries.push_back({config, fit_configuration(samples, ds.schema.vnf_kind(), options.window_n, options.refine_split)});
    } catch (const Error& e) {
      dropped.push_back({config, e.what()});
    }
  }
  if (entries.empty()) fail(Errc::no_valid_configurations, "every configuration failed to fit");
  return VnfProfile(ds.schema, std::move(entries), std::move(dropped));
}

double predict_profile(const VnfProfile& profile, const ConfigurationKey& config, double workload) {
  return profile.predict(config, workload);
}

// ---------------------------------------------------------------- JSON

namespace {

using nlohmann::json;

json config_json(const ConfigurationKey& k) {
  json o = json::object();
  for (const auto& [n, v] : k.values()) o[n] = v;
  return o;
}

ConfigurationKey config_from(const json& o, const MetricSchema& schema) {
  std::vector<std::pair<std::string, double>> values;
  for (const auto& c : schema.config_columns()) values.emplace_back(c, o.at(c).get<double>());
  if (o.size() != values.size()) fail(Errc::schema_mismatch, "profile configuration has unexpected columns");
  return ConfigurationKey(std::move(values));
}

}  // namespace

std::string profile_to_json(const VnfProfile& profile) {
  json j;
  j["version"] = VnfProfile::kVersion;
  j["vnf_kind"] = std::string(to_string(profile.schema().vnf_kind()));
  j["kpi_name"] = profile.schema().kpi_name();
  j["schema"] = json::parse(schema_to_json(profile.schema()));
  j["entries"] = json::array();
  for (const auto& e : profile.entries()) {
    const auto& c = e.curve;
    const auto& d = c.diagnostics;
    j["entries"].push_back({{"config", config_json(e.config)},
                            {"nonsat", c.nonsat},
                            {"sat", c.sat},
                            {"boundary_x", std::isfinite(c.boundary_x) ? json(c.boundary_x) : json(nullptr)},
                            {"diagnostics",
                             {{"rmse_nonsat", d.rmse_nonsat},
                              {"rmse_sat", d.rmse_sat},
                              {"n_nonsat", d.n_nonsat},
                              {"n_sat", d.n_sat},
                              {"boundary_gap", d.boundary_gap},
                              {"covariance_split", d.covariance_split},
                              {"short_series", d.short_series}}}});
  }
  j["dropped"] = json::array();
  for (const auto& d : profile.dropped()) j["dropped"].push_back({{"config", config_json(d.config)}, {"reason", d.reason}});
  return j.dump(2) + "\n";
}

VnfProfile profile_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("profile is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<std::string>() != VnfProfile::kVersion)
      fail(Errc::malformed_input, "unsupported profile version '" + j.at("version").get<std::string>() + "'");
    auto schema = schema_from_json(j.at("schema").dump());
    const auto kind = schema.vnf_kind();
    const std::size_t n_nonsat = kind == VnfKind::forwarding ? 2 : 3;
    std::vector<ProfileEntry> entries;
    for (const auto& e : j.at("entries")) {
      ProfileEntry entry;
      entry.config = config_from(e.at("config"), schema);
      auto& c = entry.curve;
      c.kind = kind;
      c.nonsat = e.at("nonsat").get<std::vector<double>>();
      c.sat = e.at("sat").get<std::vector<double>>();
      if ((!c.nonsat.empty() && c.nonsat.size() != n_nonsat) || (!c.sat.empty() && c.sat.size() != 2))
        fail(Errc::malformed_input, "profile entry has the wrong number of parameters");
      if (c.nonsat.empty() && c.sat.empty()) fail(Errc::malformed_input, "profile entry has no fitted branch");
      if (c.has_nonsat() && c.has_sat())
        c.boundary_x = e.at("boundary_x").get<double>();
      else
        c.boundary_x = c.has_sat() ? -kInf : kInf;
      const auto& d = e.at("diagnostics");
      c.diagnostics.rmse_nonsat = d.value("rmse_nonsat", 0.0);
      c.diagnostics.rmse_sat = d.value("rmse_sat", 0.0);
      c.diagnostics.n_nonsat = d.value("n_nonsat", std::size_t{0});
      c.diagnostics.n_sat = d.value("n_sat", std::size_t{0});
      c.diagnostics.boundary_gap = d.value("boundary_gap", 0.0);
      c.diagnostics.covariance_split = d.value("covariance_split", std::size_t{0});
      c.diagnostics.short_series = d.value("short_series", false);
      entries.push_back(std::move(entry));
    }
    std::vector<DroppedConfiguration> dropped;
    for (const auto& d : j.value("dropped", json::array()))
      dropped.push_back({config_from(d.at("config"), schema), d.at("reason").get<std::string>()});
    if (entries.empty()) fail(Errc::malformed_input, "profile has no entries");
    return VnfProfile(std::move(schema), std::move(entries), std::move(dropped));
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("profile has a malformed field: ") + e.what());
  }
}

void save_profile(const VnfProfile& profile, const std::filesystem::path& path) {
  write_file_atomic(path, profile_to_json(profile));
}

VnfProfile load_profile(const std::filesystem::path& path) { return profile_from_json(read_file(path)); }

}  // namespace vnfprof
