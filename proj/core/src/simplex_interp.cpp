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

#include "vnfprof/simplex_interp.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>

#include "nearest.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/random.hpp"

namespace vnfprof {

namespace {

// Dense two-phase simplex for  min c'x  s.t.  A x = b, x >= 0.
// Problems here have at most a handful of rows, so a full tableau is fine.
std::optional<Eigen::VectorXd> solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = A.rows(), n = A.cols();
  const Eigen::Index rhs = n + m;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 2, n + m + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    T.row(i).head(n) = sign * A.row(i);
    T(i, n + i) = 1.0;
    T(i, rhs) = sign * b(i);
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  T.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) T.row(m + 1) -= T.row(i);
  for (Eigen::Index i = 0; i < m; ++i) T(m + 1, n + i) = 0.0;

  auto pivot = [&](Eigen::Index r, Eigen::Index col) {
    T.row(r) /= T(r, col);
    for (Eigen::Index i = 0; i < m + 2; ++i)
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    basis[static_cast<std::size_t>(r)] = col;
  };

  auto run = [&](Eigen::Index obj) {
    const int max_iter = static_cast<int>(50 * (n + m)) + 100;
    for (int it = 0; it < max_iter; ++it) {
      // Dantzig's rule, switching to Bland's rule late to rule out cycling.
      const bool bland = it > 4 * (n + m);
      Eigen::Index enter = -1;
      double best = -1e-12;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (T(obj, j) < best) {
          enter = j;
          best = T(obj, j);
          if (bland) break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double ratio = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) <= 1e-12) continue;
        const double r = T(i, rhs) / T(i, enter);
        if (leave < 0 || r < ratio - 1e-15 ||
            (r <= ratio + 1e-15 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          ratio = r;
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
    return false;
  };

  if (!run(m + 1)) return std::nullopt;
  if (-T(m + 1, rhs) > 1e-9 * (1.0 + b.lpNorm<1>())) return std::nullopt;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(T(i, j)) > 1e-9) {
        pivot(i, j);
        break;
      }
    }
  }
  if (!run(m)) return std::nullopt;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n) x(basis[static_cast<std::size_t>(i)]) = T(i, rhs);
  return x;
}

// Deterministic value in [0,1) derived from the coordinates, independent of
// row order.
double tie_break(const Eigen::VectorXd& p) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    std::uint64_t bits;
    const double v = p(j) == 0.0 ? 0.0 : p(j);
    std::memcpy(&bits, &v, sizeof bits);
    h = splitmix64(h ^ bits);
  }
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

struct SimplexInterpolator::Impl {
  std::vector<Eigen::Index> active;  // non-constant columns
  Eigen::MatrixXd points;            // n x active.size()
  Eigen::VectorXd lo, hi;
  Eigen::VectorXd lift;
  bool degenerate = false;
  detail::NearestIndex index;

  Eigen::VectorXd project(const Eigen::VectorXd& q) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) r(static_cast<Eigen::Index>(j)) = q(active[j]);
    return r;
  }
};

SimplexInterpolator::SimplexInterpolator() = default;

SimplexInterpolator::SimplexInterpolator(const Eigen::MatrixXd& points) {
  if (points.rows() == 0) fail(Errc::empty_training_set, "interpolator needs at least one point");
  if (!points.allFinite()) fail(Errc::invalid_argument, "interpolator points must be finite");
  auto impl = std::make_shared<Impl>();
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const double lo = points.col(j).minCoeff(), hi = points.col(j).maxCoeff();
    if (hi - lo > 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)))) impl->active.push_back(j);
  }
  const auto d = static_cast<Eigen::Index>(impl->active.size());
  impl->points.resize(points.rows(), d);
  for (Eigen::Index j = 0; j < d; ++j) impl->points.col(j) = points.col(impl->active[static_cast<std::size_t>(j)]);
  if (d > 0) {
    impl->lo = impl->points.colwise().minCoeff().transpose();
    impl->hi = impl->points.colwise().maxCoeff().transpose();
    if (impl->points.rows() < d + 1) {
      impl->degenerate = true;
    } else {
      const Eigen::MatrixXd centred = impl->points.rowwise() - impl->points.colwise().mean();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred);
      const auto& s = svd.singularValues();
      impl->degenerate = s(s.size() - 1) <= 1e-9 * s(0);
    }
  }
  impl->lift.resize(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Eigen::VectorXd p = impl->points.row(i).transpose();
    impl->lift(i) = p.squaredNorm() + 1e-7 * tie_break(p);
  }
  impl->index = detail::NearestIndex(impl->points);
  impl_ = std::move(impl);
}

std::size_t SimplexInterpolator::size() const noexcept { return impl_ ? static_cast<std::size_t>(impl_->points.rows()) : 0; }
std::size_t SimplexInterpolator::dimensions() const noexcept { return impl_ ? impl_->active.size() : 0; }
bool SimplexInterpolator::degenerate() const noexcept { return impl_ && impl_->degenerate; }

BarycentricWeights SimplexInterpolator::weights(const Eigen::VectorXd& query) const {
  if (!impl_) fail(Errc::unfitted_model, "interpolator has no points");
  const auto& I = *impl_;
  BarycentricWeights out;
  const std::size_t n = size();
  const auto d = static_cast<Eigen::Index>(I.active.size());
  if (d == 0) {
    // Every point coincides; average them.
    out.degenerate = n > 1;
    for (std::size_t i = 0; i < n; ++i) {
      out.index.push_back(i);
      out.weight.push_back(1.0 / static_cast<double>(n));
    }
    return out;
  }
  const Eigen::VectorXd q = I.project(query);
  if (!q.allFinite()) fail(Errc::invalid_argument, "interpolation query must be finite");

  const auto nearest = I.index.query(q, 1).front();
  const double tol = 1e-9;
  out.inside_hull = ((q - I.lo).array() >= -tol).all() && ((I.hi - q).array() >= -tol).all();
  if ((I.points.row(static_cast<Eigen::Index>(nearest)).transpose() - q).squaredNorm() < 1e-24) {
    out.index = {nearest};
    out.weight = {1.0};
    return out;
  }

  if (I.degenerate) {
    out.degenerate = true;
    const auto k = std::min<std::size_t>(n, 2 * static_cast<std::size_t>(d) + 2);
    double total = 0.0;
    for (auto i : I.index.query(q, k)) {
      const double w = 1.0 / (I.points.row(static_cast<Eigen::Index>(i)).transpose() - q).squaredNorm();
      out.index.push_back(i);
      out.weight.push_back(w);
      total += w;
    }
    for (auto& w : out.weight) w /= total;
    return out;
  }

  if (out.inside_hull) {
    const std::size_t base = static_cast<std::size_t>(d) + 1;
    std::vector<std::size_t> sizes = {std::min(n, 4 * base), std::min(n, 16 * base), n};
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    Eigen::VectorXd rhs(d + 1);
    rhs.head(d) = q;
    rhs(d) = 1.0;
    for (auto k : sizes) {
      const auto cand = I.index.query(q, k);
      const auto kk = static_cast<Eigen::Index>(cand.size());
      Eigen::MatrixXd A(d + 1, kk);
      Eigen::VectorXd c(kk);
      for (Eigen::Index j = 0; j < kk; ++j) {
        const auto row = static_cast<Eigen::Index>(cand[static_cast<std::size_t>(j)]);
        A.col(j).head(d) = I.points.row(row).transpose();
        A(d, j) = 1.0;
        c(j) = I.lift(row);
      }
      auto w = solve_lp(A, rhs, c);
      if (!w) continue;
      double total = 0.0;
      for (Eigen::Index j = 0; j < kk; ++j) {
        if ((*w)(j) > 1e-12) {
          out.index.push_back(cand[static_cast<std::size_t>(j)]);
          out.weight.push_back((*w)(j));
          total += (*w)(j);
        }
      }
      for (auto& x : out.weight) x /= total;
      // Keep a stable order for reproducible floating-point sums.
      std::vector<std::size_t> order(out.index.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return out.index[a] < out.index[b]; });
      BarycentricWeights sorted;
      for (auto o : order) {
        sorted.index.push_back(out.index[o]);
        sorted.weight.push_back(out.weight[o]);
      }
      return sorted;
    }
  }
  out.inside_hull = false;
  out.index = {nearest};
  out.weight = {1.0};
  return out;
}

double SimplexInterpolator::interpolate(const Eigen::VectorXd& q, const Eigen::VectorXd& values) const {
  if (static_cast<std::size_t>(values.size()) != size())
    fail(Errc::length_mismatch, "interpolation values do not match the point count");
  const auto w = weights(q);
  double v = 0.0;
  for (std::size_t i = 0; i < w.index.size(); ++i) v += w.weight[i] * values(static_cast<Eigen::Index>(w.index[i]));
  return v;
}

}  // namespace vnfprof
