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

#include "nearest.hpp"

#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <utility>

namespace vnfprof::detail {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

struct NearestIndex::Impl {
  virtual ~Impl() = default;
  virtual std::vector<std::size_t> candidates(const Eigen::VectorXd& q, std::size_t k) const = 0;
  Eigen::MatrixXd points;
};

namespace {

template <std::size_t D>
struct TreeImpl final : NearestIndex::Impl {
  using Point = bg::model::point<double, D, bg::cs::cartesian>;
  using Value = std::pair<Point, std::size_t>;

  static Point make(const double* x) {
    Point p;
    set<0>(p, x);
    return p;
  }
  template <std::size_t I>
  static void set(Point& p, const double* x) {
    if constexpr (I < D) {
      bg::set<I>(p, x[I]);
      set<I + 1>(p, x);
    }
  }

  explicit TreeImpl(const Eigen::MatrixXd& pts) {
    points = pts;
    std::vector<Value> values;
    values.reserve(static_cast<std::size_t>(pts.rows()));
    std::vector<double> row(D);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (std::size_t j = 0; j < D; ++j) row[j] = pts(i, static_cast<Eigen::Index>(j));
      values.emplace_back(make(row.data()), static_cast<std::size_t>(i));
    }
    tree = bgi::rtree<Value, bgi::rstar<16>>(values.begin(), values.end());
  }

  std::vector<std::size_t> candidates(const Eigen::VectorXd& q, std::size_t k) const override {
    std::vector<Value> hits;
    tree.query(bgi::nearest(make(q.data()), static_cast<unsigned>(k)), std::back_inserter(hits));
    std::vector<std::size_t> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.second);
    return out;
  }

  bgi::rtree<Value, bgi::rstar<16>> tree;
};

struct BruteImpl final : NearestIndex::Impl {
  explicit BruteImpl(const Eigen::MatrixXd& pts) { points = pts; }
  std::vector<std::size_t> candidates(const Eigen::VectorXd&, std::size_t) const override {
    std::vector<std::size_t> all(static_cast<std::size_t>(points.rows()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
};

template <std::size_t D>
std::unique_ptr<NearestIndex::Impl> make_impl(const Eigen::MatrixXd& pts) {
  if constexpr (D > 8) {
    return std::make_unique<BruteImpl>(pts);
  } else {
    if (static_cast<std::size_t>(pts.cols()) == D) return std::make_unique<TreeImpl<D>>(pts);
    return make_impl<D + 1>(pts);
  }
}

}  // namespace

NearestIndex::NearestIndex() = default;
NearestIndex::NearestIndex(NearestIndex&&) noexcept = default;
NearestIndex& NearestIndex::operator=(NearestIndex&&) noexcept = default;
NearestIndex::~NearestIndex() = default;

NearestIndex::NearestIndex(const Eigen::MatrixXd& points) {
  if (points.cols() == 0) {
    impl_ = std::make_unique<BruteImpl>(points);
  } else {
    impl_ = make_impl<1>(points);
  }
}

std::size_t NearestIndex::size() const noexcept { return impl_ ? static_cast<std::size_t>(impl_->points.rows()) : 0; }

std::vector<std::size_t> NearestIndex::query(const Eigen::VectorXd& q, std::size_t k) const {
  if (!impl_ || k == 0) return {};
  k = std::min(k, size());
  auto cand = impl_->candidates(q, k);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(cand.size());
  for (auto i : cand)
    scored.emplace_back((impl_->points.row(static_cast<Eigen::Index>(i)).transpose() - q).squaredNorm(), i);
  std::sort(scored.begin(), scored.end());
  if (scored.size() > k) scored.resize(k);
  std::vector<std::size_t> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.second);
  return out;
}

}  // namespace vnfprof::detail
