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
#include <cstddef>
#include <memory>
#include <vector>

namespace vnfprof {

struct BarycentricWeights {
  std::vector<std::size_t> index;
  std::vector<double> weight;
  bool inside_hull = true;
  // Set when the point cloud spans a lower-dimensional subspace and the
  // weights come from inverse-distance weighting instead of a simplex.
  bool degenerate = false;
};

/// Piecewise-linear interpolation over the Delaunay simplices of a point
/// cloud, with a nearest-point rule outside the convex hull.
///
/// Simplices are never enumerated. For a query q the weights solve
///   min sum_i w_i h(p_i)  s.t.  sum_i w_i p_i = q,  sum_i w_i = 1,  w >= 0
/// with h(p) = |p|^2 plus a tiny per-point tie-break; the optimum lies on the
/// lower hull of the lifted points, i.e. a simplex of the (regular) Delaunay
/// triangulation. Candidates are the nearest points first, the whole cloud
/// only when they do not enclose q.
class SimplexInterpolator {
 public:
  SimplexInterpolator();
  // Rows are points. Constant columns are ignored. Duplicate rows are
  // allowed but make the split of weight between them arbitrary.
  explicit SimplexInterpolator(const Eigen::MatrixXd& points);

  BarycentricWeights weights(const Eigen::VectorXd& q) const;
  double interpolate(const Eigen::VectorXd& q, const Eigen::VectorXd& values) const;

  std::size_t size() const noexcept;
  std::size_t dimensions() const noexcept;
  // True when the points are affinely dependent in the active dimensions.
  bool degenerate() const noexcept;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;  // immutable, shared between copies
};

}  // namespace vnfprof
