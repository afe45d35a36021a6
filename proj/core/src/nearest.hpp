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

namespace vnfprof::detail {

// k-nearest-neighbour lookup over the rows of a point matrix.
class NearestIndex {
 public:
  NearestIndex();
  explicit NearestIndex(const Eigen::MatrixXd& points);
  NearestIndex(NearestIndex&&) noexcept;
  NearestIndex& operator=(NearestIndex&&) noexcept;
  ~NearestIndex();

  // Row indices of the k nearest points, ordered by (distance, index).
  std::vector<std::size_t> query(const Eigen::VectorXd& q, std::size_t k) const;
  std::size_t size() const noexcept;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace vnfprof::detail
