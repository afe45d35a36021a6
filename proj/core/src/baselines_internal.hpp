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
#include <vector>

#include "vnfprof/baselines.hpp"

namespace vnfprof::detail {

struct TrainingMatrix {
  PredictorSpace space;
  Eigen::MatrixXd X;  // standardized predictors of valid samples
  Eigen::VectorXd y;
  std::vector<ConfigurationKey> configs;  // per row
};

TrainingMatrix training_matrix(const ProfiledDataset& ds);

// Configuration-level fold id per row; empty when fewer than two
// configurations exist.
std::vector<int> fold_ids(const std::vector<ConfigurationKey>& row_configs, int k, std::uint64_t seed);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& rows);
Eigen::VectorXd select_rows(const Eigen::VectorXd& y, const std::vector<Eigen::Index>& rows);

}  // namespace vnfprof::detail
