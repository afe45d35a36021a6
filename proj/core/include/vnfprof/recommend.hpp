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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vnfprof/curvefit.hpp"

namespace vnfprof {

using ResourceAllocation = std::vector<std::pair<std::string, double>>;

struct SlaTarget {
  double kpi_target = 0.0;       // max loss % or max response ms
  double workload_target = 0.0;  // workload the VNF must sustain
  // Remaining workload columns, e.g. packetsize and flows.
  std::vector<std::pair<std::string, double>> shape;
};

struct ResourceRow {
  ResourceAllocation resources;
  double wl_max = 0.0;

  friend bool operator==(const ResourceRow&, const ResourceRow&) = default;
};

struct FilteredTable {
  std::vector<ResourceRow> rows;
  // Allocation beyond which more resources stop helping, when detected.
  std::optional<ResourceRow> cap;
};

// Wl_max = slope * res + intercept over the first resource column.
struct ResourceLine {
  double slope = 0.0;
  double intercept = 0.0;
  bool usable = false;  // false means CapOnly: only profiled allocations can be recommended
};

struct Recommendation {
  ResourceAllocation resources;
  double predicted_max_workload = 0.0;
  bool extrapolated = false;
  bool cap_only = false;
  std::vector<ResourceRow> per_resource_table;
  std::optional<ResourceRow> cap;
  double latency_ms = 0.0;
};

struct RecommendOptions {
  double extrapolation_factor = 2.0;
  double granularity = 0.25;
  double epsilon_rel = 0.02;
  // Profiled shape values taken on each side of the target, per dimension.
  int neighbors_per_side = 2;
};

// Predicted maximum workload per profiled resource allocation, sorted by
// allocation (lexicographic over resource columns).
std::vector<ResourceRow> max_workload_table(const VnfProfile& profile, const SlaTarget& sla,
                                            int neighbors_per_side = 2);
FilteredTable filter_non_improving(const std::vector<ResourceRow>& table, double epsilon_rel = 0.02);
ResourceLine fit_resource_line(const std::vector<ResourceRow>& table);

// Throws target_infeasible (cap exceeded, or nothing profiled suffices in the
// CapOnly case) and extrapolation_bound.
Recommendation recommend(const VnfProfile& profile, const SlaTarget& sla, const RecommendOptions& options = {});

std::string recommendation_to_json(const Recommendation& rec, bool include_latency = false);

}  // namespace vnfprof
