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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vnfprof/curvefit.hpp"
#include "vnfprof/recommend.hpp"
#include "vnfprof/synthvnf.hpp"

namespace vnfprof {

struct WorkloadTrace {
  std::vector<std::pair<double, double>> samples;  // (t seconds, workload), t strictly increasing
  std::vector<std::pair<std::string, double>> shape;

  void validate() const;
  // Zero-order hold.
  double at(double t) const;
};

// CSV `t,workload`; the shape travels separately.
WorkloadTrace workload_trace_from_csv(std::string_view text);
std::string workload_trace_to_csv(const WorkloadTrace& trace);

enum class PolicyKind { threshold, profile };

std::string_view to_string(PolicyKind k) noexcept;
PolicyKind parse_policy_kind(std::string_view s);

struct ThresholdParams {
  double cpu_high = 0.8;  // utilisation share of the allocation
  double step = 1.0;      // vCPU added per event
  double cooldown = 10.0; // seconds above cpu_high before acting
};

struct ProfileParams {
  const VnfProfile* profile = nullptr;
  double headroom = 0.0;  // extra share on top of the announced peak
  RecommendOptions recommend{};
};

struct ScalingPolicy {
  PolicyKind kind = PolicyKind::threshold;
  ThresholdParams threshold{};
  ProfileParams profile{};
  void validate() const;
};

struct SimulationSettings {
  double kpi_target = 0.0;  // SLA bound on the true KPI
  double initial_vcpu = 1.0;
  double max_vcpu = 64.0;
  double dt = 1.0;
  double boot_delay = 0.0;  // seconds between a decision and the new allocation
};

struct ScalingEvent {
  double t = 0.0;
  double old_vcpu = 0.0;
  double new_vcpu = 0.0;
};

struct SimTick {
  double t = 0.0;
  double workload = 0.0;
  double vcpu = 0.0;
  double cpu_used = 0.0;
  double kpi = 0.0;
};

struct ScalingOutcome {
  PolicyKind policy = PolicyKind::threshold;
  std::vector<ScalingEvent> events;
  std::vector<SimTick> ticks;
  double sla_violation_seconds = 0.0;
  double vcpu_seconds = 0.0;
  std::string note;  // e.g. why the profile policy did not scale
};

// Configuration of `gt` at a vCPU allocation. Request VNFs take the
// bandwidth tied to that allocation.
ConfigurationKey allocation_config(const GroundTruth& gt, double vcpu,
                                   const std::vector<std::pair<std::string, double>>& shape);

ScalingOutcome simulate(const GroundTruth& gt, const WorkloadTrace& trace, const ScalingPolicy& policy,
                        const SimulationSettings& settings);

struct ComparisonRow {
  PolicyKind policy = PolicyKind::threshold;
  std::size_t events = 0;
  double sla_violation_seconds = 0.0;
  double vcpu_seconds = 0.0;
};

// Throws mismatched_traces when the outcomes saw different workloads.
std::vector<ComparisonRow> compare(const std::vector<ScalingOutcome>& outcomes);

std::string outcome_to_csv(const ScalingOutcome& outcome);
std::string outcome_to_json(const ScalingOutcome& outcome);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);

// Cache VNF with default law and noise: 10 concurrent requests for a minute,
// then a step to 50 held for four minutes.
struct SurgeScenario {
  GroundTruth gt;
  WorkloadTrace trace;
  SimulationSettings settings;
};
SurgeScenario canonical_surge_scenario();

}  // namespace vnfprof
