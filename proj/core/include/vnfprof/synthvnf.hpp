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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vnfprof/dataset.hpp"
#include "vnfprof/random.hpp"
#include "vnfprof/stability.hpp"

namespace vnfprof {

struct NoiseSpec {
  double relative_sigma = 0.02;
  // Extra sigma proportional to the KPI magnitude.
  double hetero_factor = 0.05;
  std::uint64_t seed = 1;
};

// on_family follows the analytic saturation curves the profile fits;
// hard_knee is a piecewise-linear throughput knee used to test the models
// off their own family.
enum class CurveFamily { on_family, hard_knee };

std::string_view to_string(CurveFamily f) noexcept;
CurveFamily parse_curve_family(std::string_view s);

struct TruePoint {
  double cpu_used = 0.0;
  double kpi = 0.0;
};

/// Saturation throughput law of a packet-forwarding VNF:
///   P = kappa * min(vcpu, cap) * (packetsize / 1500)^-size_exponent / (1 + flow_penalty * log10(flows))
/// Before saturation the loss follows -exp(-ab) + exp(a(x - b)) with
/// b = knee_ratio * P and a = softness / b; after it 100 (1 - P / (x - d)).
struct ForwardingLaw {
  double kappa = 14.0;
  double size_exponent = 0.3;
  double flow_penalty = 0.1;
  std::optional<double> vcpu_cap;
  double softness = 5.0;
  double knee_ratio = 1.0;
  double sat_offset = 0.0;  // d / P
  CurveFamily family = CurveFamily::on_family;
};

struct ForwardingCurve {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;  // saturation throughput P
  double d = 0.0;
  double boundary = 0.0;  // where the true curve switches branch
};

class GroundTruthForwarding {
 public:
  explicit GroundTruthForwarding(ForwardingLaw law = {}, NoiseSpec noise = {},
                                 std::optional<double> workload_ceiling = std::nullopt);

  const ForwardingLaw& law() const noexcept { return law_; }
  const NoiseSpec& noise() const noexcept { return noise_; }
  std::optional<double> workload_ceiling() const noexcept { return ceiling_; }

  // Throws unknown_configuration when `config` lacks vcpu/packetsize/flows.
  double saturation_throughput(const ConfigurationKey& config) const;
  ForwardingCurve curve(const ConfigurationKey& config) const;
  // Noiseless (cpu_used, loss %) at `rate` kpps.
  TruePoint evaluate(const ConfigurationKey& config, double rate) const;

 private:
  ForwardingLaw law_;
  NoiseSpec noise_;
  std::optional<double> ceiling_;
};

/// Request-serving VNF (cache). With h = hit_ratio / 100 and
/// t = filesize * 8e-3 / bandwidth (ms per file at link speed):
///   slope d  = (per_request_ms / vcpu + t) * (1 + miss_penalty * (1 - h))
///   onset x1 = onset_per_vcpu * vcpu * (0.5 + 0.5 h)
///   base a   = base_ms + t
/// The response is a + exp(b (x - c)) up to x1 and d (x - e) after it, with b,
/// c and e chosen so both pieces meet at x1.
struct RequestLaw {
  double onset_per_vcpu = 12.0;
  double base_ms = 2.0;
  double per_request_ms = 2.0;
  double miss_penalty = 1.0;
  double ramp_fraction = 0.5;  // exp term at the onset, relative to a
  CurveFamily family = CurveFamily::on_family;
  // (vcpu, Gbps) pairs coupling bandwidth to the vCPU allocation.
  std::vector<std::pair<double, double>> bandwidth_tie = {{0.25, 0.25}, {0.5, 0.5}, {1.0, 1.25}, {2.0, 2.5}, {4.0, 5.0}};
};

struct RequestCurve {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double boundary = 0.0;  // x1
};

class GroundTruthRequest {
 public:
  explicit GroundTruthRequest(RequestLaw law = {}, NoiseSpec noise = {},
                              std::optional<double> workload_ceiling = std::nullopt);

  const RequestLaw& law() const noexcept { return law_; }
  const NoiseSpec& noise() const noexcept { return noise_; }
  std::optional<double> workload_ceiling() const noexcept { return ceiling_; }

  RequestCurve curve(const ConfigurationKey& config) const;
  // Noiseless (cpu_used, response ms) at `concurrency` requests.
  TruePoint evaluate(const ConfigurationKey& config, double concurrency) const;
  // Bandwidth coupled to a vCPU allocation (piecewise linear over the tie).
  double tied_bandwidth(double vcpu) const;

 private:
  RequestLaw law_;
  NoiseSpec noise_;
  std::optional<double> ceiling_;
};

using GroundTruth = std::variant<GroundTruthForwarding, GroundTruthRequest>;

VnfKind kind_of(const GroundTruth& gt) noexcept;
const NoiseSpec& noise_of(const GroundTruth& gt) noexcept;
TruePoint true_kpi(const GroundTruth& gt, const ConfigurationKey& config, double workload);
GroundTruth with_noise(const GroundTruth& gt, const NoiseSpec& noise);

// Per-kind evaluation entry points.
inline TruePoint true_kpi_forwarding(const GroundTruthForwarding& gt, const ConfigurationKey& config, double rate) {
  return gt.evaluate(config, rate);
}
inline TruePoint true_kpi_request(const GroundTruthRequest& gt, const ConfigurationKey& config, double concurrency) {
  return gt.evaluate(config, concurrency);
}

MetricSchema forwarding_schema();
MetricSchema request_schema();
MetricSchema schema_for(VnfKind kind);

// kpi' = kpi (1 + N(0, relative)) + |kpi| N(0, hetero), clamped to the KPI
// range; cpu' = cpu (1 + N(0, relative)), clamped at zero.
TruePoint sample_with_noise(const TruePoint& truth, const NoiseSpec& noise, Rng& rng, VnfKind kind);

/// 1 Hz trace (t = 1..duration) rising as truth * (1 - exp(-t / tau)) plus
/// measurement noise. Metrics are {usage column, kpi}.
MetricTrace emit_timeseries(const GroundTruth& gt, const ConfigurationKey& config, double workload, int duration_s,
                            Rng& rng, double tau = 3.0);

struct CampaignGrid {
  std::vector<double> workloads;  // ascending
  // Shape columns and their values, in schema order.
  std::vector<std::pair<std::string, std::vector<double>>> shape;
  // Resource allocations; each entry maps every resource column to a value.
  std::vector<std::vector<std::pair<std::string, double>>> resources;
  int repetitions = 1;

  void validate(const MetricSchema& schema) const;
  std::size_t configuration_count() const;
  // Configurations in campaign order (resources outer, shapes inner).
  std::vector<ConfigurationKey> configurations(const MetricSchema& schema) const;
};

// 20 log-spaced rates 0.1..1000 kpps, 5 packet sizes, 6 flow counts, 9 vCPU values.
CampaignGrid default_forwarding_grid(int repetitions = 1);
// 15 concurrency values 1..60, 7 file sizes, 3 hit ratios, tied vCPU/bandwidth pairs.
CampaignGrid default_request_grid(const RequestLaw& law = {}, int repetitions = 1);
std::vector<double> log_spaced(double lo, double hi, int n);
std::vector<double> lin_spaced(double lo, double hi, int n);

struct CampaignOptions {
  StabilityConfig stability{};
  // Measurement ramp-up time constant. Shorter than emit_timeseries' default:
  // with calibrated thresholds the detector cannot resolve a slower ramp's
  // tail under noise, and the recorded means would come out biased low.
  double ramp_tau = 1.0;
  // When set, thresholds are calibrated on a steady noisy trace before the
  // campaign and multiplied by this margin.
  std::optional<double> calibration_margin = 3.0;
  // Lower bound on calibrated thresholds; noiseless runs calibrate to zero.
  double eps_floor = 1e-4;
};

struct CampaignStats {
  std::size_t samples = 0;
  std::size_t timeouts = 0;
  std::size_t overloaded = 0;
  Thresholds thresholds;
};

ProfiledDataset run_profiling_campaign(const GroundTruth& gt, const CampaignGrid& grid, const CampaignOptions& options,
                                       std::uint64_t seed, CampaignStats* stats = nullptr);

// JSON for ground-truth specs and campaign grids.
std::string ground_truth_to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(std::string_view text);
std::string grid_to_json(const CampaignGrid& grid);
CampaignGrid grid_from_json(std::string_view text);

}  // namespace vnfprof
