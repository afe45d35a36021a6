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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vnfprof/dataset.hpp"
#include "vnfprof/simplex_interp.hpp"

namespace vnfprof {

struct SaturationSplit {
  std::vector<ProfiledSample> non_sat;
  std::vector<ProfiledSample> sat;
  // Index of the first saturated sample; equals the sample count when the
  // covariance test never fired.
  std::size_t split_index = 0;
};

/// Slides a window of `window_n` samples (ordered by workload) and compares
/// cov(resource, workload) with cov(kpi, workload) on the standardized
/// window. The first window where the KPI covariance wins starts the
/// saturated region.
SaturationSplit split_saturation(std::span<const ProfiledSample> samples, int window_n = 5);

// Same test on bare series; returns the split index.
std::size_t saturation_split_index(std::span<const double> workload, std::span<const double> resource,
                                   std::span<const double> kpi, int window_n = 5);

struct CurveFit {
  // forwarding non-sat (a, b), sat (c, d); request non-sat (a, b, c), sat (d, e)
  std::vector<double> params;
  double rmse = 0.0;
  bool converged = false;
  int iterations = 0;
};

CurveFit fit_nonsat(std::span<const double> x, std::span<const double> y, VnfKind kind);
CurveFit fit_sat(std::span<const double> x, std::span<const double> y, VnfKind kind);
CurveFit fit_nonsat(std::span<const ProfiledSample> samples, VnfKind kind);
CurveFit fit_sat(std::span<const ProfiledSample> samples, VnfKind kind);

struct CurveDiagnostics {
  double rmse_nonsat = 0.0;
  double rmse_sat = 0.0;
  std::size_t n_nonsat = 0;
  std::size_t n_sat = 0;
  // |nonsat - sat| at the boundary; 0 when one branch is missing.
  double boundary_gap = 0.0;
  // Split index from the covariance test before refinement.
  std::size_t covariance_split = 0;
  // Set when the configuration had fewer samples than the window.
  bool short_series = false;
};

struct FittedCurvePair {
  VnfKind kind = VnfKind::forwarding;
  std::vector<double> nonsat;  // empty when the region had no usable samples
  std::vector<double> sat;     // empty when no saturation was detected
  double boundary_x = 0.0;     // +inf without sat branch, -inf without non-sat branch
  CurveDiagnostics diagnostics;

  bool has_nonsat() const noexcept { return !nonsat.empty(); }
  bool has_sat() const noexcept { return !sat.empty(); }
  // Non-decreasing piecewise curve: non-sat branch up to boundary_x, then
  // max(sat(x), nonsat(boundary_x)). Not clamped.
  double evaluate(double x) const;
  double nonsat_value(double x) const;
  double sat_value(double x) const;
};

/// Crossing of the two branches on [x_lo, x_hi]: bisection inside the first
/// bracket found among 100 uniform samples; otherwise the sample with the
/// smallest gap (first one on ties).
double boundary_point(const FittedCurvePair& curves, double x_lo, double x_hi);

/// Largest workload whose predicted KPI does not exceed `kpi_target`.
/// Throws target_unattainable when no positive workload meets the target or
/// the target is at or beyond the loss asymptote.
double inverse_workload(const FittedCurvePair& entry, double kpi_target);

// Fits both regions of one configuration's samples (ordered by workload).
FittedCurvePair fit_configuration(std::span<const ProfiledSample> samples, VnfKind kind, int window_n = 5,
                                  bool refine_split = true);

struct ProfileEntry {
  ConfigurationKey config;
  FittedCurvePair curve;
};

struct DroppedConfiguration {
  ConfigurationKey config;
  std::string reason;
};

/// Trained per-configuration curves plus the interpolation over
/// configuration space used for unprofiled configurations.
class VnfProfile {
 public:
  static constexpr const char* kVersion = "1";

  VnfProfile() = default;
  VnfProfile(MetricSchema schema, std::vector<ProfileEntry> entries, std::vector<DroppedConfiguration> dropped = {});

  const MetricSchema& schema() const noexcept { return schema_; }
  const std::vector<ProfileEntry>& entries() const noexcept { return entries_; }
  const std::vector<DroppedConfiguration>& dropped() const noexcept { return dropped_; }
  bool empty() const noexcept { return entries_.empty(); }
  const FittedCurvePair* find(const ConfigurationKey& config) const;
  std::optional<std::size_t> index_of(const ConfigurationKey& config) const;

  // Interpolation weights over entries for `config`; independent of workload.
  BarycentricWeights weights(const ConfigurationKey& config) const;
  double predict(const ConfigurationKey& config, double workload) const;
  // Raw configuration -> coordinates used for interpolation: standardized,
  // then stretched per axis by axis_scale().
  Eigen::VectorXd coordinates(const ConfigurationKey& config) const;
  // Relative sensitivity of log10(boundary_x) to each standardized column,
  // normalised to a maximum of 1; all ones when it cannot be estimated.
  const Eigen::VectorXd& axis_scale() const noexcept { return axis_scale_; }

 private:
  MetricSchema schema_;
  std::vector<ProfileEntry> entries_;
  std::vector<DroppedConfiguration> dropped_;
  FeatureScaler scaler_;
  Eigen::VectorXd axis_scale_;
  SimplexInterpolator interpolator_;
};

struct TrainOptions {
  int window_n = 5;
  // Place the split inside the triggering window where the resource usage
  // series bends from linear growth to flat.
  bool refine_split = true;
};

VnfProfile train_profile(const ProfiledDataset& ds, const TrainOptions& options = {});
double predict_profile(const VnfProfile& profile, const ConfigurationKey& config, double workload);

std::string profile_to_json(const VnfProfile& profile);
VnfProfile profile_from_json(std::string_view text);
void save_profile(const VnfProfile& profile, const std::filesystem::path& path);
VnfProfile load_profile(const std::filesystem::path& path);

}  // namespace vnfprof
