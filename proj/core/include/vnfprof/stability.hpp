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
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vnfprof {

struct StabilityConfig {
  int window_seconds = 10;
  int consecutive_windows = 5;
  double eps_mean = 0.01;
  double eps_std = 0.01;
  int timeout_seconds = 60;
  double positivity_offset = 1e-6;

  // Throws invalid_argument when a field other than the offset is non-positive,
  // the offset is negative, or the timeout is shorter than
  // window + consecutive_windows.
  void validate() const;
};

/// Sum of ln(x_i + offset). Dividing by n and exponentiating gives the
/// geometric mean of the offset metrics, so a relative change in any single
/// metric moves the sum by the same amount regardless of that metric's scale.
double sum_of_logs(std::span<const double> metrics, double offset = 0.0);

/// Online stability detector, fed one metric vector per second.
class StabilityDetector {
 public:
  explicit StabilityDetector(StabilityConfig cfg);

  // Returns stable() after consuming `metrics`.
  bool step(std::span<const double> metrics);

  bool stable() const noexcept { return counter_ >= cfg_.consecutive_windows; }
  int counter() const noexcept { return counter_; }
  int elapsed() const noexcept { return elapsed_; }
  // Deltas from the most recent window comparison, if one has happened.
  std::optional<std::pair<double, double>> last_deltas() const noexcept { return last_deltas_; }
  const StabilityConfig& config() const noexcept { return cfg_; }

 private:
  StabilityConfig cfg_;
  std::deque<double> window_;
  std::optional<std::pair<double, double>> previous_;  // (mean, std) of previous full window
  std::optional<std::pair<double, double>> last_deltas_;
  int counter_ = 0;
  int elapsed_ = 0;
};

struct MetricTrace {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[i] is the vector at times[i]

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  void push(double t, std::vector<double> v);
};

struct StabilityVerdict {
  bool stable = false;
  // Elapsed seconds (1 per trace sample) at which stability was declared.
  std::optional<int> detected_at;
  std::map<std::string, double> recorded_means;
};

StabilityVerdict run_stability(const MetricTrace& trace, const StabilityConfig& cfg);

struct Thresholds {
  double eps_mean = 0.0;
  double eps_std = 0.0;
};

/// Thresholds from a trace known to be stable: `margin` times the largest
/// |delta mean| and |delta std| between consecutive windows.
Thresholds calibrate(const MetricTrace& trace, double margin = 3.0, int window_seconds = 10,
                     double positivity_offset = 1e-6);

// `t,metric1,metric2,...` at 1 Hz.
MetricTrace load_trace_csv(const std::filesystem::path& path);
MetricTrace trace_from_csv(std::string_view text);
std::string trace_to_csv(const MetricTrace& trace);

}  // namespace vnfprof
