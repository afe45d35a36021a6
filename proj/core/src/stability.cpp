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

#include "vnfprof/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csv_util.hpp"
#include "vnfprof/dataset.hpp"
#include "vnfprof/errors.hpp"

namespace vnfprof {

namespace {

std::pair<double, double> mean_and_std(const std::deque<double>& w) {
  const double n = static_cast<double>(w.size());
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : w) ss += (v - mean) * (v - mean);
  return {mean, w.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

}  // namespace

void StabilityConfig::validate() const {
  if (window_seconds <= 0 || consecutive_windows <= 0 || timeout_seconds <= 0)
    fail(Errc::invalid_argument, "stability window, consecutive count and timeout must be positive");
  if (!(eps_mean > 0.0) || !(eps_std > 0.0))
    fail(Errc::invalid_argument, "stability thresholds must be positive");
  if (!(positivity_offset >= 0.0)) fail(Errc::invalid_argument, "positivity offset must be non-negative");
  if (timeout_seconds < window_seconds + consecutive_windows)
    fail(Errc::invalid_argument, "stability timeout must cover window + consecutive windows");
}

double sum_of_logs(std::span<const double> metrics, double offset) {
  double s = 0.0;
  for (double x : metrics) {
    const double v = x + offset;
    if (!(v > 0.0)) fail(Errc::non_positive_metric, "metric value " + format_number(x) + " is not positive after offset");
    s += std::log(v);
  }
  return s;
}

StabilityDetector::StabilityDetector(StabilityConfig cfg) : cfg_(cfg) { cfg_.validate(); }

bool StabilityDetector::step(std::span<const double> metrics) {
  ++elapsed_;
  window_.push_back(sum_of_logs(metrics, cfg_.positivity_offset));
  if (window_.size() > static_cast<std::size_t>(cfg_.window_seconds)) window_.pop_front();
  if (window_.size() < static_cast<std::size_t>(cfg_.window_seconds)) return stable();

  const auto current = mean_and_std(window_);
  if (previous_) {
    const double d_mean = std::abs(current.first - previous_->first);
    const double d_std = std::abs(current.second - previous_->second);
    last_deltas_ = std::make_pair(d_mean, d_std);
    if (d_mean < cfg_.eps_mean && d_std < cfg_.eps_std)
      ++counter_;
    else
      counter_ = 0;
  }
  previous_ = current;
  return stable();
}

void MetricTrace::push(double t, std::vector<double> v) {
  if (!names.empty() && v.size() != names.size()) fail(Errc::invalid_argument, "trace row has the wrong width");
  times.push_back(t);
  values.push_back(std::move(v));
}

StabilityVerdict run_stability(const MetricTrace& trace, const StabilityConfig& cfg) {
  if (trace.empty()) fail(Errc::empty_trace, "stability check on an empty trace");
  StabilityDetector det(cfg);
  StabilityVerdict verdict;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (det.step(trace.values[i])) {
      verdict.stable = true;
      verdict.detected_at = det.elapsed();
      const std::size_t w = static_cast<std::size_t>(cfg.window_seconds);
      const std::size_t first = i + 1 - w;
      for (std::size_t m = 0; m < trace.names.size(); ++m) {
        double sum = 0.0;
        for (std::size_t r = first; r <= i; ++r) sum += trace.values[r][m];
        verdict.recorded_means[trace.names[m]] = sum / static_cast<double>(w);
      }
      return verdict;
    }
    if (det.elapsed() >= cfg.timeout_seconds) break;
  }
  return verdict;
}

Thresholds calibrate(const MetricTrace& trace, double margin, int window_seconds, double positivity_offset) {
  if (window_seconds <= 0) fail(Errc::invalid_argument, "calibration window must be positive");
  if (trace.size() < static_cast<std::size_t>(window_seconds) + 1)
    fail(Errc::trace_too_short, "calibration needs at least two consecutive windows (" +
                                    std::to_string(window_seconds + 1) + " samples), got " +
                                    std::to_string(trace.size()));
  std::deque<double> window;
  std::optional<std::pair<double, double>> previous;
  Thresholds t;
  for (const auto& row : trace.values) {
    window.push_back(sum_of_logs(row, positivity_offset));
    if (window.size() > static_cast<std::size_t>(window_seconds)) window.pop_front();
    if (window.size() < static_cast<std::size_t>(window_seconds)) continue;
    auto current = mean_and_std(window);
    if (previous) {
      t.eps_mean = std::max(t.eps_mean, std::abs(current.first - previous->first));
      t.eps_std = std::max(t.eps_std, std::abs(current.second - previous->second));
    }
    previous = current;
  }
  t.eps_mean *= margin;
  t.eps_std *= margin;
  return t;
}

MetricTrace trace_from_csv(std::string_view text) {
  detail::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) fail(Errc::empty_trace, "trace CSV is empty");
  auto header = detail::split_line(line);
  if (header.size() < 2 || header[0] != "t")
    fail(Errc::schema_mismatch, "trace CSV header must be 't,metric1,...'");
  MetricTrace trace;
  for (std::size_t i = 1; i < header.size(); ++i) trace.names.emplace_back(header[i]);
  std::size_t row = 0;
  while (reader.next(line)) {
    ++row;
    auto cells = detail::split_line(line);
    if (cells.size() != header.size())
      fail(Errc::schema_mismatch, "trace row " + std::to_string(row) + " has the wrong number of cells");
    std::vector<double> vals;
    double t = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto v = detail::parse_double(cells[i]);
      if (!v) fail(Errc::non_numeric_cell, "trace row " + std::to_string(row) + ", column '" + std::string(header[i]) + "'");
      if (i == 0)
        t = *v;
      else
        vals.push_back(*v);
    }
    if (!trace.times.empty() && t <= trace.times.back())
      fail(Errc::malformed_input, "trace timestamps must be strictly increasing");
    trace.push(t, std::move(vals));
  }
  if (trace.empty()) fail(Errc::empty_trace, "trace CSV has no rows");
  return trace;
}

MetricTrace load_trace_csv(const std::filesystem::path& path) { return trace_from_csv(read_file(path)); }

std::string trace_to_csv(const MetricTrace& trace) {
  std::string out = "t";
  for (const auto& n : trace.names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += format_number(trace.times[i]);
    for (double v : trace.values[i]) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

}  // namespace vnfprof
