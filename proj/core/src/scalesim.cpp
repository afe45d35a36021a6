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

#include "vnfprof/scalesim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csv_util.hpp"
#include "json.hpp"
#include "vnfprof/errors.hpp"

namespace vnfprof {

void WorkloadTrace::validate() const {
  if (samples.empty()) fail(Errc::empty_trace, "workload trace is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second) || samples[i].second < 0.0)
      fail(Errc::malformed_input, "workload trace values must be finite and non-negative");
    if (i > 0 && !(samples[i].first > samples[i - 1].first))
      fail(Errc::malformed_input, "workload trace timestamps must be strictly increasing");
  }
}

double WorkloadTrace::at(double t) const {
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const std::pair<double, double>& s) { return v < s.first; });
  if (it == samples.begin()) return samples.front().second;
  return std::prev(it)->second;
}

WorkloadTrace workload_trace_from_csv(std::string_view text) {
  detail::LineReader lines(text);
  std::string_view line;
  if (!lines.next(line)) fail(Errc::empty_trace, "workload trace file is empty");
  const auto header = detail::split_line(line);
  if (header.size() != 2 || header[0] != "t" || header[1] != "workload")
    fail(Errc::malformed_input, "workload trace header must be 't,workload'");
  WorkloadTrace trace;
  std::size_t row = 1;
  while (lines.next(line)) {
    ++row;
    const auto cells = detail::split_line(line);
    if (cells.size() != 2) fail(Errc::malformed_input, "line " + std::to_string(row) + ": expected 2 cells");
    const auto t = detail::parse_double(cells[0]);
    const auto w = detail::parse_double(cells[1]);
    if (!t || !w) fail(Errc::non_numeric_cell, "line " + std::to_string(row) + ": non-numeric cell");
    trace.samples.emplace_back(*t, *w);
  }
  trace.validate();
  return trace;
}

std::string workload_trace_to_csv(const WorkloadTrace& trace) {
  std::string out = "t,workload\n";
  for (const auto& [t, w] : trace.samples) out += format_number(t) + "," + format_number(w) + "\n";
  return out;
}

std::string_view to_string(PolicyKind k) noexcept { return k == PolicyKind::profile ? "profile" : "threshold"; }

PolicyKind parse_policy_kind(std::string_view s) {
  if (s == "threshold") return PolicyKind::threshold;
  if (s == "profile") return PolicyKind::profile;
  fail(Errc::invalid_argument, "unknown scaling policy '" + std::string(s) + "'");
}

void ScalingPolicy::validate() const {
  if (kind == PolicyKind::threshold) {
    if (!(threshold.cpu_high > 0.0 && threshold.cpu_high <= 1.0))
      fail(Errc::invalid_argument, "cpu_high must lie in (0, 1]");
    if (!(threshold.step > 0.0)) fail(Errc::invalid_argument, "scaling step must be positive");
    if (!(threshold.cooldown >= 0.0)) fail(Errc::invalid_argument, "cooldown must be non-negative");
  } else {
    if (!profile.profile || profile.profile->empty()) fail(Errc::unfitted_profile, "profile policy needs a trained profile");
    if (!(profile.headroom >= 0.0)) fail(Errc::invalid_argument, "headroom must be non-negative");
  }
}

ConfigurationKey allocation_config(const GroundTruth& gt, double vcpu,
                                   const std::vector<std::pair<std::string, double>>& shape) {
  const auto schema = schema_for(kind_of(gt));
  std::vector<std::pair<std::string, double>> values;
  for (const auto& col : schema.config_columns()) {
    if (col == "vcpu") {
      values.emplace_back(col, vcpu);
    } else if (col == "bandwidth" && std::holds_alternative<GroundTruthRequest>(gt)) {
      values.emplace_back(col, std::get<GroundTruthRequest>(gt).tied_bandwidth(vcpu));
    } else {
      auto it = std::find_if(shape.begin(), shape.end(), [&](const auto& kv) { return kv.first == col; });
      if (it == shape.end()) fail(Errc::invalid_argument, "workload shape is missing '" + col + "'");
      values.emplace_back(col, it->second);
    }
  }
  return ConfigurationKey(std::move(values));
}

ScalingOutcome simulate(const GroundTruth& gt, const WorkloadTrace& trace, const ScalingPolicy& policy,
                        const SimulationSettings& s) {
  trace.validate();
  policy.validate();
  if (!(s.dt > 0.0)) fail(Errc::invalid_argument, "time step must be positive");
  if (!(s.initial_vcpu > 0.0) || !(s.max_vcpu >= s.initial_vcpu))
    fail(Errc::invalid_argument, "initial allocation must be positive and within max_vcpu");
  if (!(s.boot_delay >= 0.0)) fail(Errc::invalid_argument, "boot delay must be non-negative");
  if (!std::isfinite(s.kpi_target)) fail(Errc::invalid_argument, "KPI target must be finite");

  ScalingOutcome out;
  out.policy = policy.kind;
  double vcpu = s.initial_vcpu;
  std::optional<std::pair<double, double>> pending;  // (effective time, new vcpu)
  double above = 0.0;
  bool profile_done = false;

  const double t0 = trace.samples.front().first;
  const double t_end = trace.samples.back().first;
  const auto steps = static_cast<long>(std::floor((t_end - t0) / s.dt + 1e-9));
  auto apply_due = [&](double t) {
    if (pending && pending->first <= t + 1e-9) {
      out.events.push_back({t, vcpu, pending->second});
      vcpu = pending->second;
      pending.reset();
    }
  };
  for (long i = 0; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i) * s.dt;
    apply_due(t);

    if (policy.kind == PolicyKind::profile && !profile_done && !pending) {
      // The surge is announced: look ahead by the boot delay and act once
      // the profile says the current allocation will miss the target.
      const auto& p = policy.profile;
      const double upcoming = trace.at(t + s.boot_delay);
      if (upcoming > 0.0 &&
          predict_profile(*p.profile, allocation_config(gt, vcpu, trace.shape), upcoming) > s.kpi_target) {
        profile_done = true;
        double peak = upcoming;
        for (const auto& [ts, ws] : trace.samples)
          if (ts >= t - 1e-9) peak = std::max(peak, ws);
        SlaTarget sla{s.kpi_target, peak * (1.0 + p.headroom), {}};
        for (const auto& col : p.profile->schema().shape_columns()) {
          auto it = std::find_if(trace.shape.begin(), trace.shape.end(), [&](const auto& kv) { return kv.first == col; });
          if (it == trace.shape.end()) fail(Errc::invalid_argument, "workload shape is missing '" + col + "'");
          sla.shape.push_back(*it);
        }
        try {
          const auto rec = recommend(*p.profile, sla, p.recommend);
          const double target = std::min(rec.resources.at(0).second, s.max_vcpu);
          if (target > vcpu) {
            pending = std::make_pair(t + s.boot_delay, target);
            apply_due(t);
          } else {
            out.note = "recommendation does not exceed the current allocation";
          }
        } catch (const Error& e) {
          out.note = std::string(to_string(e.code())) + ": " + e.what();
        }
      }
    }

    const double w = trace.at(t);
    TruePoint truth{0.0, 0.0};
    if (w > 0.0) truth = true_kpi(gt, allocation_config(gt, vcpu, trace.shape), w);
    out.ticks.push_back({t, w, vcpu, truth.cpu_used, truth.kpi});
    if (truth.kpi > s.kpi_target) out.sla_violation_seconds += s.dt;
    out.vcpu_seconds += vcpu * s.dt;

    if (policy.kind == PolicyKind::threshold && !pending) {
      const auto& p = policy.threshold;
      if (truth.cpu_used / vcpu >= p.cpu_high - 1e-12) {
        above += s.dt;
        if (above >= p.cooldown - 1e-9 && vcpu < s.max_vcpu) {
          pending = std::make_pair(t + std::max(s.boot_delay, s.dt), std::min(vcpu + p.step, s.max_vcpu));
          above = 0.0;
        }
      } else {
        above = 0.0;
      }
    }
  }
  return out;
}

std::vector<ComparisonRow> compare(const std::vector<ScalingOutcome>& outcomes) {
  std::vector<ComparisonRow> rows;
  for (const auto& o : outcomes) {
    const auto& ref = outcomes.front().ticks;
    bool same = o.ticks.size() == ref.size();
    for (std::size_t i = 0; same && i < ref.size(); ++i) same = o.ticks[i].t == ref[i].t && o.ticks[i].workload == ref[i].workload;
    if (!same) fail(Errc::mismatched_traces, "outcomes were simulated on different workload traces");
    rows.push_back({o.policy, o.events.size(), o.sla_violation_seconds, o.vcpu_seconds});
  }
  return rows;
}

std::string outcome_to_csv(const ScalingOutcome& o) {
  std::ostringstream os;
  os << "t,workload,vcpu,cpu_used,kpi\n";
  for (const auto& k : o.ticks)
    os << format_number(k.t) << ',' << format_number(k.workload) << ',' << format_number(k.vcpu) << ','
       << format_number(k.cpu_used) << ',' << format_number(k.kpi) << '\n';
  return os.str();
}

std::string outcome_to_json(const ScalingOutcome& o) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["policy"] = std::string(to_string(o.policy));
  j["events"] = ordered_json::array();
  for (const auto& e : o.events) j["events"].push_back({{"t", e.t}, {"old_vcpu", e.old_vcpu}, {"new_vcpu", e.new_vcpu}});
  j["sla_violation_seconds"] = o.sla_violation_seconds;
  j["vcpu_seconds"] = o.vcpu_seconds;
  if (!o.note.empty()) j["note"] = o.note;
  return j.dump(2) + "\n";
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "policy,events,sla_violation_seconds,vcpu_seconds\n";
  for (const auto& r : rows)
    os << to_string(r.policy) << ',' << r.events << ',' << format_number(r.sla_violation_seconds) << ','
       << format_number(r.vcpu_seconds) << '\n';
  return os.str();
}

SurgeScenario canonical_surge_scenario() {
  SurgeScenario sc{GroundTruthRequest{}, {}, {}};
  for (int t = 0; t < 300; ++t) sc.trace.samples.emplace_back(t, t < 60 ? 10.0 : 50.0);
  sc.trace.shape = {{"filesize", 50.0}, {"hit_ratio", 90.0}};
  sc.settings.kpi_target = 5.0;
  sc.settings.initial_vcpu = 2.0;
  sc.settings.max_vcpu = 16.0;
  return sc;
}

}  // namespace vnfprof
