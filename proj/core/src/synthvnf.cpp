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

#include "vnfprof/synthvnf.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"
#include "vnfprof/curves.hpp"
#include "vnfprof/errors.hpp"

namespace vnfprof {

namespace {

using nlohmann::json;

double require_column(const ConfigurationKey& config, std::string_view name) {
  auto v = config.find(name);
  if (!v) fail(Errc::unknown_configuration, "configuration " + config.to_string() + " has no '" + std::string(name) + "'");
  return *v;
}

void check_noise(const NoiseSpec& noise) {
  if (!(noise.relative_sigma >= 0.0) || !(noise.hetero_factor >= 0.0))
    fail(Errc::invalid_argument, "noise sigmas must be non-negative");
}

// Measurement reading at second t of a ramping measurement.
TruePoint reading(const TruePoint& truth, int t, double tau, const NoiseSpec& noise, Rng& rng, VnfKind kind) {
  const double ramp = tau > 0.0 ? 1.0 - std::exp(-static_cast<double>(t) / tau) : 1.0;
  return sample_with_noise({truth.cpu_used * ramp, truth.kpi * ramp}, noise, rng, kind);
}

}  // namespace

std::string_view to_string(CurveFamily f) noexcept { return f == CurveFamily::hard_knee ? "hard_knee" : "on_family"; }

CurveFamily parse_curve_family(std::string_view s) {
  if (s == "on_family") return CurveFamily::on_family;
  if (s == "hard_knee") return CurveFamily::hard_knee;
  fail(Errc::malformed_input, "unknown curve family '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- forwarding

GroundTruthForwarding::GroundTruthForwarding(ForwardingLaw law, NoiseSpec noise, std::optional<double> workload_ceiling)
    : law_(law), noise_(noise), ceiling_(workload_ceiling) {
  check_noise(noise_);
  if (!(law_.kappa > 0.0) || !(law_.softness > 0.0) || !(law_.knee_ratio > 0.0) || law_.flow_penalty < 0.0)
    fail(Errc::invalid_argument, "forwarding law parameters must be positive");
  if (law_.vcpu_cap && !(*law_.vcpu_cap > 0.0)) fail(Errc::invalid_argument, "vCPU cap must be positive");
}

double GroundTruthForwarding::saturation_throughput(const ConfigurationKey& config) const {
  const double vcpu = require_column(config, "vcpu");
  const double size = require_column(config, "packetsize");
  const double flows = require_column(config, "flows");
  if (!(vcpu > 0.0) || !(size > 0.0) || !(flows >= 1.0))
    fail(Errc::unknown_configuration, "configuration " + config.to_string() + " is outside the law's domain");
  const double effective = law_.vcpu_cap ? std::min(vcpu, *law_.vcpu_cap) : vcpu;
  return law_.kappa * effective * std::pow(size / 1500.0, -law_.size_exponent) /
         (1.0 + law_.flow_penalty * std::log10(flows));
}

ForwardingCurve GroundTruthForwarding::curve(const ConfigurationKey& config) const {
  ForwardingCurve k;
  k.c = saturation_throughput(config);
  k.b = law_.knee_ratio * k.c;
  k.a = law_.softness / k.b;
  k.d = law_.sat_offset * k.c;
  if (law_.family == CurveFamily::hard_knee) {
    k.boundary = k.c + k.d;
    return k;
  }
  // First crossing of the two branches above c + d.
  auto gap = [&](double x) { return curves::forwarding_nonsat(k.a, k.b, x) - curves::forwarding_sat_raw(k.c, k.d, x); };
  const double start = k.c + k.d;
  double lo = start, hi = start;
  bool found = false;
  for (double delta = 1e-9; delta <= 100.0; delta *= 1.5) {
    hi = start + k.c * delta;
    if (gap(hi) < 0.0) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) {
    k.boundary = std::numeric_limits<double>::infinity();
    return k;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  k.boundary = 0.5 * (lo + hi);
  return k;
}

TruePoint GroundTruthForwarding::evaluate(const ConfigurationKey& config, double rate) const {
  if (!(rate > 0.0)) fail(Errc::invalid_argument, "packet rate must be positive");
  const auto k = curve(config);
  const double vcpu = require_column(config, "vcpu");
  const double usable = law_.vcpu_cap ? std::min(vcpu, *law_.vcpu_cap) : vcpu;
  TruePoint p;
  // Usage saturates where the loss curve switches to its saturated branch.
  const double knee = std::isfinite(k.boundary) ? k.boundary : k.c;
  p.cpu_used = usable * std::min(1.0, rate / knee);
  if (law_.family == CurveFamily::hard_knee) {
    p.kpi = std::max(0.0, 100.0 * (1.0 - k.c / std::max(rate - k.d, k.c)));
  } else if (rate <= k.boundary) {
    p.kpi = curves::forwarding_nonsat(k.a, k.b, rate);
  } else {
    p.kpi = curves::forwarding_sat(k.c, k.d, rate);
  }
  p.kpi = std::clamp(p.kpi, 0.0, 100.0);
  return p;
}

// ---------------------------------------------------------------- request

GroundTruthRequest::GroundTruthRequest(RequestLaw law, NoiseSpec noise, std::optional<double> workload_ceiling)
    : law_(std::move(law)), noise_(noise), ceiling_(workload_ceiling) {
  check_noise(noise_);
  if (!(law_.onset_per_vcpu > 0.0) || law_.base_ms < 0.0 || !(law_.per_request_ms > 0.0) || law_.miss_penalty < 0.0 ||
      !(law_.ramp_fraction > 0.0))
    fail(Errc::invalid_argument, "request law parameters out of range");
  if (law_.bandwidth_tie.empty()) fail(Errc::invalid_argument, "bandwidth tie needs at least one (vcpu, Gbps) pair");
  std::sort(law_.bandwidth_tie.begin(), law_.bandwidth_tie.end());
}

double GroundTruthRequest::tied_bandwidth(double vcpu) const {
  const auto& tie = law_.bandwidth_tie;
  if (tie.size() == 1) return tie.front().second;
  std::size_t i = 1;
  while (i + 1 < tie.size() && vcpu > tie[i].first) ++i;
  const auto& [x0, y0] = tie[i - 1];
  const auto& [x1, y1] = tie[i];
  const double v = y0 + (y1 - y0) * (vcpu - x0) / (x1 - x0);
  return std::max(v, 1e-3);
}

RequestCurve GroundTruthRequest::curve(const ConfigurationKey& config) const {
  const double vcpu = require_column(config, "vcpu");
  const double bw = require_column(config, "bandwidth");
  const double fs = require_column(config, "filesize");
  const double hit = require_column(config, "hit_ratio");
  if (!(vcpu > 0.0) || !(bw > 0.0) || !(fs > 0.0) || hit < 0.0 || hit > 100.0)
    fail(Errc::unknown_configuration, "configuration " + config.to_string() + " is outside the law's domain");
  const double h = hit / 100.0;
  const double transfer_ms = fs * 8e-3 / bw;
  RequestCurve k;
  k.d = (law_.per_request_ms / vcpu + transfer_ms) * (1.0 + law_.miss_penalty * (1.0 - h));
  k.a = law_.base_ms + transfer_ms;
  double onset = law_.onset_per_vcpu * vcpu * (0.5 + 0.5 * h);
  const double lift = law_.ramp_fraction * k.a;
  k.e = onset - (k.a + lift) / k.d;
  if (k.e < 0.0) {
    k.e = 0.0;
    onset = (k.a + lift) / k.d;
  }
  k.boundary = onset;
  k.b = std::log(100.0 * law_.ramp_fraction) / onset;
  k.c = onset - std::log(lift) / k.b;
  return k;
}

TruePoint GroundTruthRequest::evaluate(const ConfigurationKey& config, double concurrency) const {
  if (!(concurrency > 0.0)) fail(Errc::invalid_argument, "concurrency must be positive");
  const auto k = curve(config);
  const double vcpu = require_column(config, "vcpu");
  TruePoint p;
  p.cpu_used = vcpu * std::min(1.0, concurrency / k.boundary);
  if (law_.family == CurveFamily::hard_knee) {
    p.kpi = k.a + std::max(0.0, k.d * (concurrency - k.boundary));
  } else if (concurrency <= k.boundary) {
    p.kpi = curves::request_nonsat(k.a, k.b, k.c, concurrency);
  } else {
    p.kpi = curves::request_sat(k.d, k.e, concurrency);
  }
  return p;
}

// ---------------------------------------------------------------- variant helpers

VnfKind kind_of(const GroundTruth& gt) noexcept {
  return std::holds_alternative<GroundTruthForwarding>(gt) ? VnfKind::forwarding : VnfKind::request;
}

const NoiseSpec& noise_of(const GroundTruth& gt) noexcept {
  return std::visit([](const auto& g) -> const NoiseSpec& { return g.noise(); }, gt);
}

TruePoint true_kpi(const GroundTruth& gt, const ConfigurationKey& config, double workload) {
  return std::visit([&](const auto& g) { return g.evaluate(config, workload); }, gt);
}

GroundTruth with_noise(const GroundTruth& gt, const NoiseSpec& noise) {
  if (const auto* f = std::get_if<GroundTruthForwarding>(&gt))
    return GroundTruthForwarding(f->law(), noise, f->workload_ceiling());
  const auto& r = std::get<GroundTruthRequest>(gt);
  return GroundTruthRequest(r.law(), noise, r.workload_ceiling());
}

MetricSchema forwarding_schema() {
  return MetricSchema(VnfKind::forwarding, "loss", "packetrate", "cpu_used",
                      {{"vcpu", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"packetsize", MetricCategory::workload, MetricScale::log, "B"},
                       {"flows", MetricCategory::workload, MetricScale::log, "count"},
                       {"packetrate", MetricCategory::workload, MetricScale::log, "kpps"},
                       {"cpu_used", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"loss", MetricCategory::performance, MetricScale::linear, "%"}});
}

MetricSchema request_schema() {
  return MetricSchema(VnfKind::request, "response_time", "concurrency", "cpu_used",
                      {{"vcpu", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"bandwidth", MetricCategory::resource, MetricScale::linear, "Gbps"},
                       {"filesize", MetricCategory::workload, MetricScale::log, "kB"},
                       {"hit_ratio", MetricCategory::workload, MetricScale::linear, "%"},
                       {"concurrency", MetricCategory::workload, MetricScale::linear, "requests"},
                       {"cpu_used", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"response_time", MetricCategory::performance, MetricScale::linear, "ms"}});
}

MetricSchema schema_for(VnfKind kind) { return kind == VnfKind::forwarding ? forwarding_schema() : request_schema(); }

// ---------------------------------------------------------------- noise & traces

TruePoint sample_with_noise(const TruePoint& truth, const NoiseSpec& noise, Rng& rng, VnfKind kind) {
  TruePoint out = truth;
  if (noise.relative_sigma > 0.0 || noise.hetero_factor > 0.0) {
    const double n_rel = rng.normal();
    const double n_het = rng.normal();
    const double n_cpu = rng.normal();
    out.kpi = truth.kpi * (1.0 + noise.relative_sigma * n_rel) + std::abs(truth.kpi) * noise.hetero_factor * n_het;
    out.cpu_used = truth.cpu_used * (1.0 + noise.relative_sigma * n_cpu);
  }
  out.kpi = std::max(out.kpi, 0.0);
  if (kind == VnfKind::forwarding) out.kpi = std::min(out.kpi, 100.0);
  out.cpu_used = std::max(out.cpu_used, 0.0);
  return out;
}

MetricTrace emit_timeseries(const GroundTruth& gt, const ConfigurationKey& config, double workload, int duration_s,
                            Rng& rng, double tau) {
  if (duration_s < 1) fail(Errc::invalid_argument, "time series duration must be at least 1 s");
  const auto kind = kind_of(gt);
  const auto schema = schema_for(kind);
  const auto truth = true_kpi(gt, config, workload);
  MetricTrace trace;
  trace.names = {schema.usage_column(), schema.kpi_name()};
  for (int t = 1; t <= duration_s; ++t) {
    const auto r = reading(truth, t, tau, noise_of(gt), rng, kind);
    trace.push(static_cast<double>(t), {r.cpu_used, r.kpi});
  }
  return trace;
}

// ---------------------------------------------------------------- grids

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) fail(Errc::invalid_argument, "log_spaced: bad range");
  std::vector<double> v;
  if (n == 1) return {lo};
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (int i = 0; i < n; ++i) v.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (n - 1)));
  v.back() = hi;
  v.front() = lo;
  return v;
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
  if (n < 1 || !(hi >= lo)) fail(Errc::invalid_argument, "lin_spaced: bad range");
  if (n == 1) return {lo};
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  v.back() = hi;
  return v;
}

CampaignGrid default_forwarding_grid(int repetitions) {
  CampaignGrid g;
  g.workloads = log_spaced(0.1, 1000.0, 20);
  g.shape = {{"packetsize", {64, 128, 512, 1024, 1500}}, {"flows", {1, 2, 10, 100, 1000, 10000}}};
  for (double v : {0.25, 0.5, 0.75, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) g.resources.push_back({{"vcpu", v}});
  g.repetitions = repetitions;
  return g;
}

CampaignGrid default_request_grid(const RequestLaw& law, int repetitions) {
  CampaignGrid g;
  g.workloads = lin_spaced(1.0, 60.0, 15);
  g.shape = {{"filesize", {1, 5, 10, 50, 100, 500, 1000}}, {"hit_ratio", {10, 50, 90}}};
  auto tie = law.bandwidth_tie;
  std::sort(tie.begin(), tie.end());
  for (const auto& [vcpu, bw] : tie) g.resources.push_back({{"vcpu", vcpu}, {"bandwidth", bw}});
  g.repetitions = repetitions;
  return g;
}

void CampaignGrid::validate(const MetricSchema& schema) const {
  if (workloads.empty() || resources.empty() || repetitions < 1)
    fail(Errc::invalid_argument, "campaign grid needs workloads, resources and at least one repetition");
  if (!std::is_sorted(workloads.begin(), workloads.end()))
    fail(Errc::invalid_argument, "campaign workloads must be sorted ascending");
  for (double w : workloads)
    if (!(w > 0.0)) fail(Errc::invalid_argument, "campaign workloads must be positive");
  std::set<std::string> names;
  for (const auto& [name, values] : shape) {
    if (values.empty()) fail(Errc::invalid_argument, "shape column '" + name + "' has no values");
    names.insert(name);
  }
  const auto& sc = schema.shape_columns();
  if (names != std::set<std::string>(sc.begin(), sc.end()) || names.size() != shape.size())
    fail(Errc::schema_mismatch, "grid shape columns do not match the schema");
  const auto& rc = schema.resource_columns();
  for (const auto& r : resources) {
    std::set<std::string> rn;
    for (const auto& [n, v] : r) {
      if (!(v > 0.0)) fail(Errc::invalid_argument, "resource allocation '" + n + "' must be positive");
      rn.insert(n);
    }
    if (rn != std::set<std::string>(rc.begin(), rc.end()) || rn.size() != r.size())
      fail(Errc::schema_mismatch, "grid resource entry does not match the schema resource columns");
  }
}

std::size_t CampaignGrid::configuration_count() const {
  std::size_t n = resources.size();
  for (const auto& [name, values] : shape) n *= values.size();
  return n;
}

std::vector<ConfigurationKey> CampaignGrid::configurations(const MetricSchema& schema) const {
  validate(schema);
  std::vector<ConfigurationKey> out;
  std::vector<std::size_t> idx(shape.size(), 0);
  for (const auto& res : resources) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      std::map<std::string, double> vals(res.begin(), res.end());
      for (std::size_t j = 0; j < shape.size(); ++j) vals[shape[j].first] = shape[j].second[idx[j]];
      std::vector<std::pair<std::string, double>> ordered;
      for (const auto& c : schema.config_columns()) ordered.emplace_back(c, vals.at(c));
      out.emplace_back(std::move(ordered));
      // Odometer over shape values, last column fastest.
      std::size_t j = shape.size();
      while (j > 0) {
        --j;
        if (++idx[j] < shape[j].second.size()) break;
        idx[j] = 0;
        if (j == 0) {
          j = shape.size() + 1;
          break;
        }
      }
      if (shape.empty() || j == shape.size() + 1) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- campaign

ProfiledDataset run_profiling_campaign(const GroundTruth& gt, const CampaignGrid& grid, const CampaignOptions& options,
                                       std::uint64_t seed, CampaignStats* stats) {
  const auto kind = kind_of(gt);
  ProfiledDataset ds;
  ds.schema = schema_for(kind);
  const auto configs = grid.configurations(ds.schema);
  const auto& noise = noise_of(gt);
  const auto ceiling = std::visit([](const auto& g) { return g.workload_ceiling(); }, gt);

  StabilityConfig scfg = options.stability;
  if (options.calibration_margin) {
    // Steady unit-level trace at the campaign's noise level.
    Rng cal = Rng::split(seed, std::numeric_limits<std::uint64_t>::max());
    MetricTrace steady;
    steady.names = {"cpu", "kpi"};
    for (int t = 1; t <= 120; ++t) {
      auto r = sample_with_noise({1.0, 1.0}, noise, cal, kind);
      steady.push(t, {r.cpu_used, r.kpi});
    }
    auto th = calibrate(steady, *options.calibration_margin, scfg.window_seconds, scfg.positivity_offset);
    scfg.eps_mean = std::max(th.eps_mean, options.eps_floor);
    scfg.eps_std = std::max(th.eps_std, options.eps_floor);
  }
  scfg.validate();

  CampaignStats local;
  local.thresholds = {scfg.eps_mean, scfg.eps_std};
  const std::size_t W = grid.workloads.size();
  const std::size_t R = static_cast<std::size_t>(grid.repetitions);
  ds.samples.reserve(configs.size() * W * R);
  std::deque<TruePoint> last;

  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const auto& config = configs[ci];
    for (std::size_t wi = 0; wi < W; ++wi) {
      const double workload = grid.workloads[wi];
      const auto truth = true_kpi(gt, config, workload);
      for (std::size_t rep = 0; rep < R; ++rep) {
        Rng rng = Rng::split(seed, (ci * W + wi) * R + rep);
        StabilityDetector det(scfg);
        last.clear();
        bool stable = false;
        for (int t = 1; t <= scfg.timeout_seconds; ++t) {
          const auto r = reading(truth, t, options.ramp_tau, noise, rng, kind);
          last.push_back(r);
          if (last.size() > static_cast<std::size_t>(scfg.window_seconds)) last.pop_front();
          const double m[2] = {r.cpu_used, r.kpi};
          if (det.step(m)) {
            stable = true;
            break;
          }
        }
        ProfiledSample s;
        s.config = config;
        s.workload = workload;
        s.repetition = static_cast<int>(rep);
        for (const auto& p : last) {
          s.resource_used += p.cpu_used;
          s.kpi += p.kpi;
        }
        s.resource_used /= static_cast<double>(last.size());
        s.kpi /= static_cast<double>(last.size());
        s.valid = stable;
        if (!stable) ++local.timeouts;
        if (ceiling && workload > *ceiling) {
          s.valid = false;
          ++local.overloaded;
        }
        ds.samples.push_back(std::move(s));
      }
    }
  }
  local.samples = ds.samples.size();
  if (stats) *stats = local;
  return ds;
}

// ---------------------------------------------------------------- JSON

namespace {

json noise_json(const NoiseSpec& n) {
  return {{"relative_sigma", n.relative_sigma}, {"hetero_factor", n.hetero_factor}, {"seed", n.seed}};
}

NoiseSpec noise_from(const json& j) {
  NoiseSpec n;
  n.relative_sigma = j.value("relative_sigma", n.relative_sigma);
  n.hetero_factor = j.value("hetero_factor", n.hetero_factor);
  n.seed = j.value("seed", n.seed);
  return n;
}

}  // namespace

std::string ground_truth_to_json(const GroundTruth& gt) {
  json j;
  j["kind"] = std::string(to_string(kind_of(gt)));
  j["noise"] = noise_json(noise_of(gt));
  if (const auto* f = std::get_if<GroundTruthForwarding>(&gt)) {
    const auto& l = f->law();
    j["family"] = std::string(to_string(l.family));
    j["law"] = {{"kappa", l.kappa},       {"size_exponent", l.size_exponent}, {"flow_penalty", l.flow_penalty},
                {"softness", l.softness}, {"knee_ratio", l.knee_ratio},       {"sat_offset", l.sat_offset}};
    j["law"]["vcpu_cap"] = l.vcpu_cap ? json(*l.vcpu_cap) : json(nullptr);
    j["workload_ceiling"] = f->workload_ceiling() ? json(*f->workload_ceiling()) : json(nullptr);
  } else {
    const auto& r = std::get<GroundTruthRequest>(gt);
    const auto& l = r.law();
    j["family"] = std::string(to_string(l.family));
    j["law"] = {{"onset_per_vcpu", l.onset_per_vcpu}, {"base_ms", l.base_ms},           {"per_request_ms", l.per_request_ms},
                {"miss_penalty", l.miss_penalty},     {"ramp_fraction", l.ramp_fraction}};
    j["law"]["bandwidth_tie"] = json::array();
    for (const auto& [v, b] : l.bandwidth_tie) j["law"]["bandwidth_tie"].push_back({v, b});
    j["workload_ceiling"] = r.workload_ceiling() ? json(*r.workload_ceiling()) : json(nullptr);
  }
  return j.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("ground truth is not valid JSON: ") + e.what());
  }
  try {
    const auto kind = parse_vnf_kind(j.at("kind").get<std::string>());
    const auto noise = noise_from(j.value("noise", json::object()));
    const auto family = parse_curve_family(j.value("family", std::string("on_family")));
    std::optional<double> ceiling;
    if (j.contains("workload_ceiling") && !j["workload_ceiling"].is_null()) ceiling = j["workload_ceiling"].get<double>();
    const json law = j.value("law", json::object());
    if (kind == VnfKind::forwarding) {
      ForwardingLaw l;
      l.family = family;
      l.kappa = law.value("kappa", l.kappa);
      l.size_exponent = law.value("size_exponent", l.size_exponent);
      l.flow_penalty = law.value("flow_penalty", l.flow_penalty);
      l.softness = law.value("softness", l.softness);
      l.knee_ratio = law.value("knee_ratio", l.knee_ratio);
      l.sat_offset = law.value("sat_offset", l.sat_offset);
      if (law.contains("vcpu_cap") && !law["vcpu_cap"].is_null()) l.vcpu_cap = law["vcpu_cap"].get<double>();
      return GroundTruthForwarding(l, noise, ceiling);
    }
    RequestLaw l;
    l.family = family;
    l.onset_per_vcpu = law.value("onset_per_vcpu", l.onset_per_vcpu);
    l.base_ms = law.value("base_ms", l.base_ms);
    l.per_request_ms = law.value("per_request_ms", l.per_request_ms);
    l.miss_penalty = law.value("miss_penalty", l.miss_penalty);
    l.ramp_fraction = law.value("ramp_fraction", l.ramp_fraction);
    if (law.contains("bandwidth_tie")) {
      l.bandwidth_tie.clear();
      for (const auto& p : law["bandwidth_tie"]) l.bandwidth_tie.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    return GroundTruthRequest(l, noise, ceiling);
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("ground truth has a malformed field: ") + e.what());
  }
}

std::string grid_to_json(const CampaignGrid& grid) {
  json j;
  j["workloads"] = grid.workloads;
  j["shape"] = json::array();
  for (const auto& [name, values] : grid.shape) j["shape"].push_back({{"name", name}, {"values", values}});
  j["resources"] = json::array();
  for (const auto& r : grid.resources) {
    json o = json::object();
    for (const auto& [n, v] : r) o[n] = v;
    j["resources"].push_back(o);
  }
  j["repetitions"] = grid.repetitions;
  return j.dump(2) + "\n";
}

CampaignGrid grid_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("grid is not valid JSON: ") + e.what());
  }
  try {
    CampaignGrid g;
    g.workloads = j.at("workloads").get<std::vector<double>>();
    for (const auto& s : j.at("shape"))
      g.shape.emplace_back(s.at("name").get<std::string>(), s.at("values").get<std::vector<double>>());
    for (const auto& r : j.at("resources")) {
      std::vector<std::pair<std::string, double>> entry;
      for (auto it = r.begin(); it != r.end(); ++it) entry.emplace_back(it.key(), it.value().get<double>());
      g.resources.push_back(std::move(entry));
    }
    g.repetitions = j.value("repetitions", 1);
    return g;
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("grid has a malformed field: ") + e.what());
  }
}

}  // namespace vnfprof
