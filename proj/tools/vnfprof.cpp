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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vnfprof/curvefit.hpp"
#include "vnfprof/dataset.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/eval.hpp"
#include "vnfprof/recommend.hpp"
#include "vnfprof/scalesim.hpp"
#include "vnfprof/stability.hpp"
#include "vnfprof/synthvnf.hpp"

namespace fs = std::filesystem;
using namespace vnfprof;

namespace {

enum Exit { ok = 0, usage = 1, data = 2, fit_failure = 3, infeasible = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::invalid_argument:
      return usage;
    case Errc::singular_fit:
    case Errc::non_finite_loss:
    case Errc::unfitted_model:
    case Errc::too_few_samples:
    case Errc::insufficient_samples:
    case Errc::fit_diverged:
      return fit_failure;
    case Errc::target_unattainable:
    case Errc::target_infeasible:
    case Errc::extrapolation_bound:
      return infeasible;
    default:
      return data;
  }
}

// "k=v,k=v"
std::vector<std::pair<std::string, double>> parse_shape(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("malformed shape entry '" + item + "' (want name=value)");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw UsageError("malformed shape value in '" + item + "'");
    }
    if (used != item.size() - eq - 1) throw UsageError("malformed shape value in '" + item + "'");
    out.emplace_back(item.substr(0, eq), v);
  }
  return out;
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string vnf = "forwarding";
  std::string grid = "default";
  std::string gt_file;
  std::string family = "on_family";
  std::uint64_t seed = 1;
  double noise = 0.02;
  double hetero = 0.05;
  int reps = 1;
  double cap = 0.0;
  std::string out = "out";
};

int run_generate(const GenerateArgs& a) {
  GroundTruth gt = GroundTruthForwarding{};
  if (!a.gt_file.empty()) {
    gt = ground_truth_from_json(read_file(a.gt_file));
  } else {
    const auto kind = parse_vnf_kind(a.vnf);
    const auto family = parse_curve_family(a.family);
    if (kind == VnfKind::forwarding) {
      ForwardingLaw law;
      law.family = family;
      if (a.cap > 0.0) law.vcpu_cap = a.cap;
      gt = GroundTruthForwarding(law);
    } else {
      RequestLaw law;
      law.family = family;
      gt = GroundTruthRequest(law);
    }
  }
  gt = with_noise(gt, NoiseSpec{a.noise, a.hetero, a.seed});
  CampaignGrid grid;
  if (a.grid == "default") {
    grid = kind_of(gt) == VnfKind::forwarding
               ? default_forwarding_grid(a.reps)
               : default_request_grid(std::get<GroundTruthRequest>(gt).law(), a.reps);
  } else {
    grid = grid_from_json(read_file(a.grid));
  }
  CampaignStats stats;
  const auto ds = run_profiling_campaign(gt, grid, {}, a.seed, &stats);
  fs::create_directories(a.out);
  save_csv(ds, fs::path(a.out) / "dataset.csv");
  save_schema(ds.schema, fs::path(a.out) / "schema.json");
  write_file_atomic(fs::path(a.out) / "ground_truth.json", ground_truth_to_json(gt));
  std::cerr << "samples " << stats.samples << ", invalid (timeout) " << stats.timeouts << ", invalid (overload) "
            << stats.overloaded << "\n";
  return ok;
}

// ---------------------------------------------------------------- fit

int run_fit(const std::string& data_path, const std::string& schema_path, int window, const std::string& out) {
  const auto ds = load_csv(data_path, schema_path);
  TrainOptions opt;
  opt.window_n = window;
  const auto profile = train_profile(ds, opt);
  save_profile(profile, out);
  std::cerr << "entries " << profile.entries().size() << ", dropped " << profile.dropped().size() << "\n";
  return ok;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data, schema, report = "report.json";
  std::vector<std::string> models = {"curvefit", "knn", "interp", "regression"};
  int folds = 5;
  std::uint64_t seed = 1;
  bool buckets = false;
  std::vector<double> sweep;
};

int run_evaluate(const EvaluateArgs& a) {
  std::vector<ModelKind> kinds;
  for (const auto& m : a.models) {
    try {
      kinds.push_back(parse_model_kind(m));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const auto ds = load_csv(a.data, a.schema);
  ModelOptions opt;
  opt.regression.seed = opt.knn.seed = opt.mlp.seed = a.seed;
  const auto report = cross_validate(ds, kinds, a.folds, a.seed, opt);
  const auto buckets = default_loss_buckets();
  std::vector<SweepRow> sweep;
  if (!a.sweep.empty()) sweep = size_sweep(ds, kinds, a.sweep, a.folds, a.seed, opt);
  const fs::path out(a.report);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_file_atomic(out, report_to_json(report, a.buckets ? &buckets : nullptr, a.sweep.empty() ? nullptr : &sweep));
  if (a.buckets) write_file_atomic(sibling(out, ".buckets.csv"), buckets_to_csv(report, buckets));
  if (!a.sweep.empty()) write_file_atomic(sibling(out, ".sweep.csv"), sweep_to_csv(sweep, kinds));
  for (const auto& m : report.models) {
    if (m.metrics)
      std::cerr << to_string(m.kind) << ": mae " << format_number(m.metrics->mae) << ", rmse "
                << format_number(m.metrics->rmse) << "\n";
    else
      std::cerr << to_string(m.kind) << ": failed (" << m.error << ")\n";
  }
  return ok;
}

// ---------------------------------------------------------------- recommend

struct RecommendArgs {
  std::string profile, shape, out;
  double kpi_target = 0.0, workload_target = 0.0;
  RecommendOptions opt;
  bool latency = false;
};

int run_recommend(const RecommendArgs& a) {
  SlaTarget sla{a.kpi_target, a.workload_target, parse_shape(a.shape)};
  const auto profile = load_profile(a.profile);
  try {
    const auto rec = recommend(profile, sla, a.opt);
    const auto text = recommendation_to_json(rec, a.latency);
    if (!a.out.empty()) write_file_atomic(a.out, text);
    std::cout << text;
    return ok;
  } catch (const Error& e) {
    if (e.code() != Errc::target_infeasible && e.code() != Errc::extrapolation_bound) throw;
    nlohmann::ordered_json j;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    const auto table = max_workload_table(profile, sla, a.opt.neighbors_per_side);
    const auto filtered = filter_non_improving(table, a.opt.epsilon_rel);
    Recommendation evidence;
    evidence.per_resource_table = table;
    evidence.cap = filtered.cap;
    const auto ev = nlohmann::ordered_json::parse(recommendation_to_json(evidence));
    j["per_resource_table"] = ev["per_resource_table"];
    j["cap"] = ev["cap"];
    std::cout << j.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return infeasible;
  }
}

// ---------------------------------------------------------------- scalesim

struct ScalesimArgs {
  std::string profile, gt, trace, shape, out = "scalesim";
  std::vector<std::string> policies = {"threshold", "profile"};
  double kpi_target = 0.0, initial_vcpu = 0.0, boot_delay = 0.0;
  ThresholdParams threshold;
  double headroom = 0.0;
};

int run_scalesim(const ScalesimArgs& a) {
  auto sc = canonical_surge_scenario();
  if (!a.gt.empty()) sc.gt = ground_truth_from_json(read_file(a.gt));
  if (!a.trace.empty()) {
    auto shape = sc.trace.shape;
    sc.trace = workload_trace_from_csv(read_file(a.trace));
    sc.trace.shape = shape;
  }
  if (!a.shape.empty()) sc.trace.shape = parse_shape(a.shape);
  if (a.kpi_target > 0.0) sc.settings.kpi_target = a.kpi_target;
  if (a.initial_vcpu > 0.0) sc.settings.initial_vcpu = a.initial_vcpu;
  sc.settings.boot_delay = a.boot_delay;

  std::optional<VnfProfile> profile;
  std::vector<ScalingOutcome> outcomes;
  fs::create_directories(a.out);
  for (const auto& name : a.policies) {
    ScalingPolicy policy;
    try {
      policy.kind = parse_policy_kind(name);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    policy.threshold = a.threshold;
    if (policy.kind == PolicyKind::profile) {
      if (a.profile.empty()) throw UsageError("the profile policy needs --profile");
      if (!profile) profile = load_profile(a.profile);
      policy.profile.profile = &*profile;
      policy.profile.headroom = a.headroom;
    }
    auto outcome = simulate(sc.gt, sc.trace, policy, sc.settings);
    const fs::path base = fs::path(a.out) / std::string(to_string(policy.kind));
    write_file_atomic(base.string() + "_outcome.csv", outcome_to_csv(outcome));
    write_file_atomic(base.string() + "_outcome.json", outcome_to_json(outcome));
    outcomes.push_back(std::move(outcome));
  }
  const auto rows = compare(outcomes);
  write_file_atomic(fs::path(a.out) / "comparison.csv", comparison_to_csv(rows));
  write_file_atomic(fs::path(a.out) / "trace.csv", workload_trace_to_csv(sc.trace));
  std::cout << comparison_to_csv(rows);
  return ok;
}

// ---------------------------------------------------------------- stability

int run_stability_cmd(const std::string& trace_path, const StabilityConfig& cfg) {
  const auto trace = load_trace_csv(trace_path);
  const auto v = run_stability(trace, cfg);
  nlohmann::ordered_json j;
  j["stable"] = v.stable;
  j["detected_at"] = v.detected_at ? nlohmann::ordered_json(*v.detected_at) : nlohmann::ordered_json(nullptr);
  j["recorded_means"] = nlohmann::ordered_json::object();
  for (const auto& [k, m] : v.recorded_means) j["recorded_means"][k] = m;
  std::cout << j.dump(2) << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VNF performance profiling toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Run a synthetic profiling campaign");
  g->add_option("--vnf", gen.vnf, "forwarding or request")->check(CLI::IsMember({"forwarding", "request"}));
  g->add_option("--grid", gen.grid, "'default' or a grid JSON file");
  g->add_option("--gt", gen.gt_file, "Ground-truth JSON (overrides --vnf, --family, --cap)");
  g->add_option("--family", gen.family, "on_family or hard_knee")->check(CLI::IsMember({"on_family", "hard_knee"}));
  g->add_option("--seed", gen.seed);
  g->add_option("--noise", gen.noise, "Relative noise sigma")->check(CLI::NonNegativeNumber);
  g->add_option("--hetero", gen.hetero, "KPI-proportional noise sigma")->check(CLI::NonNegativeNumber);
  g->add_option("--reps", gen.reps)->check(CLI::PositiveNumber);
  g->add_option("--cap", gen.cap, "vCPU cap of the forwarding truth")->check(CLI::NonNegativeNumber);
  g->add_option("--out", gen.out, "Output directory");

  std::string fit_data, fit_schema, fit_out = "profile.json";
  int fit_window = 5;
  auto* f = app.add_subcommand("fit", "Train a curve-fit profile");
  f->add_option("--data", fit_data)->required();
  f->add_option("--schema", fit_schema)->required();
  f->add_option("--window", fit_window)->check(CLI::Range(3, 1000));
  f->add_option("--out", fit_out);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Cross-validate models");
  e->add_option("--data", ev.data)->required();
  e->add_option("--schema", ev.schema)->required();
  e->add_option("--models", ev.models)->delimiter(',');
  e->add_option("--folds", ev.folds)->check(CLI::Range(2, 1000));
  e->add_option("--seed", ev.seed);
  e->add_option("--report", ev.report);
  e->add_flag("--buckets", ev.buckets, "Add loss-bucketed MAE");
  e->add_option("--size-sweep", ev.sweep, "Training-size fractions")->delimiter(',');

  RecommendArgs rec;
  auto* r = app.add_subcommand("recommend", "Recommend a resource allocation for an SLA");
  r->add_option("--profile", rec.profile)->required();
  r->add_option("--kpi-target", rec.kpi_target)->required();
  r->add_option("--workload-target", rec.workload_target)->required();
  r->add_option("--shape", rec.shape, "name=value,...");
  r->add_option("--granularity", rec.opt.granularity)->check(CLI::PositiveNumber);
  r->add_option("--extrapolation-factor", rec.opt.extrapolation_factor);
  r->add_option("--epsilon", rec.opt.epsilon_rel)->check(CLI::NonNegativeNumber);
  r->add_option("--out", rec.out, "Also write the JSON here");
  r->add_flag("--latency", rec.latency, "Include lookup latency in the JSON");

  ScalesimArgs ss;
  auto* s = app.add_subcommand("scalesim", "Simulate autoscaling policies on a workload trace");
  s->add_option("--profile", ss.profile);
  s->add_option("--gt", ss.gt, "Ground-truth JSON (default: cache truth)");
  s->add_option("--trace", ss.trace, "CSV t,workload (default: canonical surge)");
  s->add_option("--shape", ss.shape, "name=value,...");
  s->add_option("--policy", ss.policies)->delimiter(',');
  s->add_option("--kpi-target", ss.kpi_target);
  s->add_option("--initial-vcpu", ss.initial_vcpu);
  s->add_option("--boot-delay", ss.boot_delay)->check(CLI::NonNegativeNumber);
  s->add_option("--cpu-high", ss.threshold.cpu_high);
  s->add_option("--step", ss.threshold.step);
  s->add_option("--cooldown", ss.threshold.cooldown);
  s->add_option("--headroom", ss.headroom)->check(CLI::NonNegativeNumber);
  s->add_option("--out", ss.out, "Output directory");

  std::string st_trace;
  StabilityConfig st_cfg;
  auto* st = app.add_subcommand("stability", "Run the stability detector on a metric trace");
  st->add_option("--trace", st_trace)->required();
  st->add_option("--window", st_cfg.window_seconds);
  st->add_option("--consecutive", st_cfg.consecutive_windows);
  st->add_option("--eps-mean", st_cfg.eps_mean);
  st->add_option("--eps-std", st_cfg.eps_std);
  st->add_option("--timeout", st_cfg.timeout_seconds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return usage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*f) return run_fit(fit_data, fit_schema, fit_window, fit_out);
    if (*e) return run_evaluate(ev);
    if (*r) return run_recommend(rec);
    if (*s) return run_scalesim(ss);
    if (*st) return run_stability_cmd(st_trace, st_cfg);
  } catch (const UsageError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return usage;
  } catch (const Error& ex) {
    std::cerr << "error (" << to_string(ex.code()) << "): " << ex.what() << "\n";
    return exit_code_for(ex.code());
  } catch (const fs::filesystem_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return data;
  }
  return usage;
}
