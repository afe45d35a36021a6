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

#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/scalesim.hpp"

using namespace vnfprof;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

const VnfProfile& request_profile() {
  static const VnfProfile p = train_profile(
      run_profiling_campaign(with_noise(canonical_surge_scenario().gt, NoiseSpec{0, 0, 1}), default_request_grid(), {}, 7));
  return p;
}

ScalingPolicy threshold_policy() { return ScalingPolicy{}; }

ScalingPolicy profile_policy() {
  ScalingPolicy p;
  p.kind = PolicyKind::profile;
  p.profile.profile = &request_profile();
  return p;
}

WorkloadTrace flat(double w, double duration) {
  WorkloadTrace t{{{0, w}, {duration, w}}, canonical_surge_scenario().trace.shape};
  return t;
}

}  // namespace

TEST_CASE("workload trace hold and validation") {
  WorkloadTrace t{{{0, 5}, {10, 20}, {30, 0}}, {}};
  CHECK(t.at(-1) == 5);
  CHECK(t.at(9.9) == 5);
  CHECK(t.at(10) == 20);
  CHECK(t.at(100) == 0);
  CHECK(code_of([] { WorkloadTrace{{}, {}}.validate(); }) == Errc::empty_trace);
  CHECK(code_of([] { WorkloadTrace{{{1, 1}, {1, 2}}, {}}.validate(); }) == Errc::malformed_input);
  CHECK(code_of([] { WorkloadTrace{{{1, -1}}, {}}.validate(); }) == Errc::malformed_input);
}

TEST_CASE("workload trace csv") {
  WorkloadTrace t{{{0, 10}, {60, 50}, {300, 50}}, {}};
  CHECK(workload_trace_from_csv(workload_trace_to_csv(t)).samples == t.samples);
  CHECK(code_of([] { workload_trace_from_csv(""); }) == Errc::empty_trace);
  CHECK(code_of([] { workload_trace_from_csv("time,load\n1,2\n"); }) == Errc::malformed_input);
  CHECK(code_of([] { workload_trace_from_csv("t,workload\n1,x\n"); }) == Errc::non_numeric_cell);
  CHECK(code_of([] { workload_trace_from_csv("t,workload\n1,2,3\n"); }) == Errc::malformed_input);
}

TEST_CASE("policy validation") {
  CHECK(parse_policy_kind("threshold") == PolicyKind::threshold);
  CHECK(parse_policy_kind("profile") == PolicyKind::profile);
  CHECK(code_of([] { parse_policy_kind("magic"); }) == Errc::invalid_argument);
  auto p = threshold_policy();
  p.threshold.cpu_high = 1.5;
  CHECK(code_of([&] { p.validate(); }) == Errc::invalid_argument);
  p = threshold_policy();
  p.threshold.step = 0;
  CHECK(code_of([&] { p.validate(); }) == Errc::invalid_argument);
  ScalingPolicy q;
  q.kind = PolicyKind::profile;
  CHECK(code_of([&] { q.validate(); }) == Errc::unfitted_profile);
}

TEST_CASE("a light flat workload never scales") {
  const auto sc = canonical_surge_scenario();
  for (const auto& pol : {threshold_policy(), profile_policy()}) {
    const auto o = simulate(sc.gt, flat(5, 200), pol, sc.settings);
    CHECK(o.events.empty());
    CHECK(o.ticks.size() == 201);
    CHECK(o.sla_violation_seconds == 0);
    CHECK(o.vcpu_seconds == doctest::Approx(201 * sc.settings.initial_vcpu));
  }
}

TEST_CASE("surge: profile scales once, threshold several times") {
  const auto sc = canonical_surge_scenario();
  const auto a = simulate(sc.gt, sc.trace, threshold_policy(), sc.settings);
  const auto b = simulate(sc.gt, sc.trace, profile_policy(), sc.settings);
  CHECK(a.events.size() >= 2);
  CHECK(b.events.size() == 1);
  CHECK(b.sla_violation_seconds <= a.sla_violation_seconds);
  CHECK(b.vcpu_seconds < a.vcpu_seconds);
  const auto rows = compare({a, b});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].events == 1);
  CHECK(comparison_to_csv(rows).rfind("policy,", 0) == 0);
}

TEST_CASE("ticks follow the true system and allocations change only at events") {
  const auto sc = canonical_surge_scenario();
  for (const auto& pol : {threshold_policy(), profile_policy()}) {
    const auto o = simulate(sc.gt, sc.trace, pol, sc.settings);
    double vcpu = sc.settings.initial_vcpu, violation = 0, cost = 0;
    std::size_t ev = 0;
    for (const auto& tk : o.ticks) {
      while (ev < o.events.size() && o.events[ev].t <= tk.t) {
        CHECK(o.events[ev].old_vcpu == vcpu);
        vcpu = o.events[ev++].new_vcpu;
      }
      CHECK(tk.vcpu == vcpu);
      CHECK(tk.workload == sc.trace.at(tk.t));
      const auto truth = true_kpi(sc.gt, allocation_config(sc.gt, vcpu, sc.trace.shape), tk.workload);
      CHECK(tk.kpi == truth.kpi);
      if (truth.kpi > sc.settings.kpi_target) violation += 1;
      cost += vcpu;
    }
    CHECK(ev == o.events.size());
    CHECK(o.sla_violation_seconds == violation);
    CHECK(o.vcpu_seconds == doctest::Approx(cost));
  }
}

TEST_CASE("boot delay postpones the new allocation") {
  auto sc = canonical_surge_scenario();
  sc.settings.boot_delay = 20;
  const auto o = simulate(sc.gt, sc.trace, threshold_policy(), sc.settings);
  REQUIRE_FALSE(o.events.empty());
  const double first_hot = [&] {
    for (const auto& tk : o.ticks)
      if (tk.cpu_used / tk.vcpu >= 0.8) return tk.t;
    return -1.0;
  }();
  CHECK(o.events[0].t >= first_hot + ThresholdParams{}.cooldown - 1 + 20);

  const auto p = simulate(sc.gt, sc.trace, profile_policy(), sc.settings);
  REQUIRE(p.events.size() == 1);
  // Looking ahead by the boot delay, the new allocation lands when the surge does.
  double surge = 0;
  for (const auto& [t, w] : sc.trace.samples)
    if (w > sc.trace.samples.front().second) {
      surge = t;
      break;
    }
  CHECK(p.events[0].t == doctest::Approx(surge));
}

TEST_CASE("outcomes on different traces cannot be compared") {
  const auto sc = canonical_surge_scenario();
  const auto a = simulate(sc.gt, sc.trace, threshold_policy(), sc.settings);
  const auto b = simulate(sc.gt, flat(5, 300), threshold_policy(), sc.settings);
  CHECK(code_of([&] { compare({a, b}); }) == Errc::mismatched_traces);
}

TEST_CASE("outcome serialisation") {
  const auto sc = canonical_surge_scenario();
  const auto o = simulate(sc.gt, sc.trace, profile_policy(), sc.settings);
  const auto j = nlohmann::json::parse(outcome_to_json(o));
  CHECK(j["policy"] == "profile");
  CHECK(j["events"].size() == 1);
  const auto csv = outcome_to_csv(o);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == o.ticks.size() + 1);
}
