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
#include <limits>

#include "doctest.h"
#include "test_util.hpp"
#include "vnfprof/curvefit.hpp"
#include "vnfprof/curves.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/synthvnf.hpp"

using namespace vnfprof;
using vnfprof::testing::fwd_config;

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

// Pearson correlation; a constant series correlates as 0.
double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::size_t split_oracle(const std::vector<double>& x, const std::vector<double>& r, const std::vector<double>& k,
                         std::size_t w) {
  for (std::size_t s = 0; s + w <= x.size(); ++s) {
    const std::vector<double> wx(x.begin() + s, x.begin() + s + w), wr(r.begin() + s, r.begin() + s + w),
        wk(k.begin() + s, k.begin() + s + w);
    if (correlation(wk, wx) > correlation(wr, wx)) return s;
  }
  return x.size();
}

std::vector<ProfiledSample> samples_of(const std::vector<double>& x, const std::vector<double>& r,
                                       const std::vector<double>& k) {
  std::vector<ProfiledSample> out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back({fwd_config(1, 64, 1), x[i], r[i], k[i], 0, true, {}});
  return out;
}

FittedCurvePair forwarding_pair(std::vector<double> nonsat, std::vector<double> sat, double boundary) {
  FittedCurvePair p;
  p.kind = VnfKind::forwarding;
  p.nonsat = std::move(nonsat);
  p.sat = std::move(sat);
  p.boundary_x = boundary;
  return p;
}

MetricSchema vcpu_only_schema() {
  return MetricSchema(VnfKind::forwarding, "loss", "rate", "cpu",
                      {{"vcpu", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"rate", MetricCategory::workload, MetricScale::log, "kpps"},
                       {"cpu", MetricCategory::resource, MetricScale::linear, "vCPU"},
                       {"loss", MetricCategory::performance, MetricScale::linear, "%"}});
}

}  // namespace

TEST_CASE("split: rising cpu and flat kpi never saturates") {
  std::vector<double> x, r, k;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    r.push_back(0.1 * i);
    k.push_back(0.0);
  }
  const auto s = split_saturation(samples_of(x, r, k), 5);
  CHECK(s.sat.empty());
  CHECK(s.split_index == 10);
}

TEST_CASE("split: flat cpu and rising kpi saturates at the first window") {
  std::vector<double> x, r, k;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    r.push_back(1.0);
    k.push_back(i * 2.0);
  }
  const auto s = split_saturation(samples_of(x, r, k), 5);
  CHECK(s.split_index == 0);
  CHECK(s.non_sat.empty());
  CHECK(s.sat.size() == 10);
}

TEST_CASE("split index matches a window-by-window correlation oracle") {
  std::vector<double> x, r, k;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    r.push_back(std::min<double>(i, 5));
    k.push_back(std::max(0.0, 100.0 * (1.0 - 5.0 / i)));
  }
  CHECK(saturation_split_index(x, r, k, 5) == split_oracle(x, r, k, 5));

  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 6 + rng.below(15);
    const double knee = rng.uniform(1.0, 20.0);
    std::vector<double> xs, rs, ks;
    for (std::size_t i = 1; i <= n; ++i) {
      const double xi = static_cast<double>(i);
      xs.push_back(xi);
      rs.push_back(std::min(xi, knee) * (1.0 + 0.05 * rng.normal()));
      ks.push_back(std::max(0.0, 100.0 * (1.0 - knee / xi)) + std::abs(0.5 * rng.normal()));
    }
    const int w = 3 + static_cast<int>(rng.below(4));
    if (n < static_cast<std::size_t>(w)) continue;
    CHECK(saturation_split_index(xs, rs, ks, w) == split_oracle(xs, rs, ks, static_cast<std::size_t>(w)));
  }
}

TEST_CASE("split errors") {
  std::vector<double> x = {1, 2, 3}, r = {1, 2, 3}, k = {0, 0, 0};
  CHECK(code_of([&] { saturation_split_index(x, r, k, 5); }) == Errc::too_few_samples);
  CHECK(code_of([&] { saturation_split_index(x, r, k, 2); }) == Errc::invalid_argument);
}

TEST_CASE("forwarding non-saturated curve is zero at the origin") {
  for (double a : {1e-3, 0.1, 3.0})
    for (double b : {0.5, 50.0, 500.0}) CHECK(std::abs(curves::forwarding_nonsat(a, b, 0.0)) < 1e-15);
}

TEST_CASE("fit recovers generated curves") {
  std::vector<double> x, y;
  for (double v : lin_spaced(10, 600, 25)) {
    x.push_back(v);
    y.push_back(curves::forwarding_nonsat(0.01, 500, v));
  }
  const auto ns = fit_nonsat(x, y, VnfKind::forwarding);
  CHECK(ns.params[0] == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(ns.params[1] == doctest::Approx(500).epsilon(1e-3));

  x.clear();
  y.clear();
  for (double v : log_spaced(600, 5000, 12)) {
    x.push_back(v);
    y.push_back(curves::forwarding_sat(500, 0, v));
  }
  const auto s = fit_sat(x, y, VnfKind::forwarding);
  CHECK(s.params[0] == doctest::Approx(500).epsilon(1e-6));
  CHECK(std::abs(s.params[1]) < 500 * 1e-6);

  x = {25, 30, 40, 55};
  y.clear();
  for (double v : x) y.push_back(10 * (v - 20));
  const auto line = fit_sat(x, y, VnfKind::request);
  CHECK(line.params[0] == doctest::Approx(10).epsilon(1e-12));
  CHECK(line.params[1] == doctest::Approx(20).epsilon(1e-12));

  x.clear();
  y.clear();
  for (double v : lin_spaced(1, 20, 10)) {
    x.push_back(v);
    y.push_back(curves::request_nonsat(3.0, 0.2, 15.0, v));
  }
  const auto rn = fit_nonsat(x, y, VnfKind::request);
  CHECK(rn.params[0] == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(rn.params[1] == doctest::Approx(0.2).epsilon(1e-4));
  CHECK(rn.params[2] == doctest::Approx(15.0).epsilon(1e-4));
}

TEST_CASE("fit sample-count errors") {
  const std::vector<double> one = {1.0}, y = {2.0};
  CHECK(code_of([&] { fit_nonsat(one, y, VnfKind::request); }) == Errc::insufficient_samples);
  CHECK(code_of([&] { fit_sat(one, y, VnfKind::forwarding); }) == Errc::insufficient_samples);
}

TEST_CASE("saturated loss tends to 100") {
  for (double c : {1.0, 50.0, 900.0})
    for (double d : {-10.0, 0.0, 10.0}) CHECK(curves::forwarding_sat(c, d, 1e12) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("boundary point") {
  const auto crossing = forwarding_pair({0.01, 500}, {500, 0}, 0);
  const double b = boundary_point(crossing, 500, 600);
  CHECK(b >= 500);
  CHECK(b <= 600);
  CHECK(std::abs(crossing.nonsat_value(b) - crossing.sat_value(b)) < 1e-6);

  // No crossing: result is the best of the 100 uniform samples.
  const auto apart = forwarding_pair({0.001, 10}, {50, 0}, 0);
  const double lo = 200, hi = 400;
  const double got = boundary_point(apart, lo, hi);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double x = lo + (hi - lo) * i / 99.0;
    best = std::min(best, std::abs(apart.nonsat_value(x) - apart.sat_value(x)));
  }
  CHECK(std::abs(apart.nonsat_value(got) - apart.sat_value(got)) == doctest::Approx(best));

  // Both branches are exactly zero here, so every point ties and x_lo wins.
  const auto same = forwarding_pair({1.0, 1000.0}, {1000.0, 0.0}, 0);
  CHECK(same.nonsat_value(1.5) == same.sat_value(1.5));
  CHECK(boundary_point(same, 1.0, 2.0) == 1.0);
}

TEST_CASE("inverse workload closed forms") {
  const auto sat_only = forwarding_pair({}, {500, 0}, -std::numeric_limits<double>::infinity());
  CHECK(inverse_workload(sat_only, 20.0) == doctest::Approx(625.0));
  CHECK(curves::forwarding_sat(500, 0, 625.0) == doctest::Approx(20.0));
  CHECK(code_of([&] { inverse_workload(sat_only, 100.0); }) == Errc::target_unattainable);

  FittedCurvePair req;
  req.kind = VnfKind::request;
  req.sat = {10.0, 20.0};
  req.boundary_x = -std::numeric_limits<double>::infinity();
  CHECK(inverse_workload(req, 100.0) == doctest::Approx(30.0));

  FittedCurvePair req_ns;
  req_ns.kind = VnfKind::request;
  req_ns.nonsat = {5.0, 0.1, 10.0};
  req_ns.boundary_x = std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { inverse_workload(req_ns, 4.0); }) == Errc::target_unattainable);
}

TEST_CASE("inverse then evaluate returns the target") {
  Rng rng(8);
  const GroundTruthForwarding g({}, NoiseSpec{0, 0, 1});
  for (int i = 0; i < 300; ++i) {
    const auto k = fwd_config(rng.uniform(0.25, 8), rng.uniform(64, 1500), std::pow(10, rng.uniform(0, 4)));
    const auto c = g.curve(k);
    auto p = forwarding_pair({c.a, c.b}, {c.c, c.d}, c.boundary);
    const double y = rng.uniform(1e-3, 99.0);
    const double x = inverse_workload(p, y);
    CHECK(p.evaluate(x) == doctest::Approx(y).epsilon(1e-9));
  }
}

TEST_CASE("noiseless training recovers every configuration") {
  const GroundTruthForwarding g({}, NoiseSpec{0, 0, 1});
  const auto profile = train_profile(vnfprof::testing::noiseless_forwarding(vnfprof::testing::small_forwarding_grid()));
  REQUIRE(profile.entries().size() == 12);
  CHECK(profile.dropped().empty());
  for (const auto& e : profile.entries()) {
    const auto t = g.curve(e.config);
    REQUIRE(e.curve.has_nonsat());
    REQUIRE(e.curve.has_sat());
    CHECK(e.curve.nonsat[0] == doctest::Approx(t.a).epsilon(1e-3));
    CHECK(e.curve.nonsat[1] == doctest::Approx(t.b).epsilon(1e-3));
    CHECK(e.curve.sat[0] == doctest::Approx(t.c).epsilon(1e-3));
    CHECK(std::abs(e.curve.sat[1] - t.d) < 1e-3 * t.c);
    CHECK(e.curve.diagnostics.boundary_gap < 1e-6);
  }
}

TEST_CASE("unsaturated campaign keeps only the non-saturated branch") {
  auto grid = vnfprof::testing::small_forwarding_grid();
  grid.workloads = log_spaced(0.1, 1.0, 10);
  const auto profile = train_profile(vnfprof::testing::noiseless_forwarding(grid));
  for (const auto& e : profile.entries()) {
    CHECK_FALSE(e.curve.has_sat());
    CHECK(e.curve.evaluate(0.5) == e.curve.nonsat_value(0.5));
  }
}

TEST_CASE("training on nothing") {
  ProfiledDataset ds{forwarding_schema(), {}};
  CHECK(code_of([&] { train_profile(ds); }) == Errc::no_valid_configurations);
  CHECK(code_of([&] { VnfProfile().predict(fwd_config(1, 64, 1), 1.0); }) == Errc::unfitted_profile);
}

TEST_CASE("prediction at a profiled configuration is that curve") {
  const auto profile = train_profile(vnfprof::testing::noiseless_forwarding(vnfprof::testing::small_forwarding_grid()));
  for (const auto& e : profile.entries())
    for (double x : {0.5, 5.0, 50.0, 500.0})
      CHECK(profile.predict(e.config, x) == doctest::Approx(std::clamp(e.curve.evaluate(x), 0.0, 100.0)).epsilon(1e-9));
}

TEST_CASE("midpoint on a single configuration axis averages the neighbours") {
  std::vector<ProfileEntry> entries;
  entries.push_back({ConfigurationKey({{"vcpu", 1.0}}), forwarding_pair({0.05, 20}, {20, 0}, 22)});
  entries.push_back({ConfigurationKey({{"vcpu", 3.0}}), forwarding_pair({0.02, 60}, {60, 0}, 62)});
  const VnfProfile profile(vcpu_only_schema(), entries);
  for (double x : {5.0, 30.0, 100.0, 400.0}) {
    const double want = 0.5 * (entries[0].curve.evaluate(x) + entries[1].curve.evaluate(x));
    CHECK(profile.predict(ConfigurationKey({{"vcpu", 2.0}}), x) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK(predict_profile(profile, ConfigurationKey({{"vcpu", 2.0}}), 30.0) == profile.predict(ConfigurationKey({{"vcpu", 2.0}}), 30.0));
}

TEST_CASE("unprofiled configuration tracks the truth in the saturated region") {
  const GroundTruthForwarding g({}, NoiseSpec{0, 0, 1});
  const auto profile = train_profile(vnfprof::testing::noiseless_forwarding(default_forwarding_grid(1)));
  for (double vcpu : {1.5, 2.5, 5.0}) {
    const auto k = fwd_config(vcpu, 512, 10);
    const double P = g.saturation_throughput(k);
    for (double f : {1.5, 3.0, 10.0}) {
      const double truth = g.evaluate(k, f * P).kpi;
      CHECK(profile.predict(k, f * P) == doctest::Approx(truth).epsilon(0.05));
    }
  }
}

TEST_CASE("predictions are monotone in workload and stay in range") {
  const auto ds = run_profiling_campaign(GroundTruthForwarding(), vnfprof::testing::small_forwarding_grid(2), {}, 3);
  const auto profile = train_profile(ds);
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const auto k = fwd_config(rng.uniform(0.25, 4), std::exp(rng.uniform(std::log(32), std::log(3000))),
                              std::pow(10, rng.uniform(-0.5, 4.5)));
    double x1 = std::exp(rng.uniform(std::log(0.01), std::log(1e4)));
    double x2 = std::exp(rng.uniform(std::log(0.01), std::log(1e4)));
    if (x1 > x2) std::swap(x1, x2);
    const double y1 = profile.predict(k, x1), y2 = profile.predict(k, x2);
    CHECK(y1 <= y2 + 1e-9);
    CHECK(y1 >= 0.0);
    CHECK(y2 <= 100.0);
  }
}

TEST_CASE("axis scale favours the axes that move the boundary") {
  const auto profile = train_profile(vnfprof::testing::noiseless_forwarding(default_forwarding_grid(1)));
  const auto& s = profile.axis_scale();
  REQUIRE(s.size() == 3);
  CHECK(s.maxCoeff() == doctest::Approx(1.0));
  CHECK(s.minCoeff() >= 0.02 - 1e-12);
  // vCPU moves the saturation point the most under the default law.
  CHECK(s[0] == doctest::Approx(1.0));
}

TEST_CASE("profile json round trip") {
  const auto profile = train_profile(run_profiling_campaign(GroundTruthForwarding(), vnfprof::testing::small_forwarding_grid(), {}, 5));
  const auto text = profile_to_json(profile);
  const auto back = profile_from_json(text);
  CHECK(profile_to_json(back) == text);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto k = fwd_config(rng.uniform(0.5, 2), rng.uniform(64, 1500), rng.uniform(1, 1000));
    const double x = rng.uniform(0.1, 500);
    CHECK(back.predict(k, x) == profile.predict(k, x));
  }
  CHECK_THROWS_AS(profile_from_json("{\"version\": \"99\"}"), Error);
}
