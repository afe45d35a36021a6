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

#include <benchmark/benchmark.h>

#include "vnfprof/baselines.hpp"
#include "vnfprof/curvefit.hpp"
#include "vnfprof/recommend.hpp"
#include "vnfprof/stability.hpp"
#include "vnfprof/synthvnf.hpp"

using namespace vnfprof;

namespace {

const ProfiledDataset& forwarding_data() {
  static const ProfiledDataset ds = run_profiling_campaign(GroundTruthForwarding(), default_forwarding_grid(), {}, 7);
  return ds;
}

const VnfProfile& forwarding_profile() {
  static const VnfProfile p = train_profile(forwarding_data());
  return p;
}

}  // namespace

static void Campaign(benchmark::State& state) {
  CampaignGrid grid = default_forwarding_grid();
  grid.resources.resize(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_profiling_campaign(GroundTruthForwarding(), grid, {}, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.configuration_count() * grid.workloads.size()));
}
BENCHMARK(Campaign)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void StabilityDetection(benchmark::State& state) {
  Rng rng(3);
  const auto trace = emit_timeseries(GroundTruthForwarding(), ConfigurationKey({{"vcpu", 2}, {"packetsize", 512}, {"flows", 10}}),
                                     10.0, 120, rng);
  const auto th = calibrate(trace, 3.0, 5, 1.0);
  StabilityConfig cfg;
  cfg.eps_mean = th.eps_mean;
  cfg.eps_std = th.eps_std;
  for (auto _ : state) benchmark::DoNotOptimize(run_stability(trace, cfg));
}
BENCHMARK(StabilityDetection);

static void TrainProfile(benchmark::State& state) {
  const auto& ds = forwarding_data();
  for (auto _ : state) benchmark::DoNotOptimize(train_profile(ds));
}
BENCHMARK(TrainProfile)->Unit(benchmark::kMillisecond);

static void PredictProfile(benchmark::State& state) {
  const auto& p = forwarding_profile();
  Rng rng(5);
  std::vector<std::pair<ConfigurationKey, double>> q;
  for (int i = 0; i < 256; ++i)
    q.emplace_back(ConfigurationKey({{"vcpu", rng.uniform(0.25, 8)}, {"packetsize", rng.uniform(64, 1500)}, {"flows", rng.uniform(1, 1e4)}}),
                   rng.uniform(1, 100));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [k, w] = q[i++ % q.size()];
    benchmark::DoNotOptimize(p.predict(k, w));
  }
}
BENCHMARK(PredictProfile);

static void Recommend(benchmark::State& state) {
  const auto& p = forwarding_profile();
  const SlaTarget sla{1.0, 50.0, {{"packetsize", 700}, {"flows", 30}}};
  for (auto _ : state) benchmark::DoNotOptimize(recommend(p, sla));
}
BENCHMARK(Recommend)->Unit(benchmark::kMicrosecond);

static void SimplexWeights(benchmark::State& state) {
  const auto n = state.range(0);
  Rng rng(9);
  Eigen::MatrixXd pts(n, 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.uniform(0, 1);
  const SimplexInterpolator interp(pts);
  Eigen::VectorXd q(3);
  for (auto _ : state) {
    for (Eigen::Index j = 0; j < 3; ++j) q(j) = rng.uniform(0.2, 0.8);
    benchmark::DoNotOptimize(interp.weights(q));
  }
}
BENCHMARK(SimplexWeights)->Arg(64)->Arg(512)->Arg(4096);

static void KnnFit(benchmark::State& state) {
  const auto& ds = forwarding_data();
  for (auto _ : state) benchmark::DoNotOptimize(fit_knn(ds));
}
BENCHMARK(KnnFit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
