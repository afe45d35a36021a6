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

#include "vnfprof/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/random.hpp"

namespace vnfprof {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    fail(Errc::length_mismatch, "metric inputs differ in length (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
  if (a.size() < 2) fail(Errc::invalid_argument, "metrics need at least two values");
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)) + upper);
}

std::optional<double> r2_of(std::span<const double> y, std::span<const double> p) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - p[i]) * (y[i] - p[i]);
  }
  if (!(ss_tot > 0.0)) return std::nullopt;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

Metrics metrics(std::span<const double> y_true, std::span<const double> y_pred) {
  check_lengths(y_true, y_pred);
  Metrics m;
  std::vector<double> abs_err(y_true.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double e = y_pred[i] - y_true[i];
    abs_err[i] = std::abs(e);
    m.mae += abs_err[i];
    sq += e * e;
  }
  const double n = static_cast<double>(y_true.size());
  m.mae /= n;
  m.rmse = std::sqrt(sq / n);
  m.mad = median(std::move(abs_err));
  m.r2 = r2_of(y_true, y_pred);
  return m;
}

double r2_score(std::span<const double> y_true, std::span<const double> y_pred) {
  check_lengths(y_true, y_pred);
  auto r2 = r2_of(y_true, y_pred);
  if (!r2) fail(Errc::zero_variance, "r2 is undefined for constant true values");
  return *r2;
}

// ---------------------------------------------------------------- models

CurveFitModel::CurveFitModel(VnfProfile profile) : fitted_(!profile.empty()), profile_(std::move(profile)) {
  schema_ = profile_.schema();
}

CurveFitModel CurveFitModel::fit(const ProfiledDataset& ds, const TrainOptions& options) {
  return CurveFitModel(train_profile(ds, options));
}

std::map<std::string, double> CurveFitModel::hyperparameters() const {
  return {{"entries", static_cast<double>(profile_.entries().size())},
          {"dropped", static_cast<double>(profile_.dropped().size())}};
}

double CurveFitModel::predict_unchecked(const ConfigurationKey& config, double workload) const {
  return profile_.predict(config, workload);
}

std::unique_ptr<PerformanceModel> fit_model(ModelKind kind, const ProfiledDataset& ds, const ModelOptions& options) {
  switch (kind) {
    case ModelKind::regression: return std::make_unique<RegressionModel>(fit_regression(ds, options.regression));
    case ModelKind::knn: return std::make_unique<KnnModel>(fit_knn(ds, options.knn));
    case ModelKind::interpolation: return std::make_unique<InterpolationModel>(fit_interpolation(ds));
    case ModelKind::mlp: return std::make_unique<MlpModel>(fit_mlp(ds, options.mlp));
    case ModelKind::curvefit: return std::make_unique<CurveFitModel>(CurveFitModel::fit(ds, options.curvefit));
  }
  fail(Errc::invalid_argument, "unknown model kind");
}

// ---------------------------------------------------------------- cross-validation

const ModelResult* AccuracyReport::find(ModelKind kind) const {
  for (const auto& m : models)
    if (m.kind == kind) return &m;
  return nullptr;
}

AccuracyReport cross_validate(const ProfiledDataset& ds, const std::vector<ModelKind>& kinds, int k,
                              std::uint64_t seed, const ModelOptions& options) {
  AccuracyReport report;
  report.kpi_name = ds.schema.kpi_name();
  report.folds = k;
  report.seed = seed;
  const auto folds = kfold_split(ds, k, seed);
  for (auto kind : kinds) {
    ModelResult r;
    r.kind = kind;
    try {
      for (const auto& fold : folds) {
        const auto model = fit_model(kind, fold.train, options);
        for (const auto& s : fold.test.samples) {
          if (!s.valid) continue;
          r.y_true.push_back(s.kpi);
          r.y_pred.push_back(model->predict(s.config, s.workload));
        }
      }
      r.metrics = metrics(r.y_true, r.y_pred);
    } catch (const Error& e) {
      r.error = std::string(to_string(e.code())) + ": " + e.what();
      r.y_true.clear();
      r.y_pred.clear();
    }
    report.models.push_back(std::move(r));
  }
  return report;
}

std::vector<Bucket> default_loss_buckets() { return {{0, 2}, {2, 10}, {10, 50}, {50, 100}}; }

std::vector<BucketMae> bucketed_mae(std::span<const double> y_true, std::span<const double> y_pred,
                                    const std::vector<Bucket>& buckets) {
  if (y_true.size() != y_pred.size()) fail(Errc::length_mismatch, "bucketed MAE inputs differ in length");
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    if (!(buckets[b].lo < buckets[b].hi)) fail(Errc::invalid_argument, "bucket bounds must be increasing");
    if (b > 0 && buckets[b].lo < buckets[b - 1].hi) fail(Errc::invalid_argument, "buckets must be disjoint and sorted");
  }
  std::vector<double> sum(buckets.size(), 0.0);
  std::vector<std::size_t> count(buckets.size(), 0);
  for (std::size_t i = 0; i < y_true.size(); ++i)
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      const bool last = b + 1 == buckets.size();
      if (y_true[i] >= buckets[b].lo && (y_true[i] < buckets[b].hi || (last && y_true[i] == buckets[b].hi))) {
        sum[b] += std::abs(y_pred[i] - y_true[i]);
        ++count[b];
        break;
      }
    }
  std::vector<BucketMae> out;
  for (std::size_t b = 0; b < buckets.size(); ++b)
    if (count[b] > 0) out.push_back({buckets[b], sum[b] / static_cast<double>(count[b]), count[b]});
  return out;
}

std::vector<SweepRow> size_sweep(const ProfiledDataset& ds, const std::vector<ModelKind>& kinds,
                                 std::vector<double> fractions, int k, std::uint64_t seed,
                                 const ModelOptions& options) {
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  const auto configs = ds.configurations();
  auto shuffled = configs;
  Rng rng(splitmix64(seed));
  deterministic_shuffle(shuffled.begin(), shuffled.end(), rng);
  const bool bounded = ds.schema.kpi_upper_bound().has_value();
  const std::vector<Bucket> low = {default_loss_buckets().front()};

  std::vector<SweepRow> rows;
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) fail(Errc::invalid_argument, "sweep fractions must lie in (0, 1]");
    const auto keep_n = static_cast<std::size_t>(std::llround(f * static_cast<double>(configs.size())));
    if (keep_n < 2 * static_cast<std::size_t>(k))
      fail(Errc::too_few_configurations, "fraction " + format_number(f) + " leaves fewer than two configurations per fold");
    const ProfiledDataset sub =
        keep_n == configs.size()
            ? ds
            : subset_by_configuration(ds, std::vector<ConfigurationKey>(shuffled.begin(),
                                                                         shuffled.begin() + static_cast<std::ptrdiff_t>(keep_n)));
    const auto report = cross_validate(sub, kinds, k, seed, options);
    SweepRow row;
    row.fraction = f;
    row.configurations = keep_n;
    for (const auto& m : report.models) {
      std::optional<double> v;
      if (m.metrics) {
        if (!bounded) {
          v = m.metrics->mae;
        } else {
          const auto b = bucketed_mae(m.y_true, m.y_pred, low);
          if (!b.empty()) v = b.front().mae;
        }
      }
      row.mae[m.kind] = v;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<ModelKind, std::map<std::string, double>> normalized_averages(const std::vector<AccuracyReport>& reports) {
  std::map<ModelKind, std::map<std::string, double>> sum;
  std::map<ModelKind, std::map<std::string, int>> count;
  for (const auto& rep : reports) {
    const auto* base = rep.find(ModelKind::regression);
    if (!base || !base->metrics) continue;
    for (const auto& m : rep.models) {
      if (!m.metrics) continue;
      const std::pair<const char*, double> vals[] = {{"mae", m.metrics->mae / base->metrics->mae},
                                                     {"mad", m.metrics->mad / base->metrics->mad},
                                                     {"rmse", m.metrics->rmse / base->metrics->rmse}};
      for (const auto& [name, v] : vals)
        if (std::isfinite(v)) {
          sum[m.kind][name] += v;
          count[m.kind][name] += 1;
        }
    }
  }
  for (auto& [kind, per] : sum)
    for (auto& [name, v] : per) v /= count[kind][name];
  return sum;
}

// ---------------------------------------------------------------- output

std::string report_to_json(const AccuracyReport& report, const std::vector<Bucket>* buckets,
                           const std::vector<SweepRow>* sweep) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["kpi_name"] = report.kpi_name;
  j["folds"] = report.folds;
  j["seed"] = report.seed;
  j["models"] = ordered_json::array();
  for (const auto& m : report.models) {
    ordered_json o;
    o["model"] = std::string(to_string(m.kind));
    if (m.metrics) {
      o["r2"] = m.metrics->r2 ? ordered_json(*m.metrics->r2) : ordered_json(nullptr);
      o["mae"] = m.metrics->mae;
      o["mad"] = m.metrics->mad;
      o["rmse"] = m.metrics->rmse;
      o["samples"] = m.y_true.size();
      if (buckets) {
        o["bucketed_mae"] = ordered_json::array();
        for (const auto& b : bucketed_mae(m.y_true, m.y_pred, *buckets))
          o["bucketed_mae"].push_back({{"lo", b.bucket.lo}, {"hi", b.bucket.hi}, {"mae", b.mae}, {"count", b.count}});
      }
    } else {
      o["error"] = m.error;
    }
    j["models"].push_back(std::move(o));
  }
  ordered_json norm = ordered_json::object();
  for (const auto& [kind, per] : normalized_averages({report})) {
    ordered_json o = ordered_json::object();
    for (const auto& [name, v] : per) o[name] = v;
    norm[std::string(to_string(kind))] = std::move(o);
  }
  j["normalized_to_regression"] = std::move(norm);
  if (sweep) {
    j["size_sweep"] = ordered_json::array();
    for (const auto& row : *sweep) {
      ordered_json o;
      o["fraction"] = row.fraction;
      o["configurations"] = row.configurations;
      ordered_json mae = ordered_json::object();
      for (const auto& [kind, v] : row.mae) mae[std::string(to_string(kind))] = v ? ordered_json(*v) : ordered_json(nullptr);
      o["mae"] = std::move(mae);
      j["size_sweep"].push_back(std::move(o));
    }
  }
  return j.dump(2) + "\n";
}

std::string buckets_to_csv(const AccuracyReport& report, const std::vector<Bucket>& buckets) {
  std::ostringstream os;
  os << "model,bucket_lo,bucket_hi,mae,count\n";
  for (const auto& m : report.models) {
    if (!m.metrics) continue;
    for (const auto& b : bucketed_mae(m.y_true, m.y_pred, buckets))
      os << to_string(m.kind) << ',' << format_number(b.bucket.lo) << ',' << format_number(b.bucket.hi) << ','
         << format_number(b.mae) << ',' << b.count << '\n';
  }
  return os.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const std::vector<ModelKind>& kinds) {
  std::ostringstream os;
  os << "fraction,configurations";
  for (auto k : kinds) os << ',' << to_string(k);
  os << '\n';
  for (const auto& row : rows) {
    os << format_number(row.fraction) << ',' << row.configurations;
    for (auto k : kinds) {
      os << ',';
      auto it = row.mae.find(k);
      if (it != row.mae.end() && it->second) os << format_number(*it->second);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace vnfprof
