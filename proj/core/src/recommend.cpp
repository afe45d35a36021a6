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

#include "vnfprof/recommend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/simplex_interp.hpp"

namespace vnfprof {

namespace {

std::string allocation_string(const ResourceAllocation& r) {
  std::string s;
  for (const auto& [k, v] : r) s += (s.empty() ? "" : ",") + k + "=" + format_number(v);
  return s;
}

void check_sla(const MetricSchema& schema, const SlaTarget& sla) {
  if (!(sla.workload_target > 0.0) || !std::isfinite(sla.workload_target))
    fail(Errc::invalid_argument, "workload target must be positive");
  if (!(sla.kpi_target >= 0.0) || !std::isfinite(sla.kpi_target))
    fail(Errc::invalid_argument, "KPI target must be finite and non-negative");
  if (auto ub = schema.kpi_upper_bound(); ub && sla.kpi_target >= *ub)
    fail(Errc::invalid_argument, "KPI target " + format_number(sla.kpi_target) + " is never attainable");
  const auto& shape = schema.shape_columns();
  for (const auto& col : shape)
    if (std::none_of(sla.shape.begin(), sla.shape.end(), [&](const auto& kv) { return kv.first == col; }))
      fail(Errc::invalid_argument, "workload shape is missing '" + col + "'");
  for (const auto& [k, v] : sla.shape) {
    if (std::find(shape.begin(), shape.end(), k) == shape.end())
      fail(Errc::invalid_argument, "'" + k + "' is not a workload shape column");
    if (!std::isfinite(v)) fail(Errc::invalid_argument, "shape value for '" + k + "' must be finite");
  }
}

double shape_value(const SlaTarget& sla, const std::string& col) {
  for (const auto& [k, v] : sla.shape)
    if (k == col) return v;
  return 0.0;
}

// Profiled values around `t`: the value itself when profiled, otherwise up
// to n on each side.
std::set<double> surrounding(const std::set<double>& values, double t, int n) {
  if (values.count(t)) return {t};
  std::set<double> out;
  auto hi = values.upper_bound(t);
  auto it = hi;
  for (int i = 0; i < n && it != values.begin(); ++i) out.insert(*--it);
  it = hi;
  for (int i = 0; i < n && it != values.end(); ++i, ++it) out.insert(*it);
  return out;
}

double secondary_at(const std::vector<ResourceRow>& table, std::size_t col, double primary) {
  auto p = [&](std::size_t i) { return table[i].resources[0].second; };
  auto s = [&](std::size_t i) { return table[i].resources[col].second; };
  if (table.size() == 1 || primary <= p(0)) return p(0) > 0.0 ? s(0) * primary / p(0) : s(0);
  for (std::size_t i = 1; i < table.size(); ++i)
    if (primary <= p(i)) {
      const double u = (primary - p(i - 1)) / (p(i) - p(i - 1));
      return s(i - 1) + u * (s(i) - s(i - 1));
    }
  const std::size_t last = table.size() - 1;
  return p(last) > 0.0 ? s(last) * primary / p(last) : s(last);
}

}  // namespace

std::vector<ResourceRow> max_workload_table(const VnfProfile& profile, const SlaTarget& sla, int neighbors_per_side) {
  if (profile.empty()) fail(Errc::unfitted_profile, "profile has no entries");
  if (neighbors_per_side < 1) fail(Errc::invalid_argument, "need at least one neighbour per side");
  const auto& schema = profile.schema();
  check_sla(schema, sla);
  const auto& res_cols = schema.resource_columns();
  const auto& shape_cols = schema.shape_columns();
  if (res_cols.empty()) fail(Errc::schema_mismatch, "schema declares no resource columns");

  std::map<ResourceAllocation, std::vector<const ProfileEntry*>> groups;
  for (const auto& e : profile.entries()) {
    ResourceAllocation r;
    for (const auto& c : res_cols) r.emplace_back(c, e.config.at(c));
    groups[r].push_back(&e);
  }
  if (groups.size() < 2)
    fail(Errc::too_few_configurations, "recommendation needs at least two profiled resource allocations");

  std::vector<ResourceRow> table;
  for (const auto& [alloc, entries] : groups) {
    std::vector<std::set<double>> pick;
    std::vector<std::pair<double, double>> bounds;
    for (const auto& col : shape_cols) {
      std::set<double> values;
      for (const auto* e : entries) values.insert(e->config.at(col));
      bounds.emplace_back(*values.begin(), *values.rbegin());
      pick.push_back(surrounding(values, shape_value(sla, col), neighbors_per_side));
    }
    std::vector<const ProfileEntry*> chosen;
    for (const auto* e : entries) {
      bool ok = true;
      for (std::size_t j = 0; j < shape_cols.size() && ok; ++j) ok = pick[j].count(e->config.at(shape_cols[j])) > 0;
      if (ok) chosen.push_back(e);
    }
    if (chosen.empty()) {
      std::string hull;
      for (std::size_t j = 0; j < shape_cols.size(); ++j)
        hull += " " + shape_cols[j] + " in [" + format_number(bounds[j].first) + ", " +
                format_number(bounds[j].second) + "]";
      fail(Errc::no_surrounding_configurations,
           "no profiled configurations surround the workload shape at " + allocation_string(alloc) + ";" + hull);
    }

    Eigen::VectorXd wl(static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      double w = 0.0;
      try {
        w = inverse_workload(chosen[i]->curve, sla.kpi_target);
      } catch (const Error& err) {
        if (err.code() != Errc::target_unattainable) throw;
      }
      wl(static_cast<Eigen::Index>(i)) = w;
    }

    double value = wl(0);
    if (chosen.size() > 1) {
      // Interpolate in the shape space, log-scaled where the schema says so
      // and normalised per dimension.
      const auto d = static_cast<Eigen::Index>(shape_cols.size());
      Eigen::MatrixXd pts(static_cast<Eigen::Index>(chosen.size()), d);
      Eigen::VectorXd q(d);
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto& col = shape_cols[static_cast<std::size_t>(j)];
        const bool lg = schema.column(col).scale == MetricScale::log;
        auto tr = [&](double v) { return lg ? std::log10(std::max(v, 1e-300)) : v; };
        const double lo = tr(bounds[static_cast<std::size_t>(j)].first);
        const double span = tr(bounds[static_cast<std::size_t>(j)].second) - lo;
        const double scale = span > 0.0 ? span : 1.0;
        for (std::size_t i = 0; i < chosen.size(); ++i)
          pts(static_cast<Eigen::Index>(i), j) = (tr(chosen[i]->config.at(col)) - lo) / scale;
        q(j) = (tr(shape_value(sla, col)) - lo) / scale;
      }
      value = SimplexInterpolator(pts).interpolate(q, wl);
    }
    table.push_back({alloc, std::max(value, 0.0)});
  }
  return table;
}

FilteredTable filter_non_improving(const std::vector<ResourceRow>& table, double epsilon_rel) {
  FilteredTable out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i > 0 && table[i].wl_max < table[i - 1].wl_max * (1.0 + epsilon_rel)) {
      out.cap = table[i - 1];
      break;
    }
    out.rows.push_back(table[i]);
  }
  return out;
}

ResourceLine fit_resource_line(const std::vector<ResourceRow>& table) {
  ResourceLine line;
  if (table.size() < 2) return line;
  const double n = static_cast<double>(table.size());
  double mx = 0.0, my = 0.0;
  for (const auto& r : table) {
    mx += r.resources.at(0).second;
    my += r.wl_max;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : table) {
    const double dx = r.resources[0].second - mx;
    sxx += dx * dx;
    sxy += dx * (r.wl_max - my);
  }
  if (!(sxx > 0.0)) return line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  line.usable = line.slope > 0.0;
  return line;
}

Recommendation recommend(const VnfProfile& profile, const SlaTarget& sla, const RecommendOptions& options) {
  if (!(options.granularity > 0.0)) fail(Errc::invalid_argument, "resource granularity must be positive");
  if (!(options.extrapolation_factor >= 1.0)) fail(Errc::invalid_argument, "extrapolation factor must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  Recommendation rec;
  rec.per_resource_table = max_workload_table(profile, sla, options.neighbors_per_side);
  const auto& table = rec.per_resource_table;
  const double target = sla.workload_target;

  auto finish = [&] {
    rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  };
  // Cheapest profiled allocation that suffices.
  auto pick_profiled = [&](const std::vector<ResourceRow>& rows) {
    for (const auto& r : rows)
      if (r.wl_max >= target) {
        rec.resources = r.resources;
        rec.predicted_max_workload = r.wl_max;
        rec.cap_only = true;
        return finish();
      }
    fail(Errc::target_infeasible, "no profiled allocation sustains " + format_number(target) +
                                      "; best is " + format_number(rows.empty() ? 0.0 : rows.back().wl_max));
  };

  std::set<double> primaries;
  for (const auto& r : table) primaries.insert(r.resources[0].second);
  if (primaries.size() != table.size()) return pick_profiled(table);  // not a chain of allocations

  const auto filtered = filter_non_improving(table, options.epsilon_rel);
  rec.cap = filtered.cap;
  if (filtered.cap && target > filtered.cap->wl_max)
    fail(Errc::target_infeasible, "workload target " + format_number(target) + " exceeds the " +
                                      format_number(filtered.cap->wl_max) + " sustained at the detected cap " +
                                      allocation_string(filtered.cap->resources));
  const auto line = fit_resource_line(filtered.rows);
  if (!line.usable) return pick_profiled(filtered.rows);

  const double g = options.granularity;
  const double exact = (target - line.intercept) / line.slope;
  double res = std::max(g, std::ceil(exact / g - 1e-9) * g);
  double predicted = line.slope * res + line.intercept;
  if (filtered.cap && res > filtered.cap->resources[0].second) {
    res = filtered.cap->resources[0].second;
    predicted = filtered.cap->wl_max;
  }
  const double largest = *primaries.rbegin();
  if (res > options.extrapolation_factor * largest * (1.0 + 1e-12))
    fail(Errc::extrapolation_bound, "recommended " + format_number(res) + " " + table[0].resources[0].first +
                                        " exceeds " + format_number(options.extrapolation_factor) +
                                        "x the largest profiled allocation " + format_number(largest));
  rec.extrapolated = res > largest * (1.0 + 1e-12);
  rec.resources.emplace_back(table[0].resources[0].first, res);
  for (std::size_t c = 1; c < table[0].resources.size(); ++c)
    rec.resources.emplace_back(table[0].resources[c].first, secondary_at(table, c, res));
  rec.predicted_max_workload = predicted;
  return finish();
}

std::string recommendation_to_json(const Recommendation& rec, bool include_latency) {
  using nlohmann::ordered_json;
  auto alloc = [](const ResourceAllocation& r) {
    ordered_json o = ordered_json::object();
    for (const auto& [k, v] : r) o[k] = v;
    return o;
  };
  auto row = [&](const ResourceRow& r) { return ordered_json{{"resources", alloc(r.resources)}, {"wl_max", r.wl_max}}; };
  ordered_json j;
  j["resources"] = alloc(rec.resources);
  j["predicted_max_workload"] = rec.predicted_max_workload;
  j["extrapolated"] = rec.extrapolated;
  j["cap_only"] = rec.cap_only;
  j["per_resource_table"] = ordered_json::array();
  for (const auto& r : rec.per_resource_table) j["per_resource_table"].push_back(row(r));
  j["cap"] = rec.cap ? row(*rec.cap) : ordered_json(nullptr);
  if (include_latency) j["latency_ms"] = rec.latency_ms;
  return j.dump(2) + "\n";
}

}  // namespace vnfprof
