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

#include "vnfprof/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "csv_util.hpp"
#include "json.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/random.hpp"

namespace vnfprof {

namespace {

using nlohmann::json;
using detail::parse_double;
using detail::split_line;

constexpr std::string_view kRepetitionColumn = "repetition";
constexpr std::string_view kValidColumn = "valid";

}  // namespace

std::string_view to_string(MetricCategory c) noexcept {
  switch (c) {
    case MetricCategory::workload: return "workload";
    case MetricCategory::resource: return "resource";
    case MetricCategory::performance: return "performance";
    case MetricCategory::context: return "context";
  }
  return "?";
}

std::string_view to_string(MetricScale s) noexcept { return s == MetricScale::log ? "log" : "linear"; }

std::string_view to_string(VnfKind k) noexcept { return k == VnfKind::request ? "request" : "forwarding"; }

MetricCategory parse_category(std::string_view s) {
  if (s == "workload") return MetricCategory::workload;
  if (s == "resource") return MetricCategory::resource;
  if (s == "performance") return MetricCategory::performance;
  if (s == "context") return MetricCategory::context;
  fail(Errc::malformed_input, "unknown metric category '" + std::string(s) + "'");
}

MetricScale parse_scale(std::string_view s) {
  if (s == "linear") return MetricScale::linear;
  if (s == "log") return MetricScale::log;
  fail(Errc::malformed_input, "unknown metric scale '" + std::string(s) + "'");
}

VnfKind parse_vnf_kind(std::string_view s) {
  if (s == "forwarding") return VnfKind::forwarding;
  if (s == "request") return VnfKind::request;
  fail(Errc::malformed_input, "unknown vnf kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- schema

MetricSchema::MetricSchema(VnfKind kind, std::string kpi_name, std::string workload_axis, std::string usage_column,
                           std::vector<MetricColumn> columns)
    : kind_(kind),
      kpi_name_(std::move(kpi_name)),
      workload_axis_(std::move(workload_axis)),
      usage_column_(std::move(usage_column)),
      columns_(std::move(columns)) {
  std::set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) fail(Errc::schema_mismatch, "schema column with empty name");
    if (c.name == kRepetitionColumn || c.name == kValidColumn)
      fail(Errc::schema_mismatch, "column name '" + c.name + "' is reserved");
    if (c.name.find(',') != std::string::npos) fail(Errc::schema_mismatch, "column name contains ','");
    if (!seen.insert(c.name).second) fail(Errc::schema_mismatch, "duplicate column '" + c.name + "'");
  }
  auto count_role = [&](const std::string& name, MetricCategory cat) {
    return std::count_if(columns_.begin(), columns_.end(),
                         [&](const MetricColumn& c) { return c.name == name && c.category == cat; });
  };
  if (count_role(kpi_name_, MetricCategory::performance) != 1)
    fail(Errc::schema_mismatch, "kpi '" + kpi_name_ + "' must be exactly one performance column");
  if (count_role(workload_axis_, MetricCategory::workload) != 1)
    fail(Errc::schema_mismatch, "workload axis '" + workload_axis_ + "' must be exactly one workload column");
  if (count_role(usage_column_, MetricCategory::resource) != 1)
    fail(Errc::schema_mismatch, "usage column '" + usage_column_ + "' must be exactly one resource column");

  for (const auto& c : columns_) {
    if (c.name == kpi_name_ || c.name == workload_axis_ || c.name == usage_column_) continue;
    switch (c.category) {
      case MetricCategory::resource:
        config_columns_.push_back(c.name);
        resource_columns_.push_back(c.name);
        break;
      case MetricCategory::workload:
        config_columns_.push_back(c.name);
        shape_columns_.push_back(c.name);
        break;
      case MetricCategory::context:
        context_columns_.push_back(c.name);
        break;
      case MetricCategory::performance:
        fail(Errc::schema_mismatch, "only the kpi may be a performance column, got '" + c.name + "'");
    }
  }
  if (resource_columns_.empty()) fail(Errc::schema_mismatch, "schema has no resource allocation column");
}

const MetricColumn& MetricSchema::column(std::string_view name) const {
  for (const auto& c : columns_)
    if (c.name == name) return c;
  fail(Errc::missing_column, "schema has no column '" + std::string(name) + "'");
}

std::optional<std::size_t> MetricSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return std::nullopt;
}

std::optional<double> MetricSchema::kpi_upper_bound() const noexcept {
  if (kind_ == VnfKind::forwarding) return 100.0;
  return std::nullopt;
}

double MetricSchema::clamp_kpi(double kpi) const noexcept {
  if (std::isnan(kpi)) return kpi;
  kpi = std::max(kpi, 0.0);
  if (auto hi = kpi_upper_bound()) kpi = std::min(kpi, *hi);
  return kpi;
}

std::string schema_to_json(const MetricSchema& schema) {
  json j;
  j["vnf_kind"] = std::string(to_string(schema.vnf_kind()));
  j["kpi_name"] = schema.kpi_name();
  j["workload_axis"] = schema.workload_axis();
  j["usage_column"] = schema.usage_column();
  j["columns"] = json::array();
  for (const auto& c : schema.columns()) {
    j["columns"].push_back({{"name", c.name},
                            {"category", std::string(to_string(c.category))},
                            {"scale", std::string(to_string(c.scale))},
                            {"unit", c.unit}});
  }
  return j.dump(2) + "\n";
}

MetricSchema schema_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("schema is not valid JSON: ") + e.what());
  }
  try {
    std::vector<MetricColumn> cols;
    for (const auto& c : j.at("columns")) {
      cols.push_back({c.at("name").get<std::string>(), parse_category(c.at("category").get<std::string>()),
                      parse_scale(c.value("scale", std::string("linear"))), c.value("unit", std::string())});
    }
    return MetricSchema(parse_vnf_kind(j.at("vnf_kind").get<std::string>()), j.at("kpi_name").get<std::string>(),
                        j.at("workload_axis").get<std::string>(), j.value("usage_column", std::string("cpu_used")),
                        std::move(cols));
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, std::string("schema is missing a field: ") + e.what());
  }
}

MetricSchema load_schema(const std::filesystem::path& path) { return schema_from_json(read_file(path)); }

void save_schema(const MetricSchema& schema, const std::filesystem::path& path) {
  write_file_atomic(path, schema_to_json(schema));
}

// ---------------------------------------------------------------- config key

ConfigurationKey::ConfigurationKey(std::vector<std::pair<std::string, double>> values) : values_(std::move(values)) {
  for (const auto& [name, v] : values_) {
    if (!std::isfinite(v)) fail(Errc::invalid_argument, "configuration value for '" + name + "' is not finite");
  }
}

double ConfigurationKey::at(std::string_view name) const {
  if (auto v = find(name)) return *v;
  fail(Errc::unknown_configuration, "configuration has no column '" + std::string(name) + "'");
}

std::optional<double> ConfigurationKey::find(std::string_view name) const {
  for (const auto& [n, v] : values_)
    if (n == name) return v;
  return std::nullopt;
}

ConfigurationKey ConfigurationKey::with(std::string_view name, double value) const {
  auto copy = values_;
  for (auto& [n, v] : copy) {
    if (n == name) {
      v = value;
      return ConfigurationKey(std::move(copy));
    }
  }
  fail(Errc::unknown_configuration, "configuration has no column '" + std::string(name) + "'");
}

std::string ConfigurationKey::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ", ";
    out += values_[i].first + "=" + format_number(values_[i].second);
  }
  return out + "}";
}

// ---------------------------------------------------------------- dataset

std::size_t ProfiledDataset::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.valid; }));
}

std::vector<ConfigurationKey> ProfiledDataset::configurations() const {
  std::vector<ConfigurationKey> keys;
  keys.reserve(samples.size());
  for (const auto& s : samples) keys.push_back(s.config);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

void ProfiledDataset::validate() const {
  const auto& cols = schema.config_columns();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto& vals = s.config.values();
    bool match = vals.size() == cols.size();
    for (std::size_t j = 0; match && j < cols.size(); ++j) match = vals[j].first == cols[j];
    if (!match)
      fail(Errc::schema_mismatch, "sample " + std::to_string(i) + " configuration " + s.config.to_string() +
                                      " does not match the schema");
    if (s.context.size() != schema.context_columns().size())
      fail(Errc::schema_mismatch, "sample " + std::to_string(i) + " has the wrong number of context values");
  }
}

// ---------------------------------------------------------------- file helpers

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) fail(Errc::io_error, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(Errc::io_error, "cannot move output into place at '" + path.string() + "'");
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// ---------------------------------------------------------------- CSV

std::string to_csv(const ProfiledDataset& ds) {
  if (ds.samples.empty()) fail(Errc::empty_dataset, "cannot serialize an empty dataset");
  ds.validate();
  const auto& schema = ds.schema;
  std::string out;
  for (const auto& c : schema.columns()) {
    out += c.name;
    out += ',';
  }
  out += std::string(kRepetitionColumn) + "," + std::string(kValidColumn) + "\n";

  // Column -> source for each schema column.
  enum class Src { config, workload, usage, kpi, context };
  std::vector<std::pair<Src, std::size_t>> src;
  std::size_t ci = 0, xi = 0;
  for (const auto& c : schema.columns()) {
    if (c.name == schema.workload_axis())
      src.emplace_back(Src::workload, 0);
    else if (c.name == schema.usage_column())
      src.emplace_back(Src::usage, 0);
    else if (c.name == schema.kpi_name())
      src.emplace_back(Src::kpi, 0);
    else if (c.category == MetricCategory::context)
      src.emplace_back(Src::context, xi++);
    else
      src.emplace_back(Src::config, ci++);
  }
  out.reserve(ds.samples.size() * 16 * (src.size() + 2));
  for (const auto& s : ds.samples) {
    for (const auto& [kind, idx] : src) {
      double v = 0.0;
      switch (kind) {
        case Src::config: v = s.config.values()[idx].second; break;
        case Src::workload: v = s.workload; break;
        case Src::usage: v = s.resource_used; break;
        case Src::kpi: v = s.kpi; break;
        case Src::context: v = s.context[idx]; break;
      }
      out += format_number(v);
      out += ',';
    }
    out += std::to_string(s.repetition);
    out += ',';
    out += s.valid ? '1' : '0';
    out += '\n';
  }
  return out;
}

ProfiledDataset from_csv(std::string_view text, const MetricSchema& schema) {
  ProfiledDataset ds;
  ds.schema = schema;

  detail::LineReader reader(text);
  auto next_line = [&](std::string_view& line) { return reader.next(line); };

  std::string_view header_line;
  if (!next_line(header_line)) fail(Errc::schema_mismatch, "CSV has no header row");
  auto header = split_line(header_line);

  std::map<std::string, std::size_t, std::less<>> header_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!header_index.emplace(std::string(header[i]), i).second)
      fail(Errc::schema_mismatch, "duplicate CSV column '" + std::string(header[i]) + "'");
  }
  for (const auto& h : header) {
    if (h == kRepetitionColumn || h == kValidColumn) continue;
    if (!schema.index_of(h)) fail(Errc::schema_mismatch, "CSV column '" + std::string(h) + "' is not in the schema");
  }
  auto require = [&](const std::string& name) {
    auto it = header_index.find(name);
    if (it == header_index.end()) fail(Errc::missing_column, "CSV is missing column '" + name + "'");
    return it->second;
  };
  std::vector<std::size_t> config_idx;
  for (const auto& c : schema.config_columns()) config_idx.push_back(require(c));
  std::vector<std::size_t> context_idx;
  for (const auto& c : schema.context_columns()) context_idx.push_back(require(c));
  const std::size_t workload_idx = require(schema.workload_axis());
  const std::size_t usage_idx = require(schema.usage_column());
  const std::size_t kpi_idx = require(schema.kpi_name());
  auto rep_it = header_index.find(kRepetitionColumn);
  auto valid_it = header_index.find(kValidColumn);

  std::vector<bool> log_col(header.size(), false);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (auto si = schema.index_of(header[i])) log_col[i] = schema.columns()[*si].scale == MetricScale::log;
  }

  std::string_view line;
  std::size_t row = 0;
  while (next_line(line)) {
    ++row;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      fail(Errc::schema_mismatch, "row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                                      " cells, got " + std::to_string(cells.size()));
    auto num = [&](std::size_t col) {
      auto v = parse_double(cells[col]);
      if (!v)
        fail(Errc::non_numeric_cell, "row " + std::to_string(row) + ", column '" + std::string(header[col]) +
                                         "': '" + std::string(cells[col]) + "' is not a finite number");
      if (log_col[col] && *v <= 0.0)
        fail(Errc::schema_mismatch, "row " + std::to_string(row) + ", column '" + std::string(header[col]) +
                                        "': log-scale value must be positive");
      return *v;
    };

    ProfiledSample s;
    std::vector<std::pair<std::string, double>> cfg;
    cfg.reserve(config_idx.size());
    for (std::size_t j = 0; j < config_idx.size(); ++j) {
      double v = num(config_idx[j]);
      if (schema.column(schema.config_columns()[j]).category == MetricCategory::resource && v <= 0.0)
        fail(Errc::schema_mismatch, "row " + std::to_string(row) + ": resource allocation '" +
                                        schema.config_columns()[j] + "' must be positive");
      cfg.emplace_back(schema.config_columns()[j], v);
    }
    s.config = ConfigurationKey(std::move(cfg));
    s.workload = num(workload_idx);
    s.resource_used = num(usage_idx);
    s.kpi = num(kpi_idx);
    for (auto ci : context_idx) s.context.push_back(num(ci));
    if (rep_it != header_index.end()) {
      double r = num(rep_it->second);
      if (r < 0 || r != std::floor(r))
        fail(Errc::non_numeric_cell, "row " + std::to_string(row) + ": repetition must be a non-negative integer");
      s.repetition = static_cast<int>(r);
    }
    if (valid_it != header_index.end()) {
      double v = num(valid_it->second);
      if (v != 0.0 && v != 1.0) fail(Errc::non_numeric_cell, "row " + std::to_string(row) + ": valid must be 0 or 1");
      s.valid = v == 1.0;
    }
    if (s.kpi < 0.0 || (schema.kpi_upper_bound() && s.kpi > *schema.kpi_upper_bound()))
      fail(Errc::schema_mismatch, "row " + std::to_string(row) + ": kpi " + format_number(s.kpi) + " out of range");
    if (s.resource_used < 0.0)
      fail(Errc::schema_mismatch, "row " + std::to_string(row) + ": resource usage must be non-negative");
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

ProfiledDataset load_csv(const std::filesystem::path& path, const MetricSchema& schema) {
  return from_csv(read_file(path), schema);
}

ProfiledDataset load_csv(const std::filesystem::path& path, const std::filesystem::path& schema_path) {
  return load_csv(path, load_schema(schema_path));
}

void save_csv(const ProfiledDataset& ds, const std::filesystem::path& path) { write_file_atomic(path, to_csv(ds)); }

// ---------------------------------------------------------------- standardization

double ColumnTransform::forward(double raw) const {
  const double v = log10 ? std::log10(raw) : raw;
  return (v - mean) / stddev;
}

double ColumnTransform::inverse(double standardized) const {
  const double v = standardized * stddev + mean;
  return log10 ? std::pow(10.0, v) : v;
}

FeatureScaler FeatureScaler::fit(const std::vector<std::string>& names, const Eigen::MatrixXd& rows,
                                 const std::vector<bool>& log_columns, DegeneratePolicy policy) {
  const auto n = rows.rows();
  std::vector<ColumnTransform> out;
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    ColumnTransform t;
    t.name = names.at(static_cast<std::size_t>(j));
    t.log10 = log_columns.at(static_cast<std::size_t>(j));
    Eigen::VectorXd col = rows.col(j);
    if (t.log10) {
      if ((col.array() <= 0.0).any()) fail(Errc::invalid_argument, "log-scale column '" + t.name + "' has values <= 0");
      col = col.array().log10();
    }
    t.mean = n > 0 ? col.mean() : 0.0;
    double ss = n > 1 ? (col.array() - t.mean).square().sum() / static_cast<double>(n - 1) : 0.0;
    double sd = std::sqrt(ss);
    // Relative tolerance: a column that only varies by rounding noise counts as constant.
    if (!(sd > 1e-12 * std::max(1.0, std::abs(t.mean)))) {
      if (policy == DegeneratePolicy::reject) fail(Errc::degenerate_column, "column '" + t.name + "' has zero variance");
      sd = 0.0;
    }
    t.stddev = sd;
    out.push_back(std::move(t));
  }
  return FeatureScaler(std::move(out));
}

std::vector<bool> FeatureScaler::degenerate() const {
  std::vector<bool> d;
  for (const auto& t : transforms_) d.push_back(t.stddev == 0.0);
  return d;
}

Eigen::VectorXd FeatureScaler::transform(std::span<const double> raw) const {
  if (raw.size() != transforms_.size()) fail(Errc::schema_mismatch, "feature vector has the wrong length");
  Eigen::VectorXd out(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const auto& t = transforms_[j];
    if (t.stddev == 0.0) {
      out[static_cast<Eigen::Index>(j)] = 0.0;
    } else {
      out[static_cast<Eigen::Index>(j)] = t.forward(raw[j]);
    }
  }
  return out;
}

Eigen::MatrixXd FeatureScaler::transform(const Eigen::MatrixXd& raw) const {
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  std::vector<double> row(static_cast<std::size_t>(raw.cols()));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.cols(); ++j) row[static_cast<std::size_t>(j)] = raw(i, j);
    out.row(i) = transform(row).transpose();
  }
  return out;
}

Eigen::VectorXd FeatureScaler::inverse(const Eigen::VectorXd& standardized) const {
  Eigen::VectorXd out(standardized.size());
  for (Eigen::Index j = 0; j < standardized.size(); ++j) {
    const auto& t = transforms_.at(static_cast<std::size_t>(j));
    out[j] = t.stddev == 0.0 ? (t.log10 ? std::pow(10.0, t.mean) : t.mean) : t.inverse(standardized[j]);
  }
  return out;
}

std::vector<std::string> predictor_columns(const MetricSchema& schema) {
  auto cols = schema.config_columns();
  cols.push_back(schema.workload_axis());
  return cols;
}

std::vector<bool> predictor_log_flags(const MetricSchema& schema) {
  std::vector<bool> flags;
  for (const auto& c : predictor_columns(schema)) flags.push_back(schema.column(c).scale == MetricScale::log);
  return flags;
}

std::vector<double> predictor_row(const MetricSchema& schema, const ConfigurationKey& config, double workload) {
  const auto& cols = schema.config_columns();
  if (config.size() != cols.size())
    fail(Errc::schema_mismatch, "configuration " + config.to_string() + " does not match the schema");
  std::vector<double> row;
  row.reserve(cols.size() + 1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (config.values()[j].first != cols[j])
      fail(Errc::schema_mismatch, "configuration " + config.to_string() + " does not match the schema");
    row.push_back(config.values()[j].second);
  }
  row.push_back(workload);
  return row;
}

StandardizedView standardize(const ProfiledDataset& ds, DegeneratePolicy policy) {
  StandardizedView view;
  view.predictors = predictor_columns(ds.schema);
  const auto p = static_cast<Eigen::Index>(view.predictors.size());
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    if (ds.samples[i].valid) idx.push_back(i);
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(idx.size()), p);
  view.kpi.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto& s = ds.samples[idx[r]];
    auto row = predictor_row(ds.schema, s.config, s.workload);
    for (Eigen::Index j = 0; j < p; ++j) raw(static_cast<Eigen::Index>(r), j) = row[static_cast<std::size_t>(j)];
    view.kpi[static_cast<Eigen::Index>(r)] = s.kpi;
  }
  view.scaler = FeatureScaler::fit(view.predictors, raw, predictor_log_flags(ds.schema), policy);
  view.features = view.scaler.transform(raw);
  view.sample_index = std::move(idx);
  return view;
}

// ---------------------------------------------------------------- folds & groups

std::vector<Fold> kfold_split(const ProfiledDataset& ds, int k, std::uint64_t seed) {
  if (k < 2) fail(Errc::invalid_argument, "k-fold split needs k >= 2");
  auto configs = ds.configurations();
  if (configs.size() < static_cast<std::size_t>(k))
    fail(Errc::too_few_configurations, "cannot split " + std::to_string(configs.size()) + " configurations into " +
                                           std::to_string(k) + " folds");
  Rng rng(seed);
  deterministic_shuffle(configs.begin(), configs.end(), rng);
  std::map<ConfigurationKey, int> fold_of;
  for (std::size_t i = 0; i < configs.size(); ++i) fold_of.emplace(configs[i], static_cast<int>(i % static_cast<std::size_t>(k)));

  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (auto& f : folds) {
    f.train.schema = ds.schema;
    f.test.schema = ds.schema;
  }
  for (const auto& s : ds.samples) {
    const int f = fold_of.at(s.config);
    for (int j = 0; j < k; ++j) {
      auto& target = (j == f) ? folds[static_cast<std::size_t>(j)].test : folds[static_cast<std::size_t>(j)].train;
      target.samples.push_back(s);
    }
  }
  return folds;
}

std::map<ConfigurationKey, std::vector<ProfiledSample>> group_by_configuration(const ProfiledDataset& ds) {
  std::map<ConfigurationKey, std::vector<ProfiledSample>> groups;
  for (const auto& s : ds.samples)
    if (s.valid) groups[s.config].push_back(s);
  for (auto& [key, group] : groups)
    std::stable_sort(group.begin(), group.end(),
                     [](const ProfiledSample& a, const ProfiledSample& b) { return a.workload < b.workload; });
  return groups;
}

ProfiledDataset subset_by_configuration(const ProfiledDataset& ds, const std::vector<ConfigurationKey>& keep) {
  std::set<ConfigurationKey> wanted(keep.begin(), keep.end());
  ProfiledDataset out;
  out.schema = ds.schema;
  for (const auto& s : ds.samples)
    if (wanted.count(s.config)) out.samples.push_back(s);
  return out;
}

}  // namespace vnfprof
