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

#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vnfprof {

enum class MetricCategory { workload, resource, performance, context };
enum class MetricScale { linear, log };
enum class VnfKind { forwarding, request };

std::string_view to_string(MetricCategory c) noexcept;
std::string_view to_string(MetricScale s) noexcept;
std::string_view to_string(VnfKind k) noexcept;
MetricCategory parse_category(std::string_view s);
MetricScale parse_scale(std::string_view s);
VnfKind parse_vnf_kind(std::string_view s);

struct MetricColumn {
  std::string name;
  MetricCategory category = MetricCategory::workload;
  MetricScale scale = MetricScale::linear;
  std::string unit;

  friend bool operator==(const MetricColumn&, const MetricColumn&) = default;
};

/// Describes the columns of a profiling campaign and the role each one plays.
///
/// Roles are derived from categories: the KPI is the single performance
/// column, the workload axis is the swept workload column, the usage column
/// is the observed resource consumption. Every other resource or workload
/// column is part of the configuration key. Context columns are carried
/// through files untouched.
class MetricSchema {
 public:
  MetricSchema() = default;
  MetricSchema(VnfKind kind, std::string kpi_name, std::string workload_axis, std::string usage_column,
               std::vector<MetricColumn> columns);

  VnfKind vnf_kind() const noexcept { return kind_; }
  const std::string& kpi_name() const noexcept { return kpi_name_; }
  const std::string& workload_axis() const noexcept { return workload_axis_; }
  const std::string& usage_column() const noexcept { return usage_column_; }
  const std::vector<MetricColumn>& columns() const noexcept { return columns_; }

  const MetricColumn& column(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  // Configuration-key columns in schema order.
  const std::vector<std::string>& config_columns() const noexcept { return config_columns_; }
  // Subset of config_columns() that are resource allocations (vCPU, bandwidth).
  const std::vector<std::string>& resource_columns() const noexcept { return resource_columns_; }
  // Subset of config_columns() that shape the workload (packet size, flows...).
  const std::vector<std::string>& shape_columns() const noexcept { return shape_columns_; }
  const std::vector<std::string>& context_columns() const noexcept { return context_columns_; }

  // Upper bound of the KPI (100 for loss percentages), none for response times.
  std::optional<double> kpi_upper_bound() const noexcept;
  double clamp_kpi(double kpi) const noexcept;

  friend bool operator==(const MetricSchema&, const MetricSchema&) = default;

 private:
  VnfKind kind_ = VnfKind::forwarding;
  std::string kpi_name_;
  std::string workload_axis_;
  std::string usage_column_;
  std::vector<MetricColumn> columns_;
  std::vector<std::string> config_columns_;
  std::vector<std::string> resource_columns_;
  std::vector<std::string> shape_columns_;
  std::vector<std::string> context_columns_;
};

/// The fixed (resource allocation + workload shape) coordinates of one
/// profiled configuration, in schema order.
class ConfigurationKey {
 public:
  ConfigurationKey() = default;
  explicit ConfigurationKey(std::vector<std::pair<std::string, double>> values);

  const std::vector<std::pair<std::string, double>>& values() const noexcept { return values_; }
  double at(std::string_view name) const;
  std::optional<double> find(std::string_view name) const;
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  // Copy with `name` replaced; the column must already exist.
  ConfigurationKey with(std::string_view name, double value) const;

  std::string to_string() const;

  friend bool operator==(const ConfigurationKey&, const ConfigurationKey&) = default;
  friend std::partial_ordering operator<=>(const ConfigurationKey&, const ConfigurationKey&) = default;

 private:
  std::vector<std::pair<std::string, double>> values_;
};

struct ProfiledSample {
  ConfigurationKey config;
  double workload = 0.0;
  double resource_used = 0.0;
  double kpi = 0.0;
  int repetition = 0;
  bool valid = true;
  // Values of the schema's context columns, in schema order.
  std::vector<double> context;

  friend bool operator==(const ProfiledSample&, const ProfiledSample&) = default;
};

struct ProfiledDataset {
  MetricSchema schema;
  std::vector<ProfiledSample> samples;

  std::size_t valid_count() const noexcept;
  // Distinct configuration keys over all samples, sorted.
  std::vector<ConfigurationKey> configurations() const;
  // Throws schema_mismatch when a sample does not fit the schema.
  void validate() const;
};

// Schema sidecar (JSON).
MetricSchema load_schema(const std::filesystem::path& path);
void save_schema(const MetricSchema& schema, const std::filesystem::path& path);
std::string schema_to_json(const MetricSchema& schema);
MetricSchema schema_from_json(std::string_view text);

ProfiledDataset load_csv(const std::filesystem::path& path, const std::filesystem::path& schema_path);
ProfiledDataset load_csv(const std::filesystem::path& path, const MetricSchema& schema);
void save_csv(const ProfiledDataset& ds, const std::filesystem::path& path);
std::string to_csv(const ProfiledDataset& ds);
ProfiledDataset from_csv(std::string_view text, const MetricSchema& schema);

// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

// Nine significant digits, shortest form.
std::string format_number(double v);

/// Per-column affine (optionally log10-first) transform.
struct ColumnTransform {
  std::string name;
  bool log10 = false;
  double mean = 0.0;
  double stddev = 1.0;

  double forward(double raw) const;
  double inverse(double standardized) const;
};

enum class DegeneratePolicy {
  reject,      // constant column -> degenerate_column error
  pass_through // constant column -> centred, unit scale
};

class FeatureScaler {
 public:
  FeatureScaler() = default;
  explicit FeatureScaler(std::vector<ColumnTransform> transforms) : transforms_(std::move(transforms)) {}

  // `rows` is n x p raw values; `log_columns[j]` selects log10 for column j.
  static FeatureScaler fit(const std::vector<std::string>& names, const Eigen::MatrixXd& rows,
                           const std::vector<bool>& log_columns, DegeneratePolicy policy);

  Eigen::VectorXd transform(std::span<const double> raw) const;
  Eigen::MatrixXd transform(const Eigen::MatrixXd& raw) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& standardized) const;

  const std::vector<ColumnTransform>& transforms() const noexcept { return transforms_; }
  std::size_t size() const noexcept { return transforms_.size(); }
  // Columns that were constant at fit time.
  std::vector<bool> degenerate() const;

 private:
  std::vector<ColumnTransform> transforms_;
};

/// Valid samples projected into standardized predictor space. Predictors are
/// the configuration columns followed by the workload axis.
struct StandardizedView {
  FeatureScaler scaler;
  std::vector<std::string> predictors;
  Eigen::MatrixXd features;  // n x p, standardized
  Eigen::VectorXd kpi;       // n
  std::vector<std::size_t> sample_index;  // row -> index into ds.samples
};

std::vector<std::string> predictor_columns(const MetricSchema& schema);
std::vector<bool> predictor_log_flags(const MetricSchema& schema);
// Raw predictor vector for one (configuration, workload) point.
std::vector<double> predictor_row(const MetricSchema& schema, const ConfigurationKey& config, double workload);

StandardizedView standardize(const ProfiledDataset& ds, DegeneratePolicy policy = DegeneratePolicy::reject);

struct Fold {
  ProfiledDataset train;
  ProfiledDataset test;
};

// Folds are built over configurations: every sample of one configuration
// lands in the same test fold.
std::vector<Fold> kfold_split(const ProfiledDataset& ds, int k, std::uint64_t seed);

// Valid samples grouped per configuration, each group ordered by workload.
std::map<ConfigurationKey, std::vector<ProfiledSample>> group_by_configuration(const ProfiledDataset& ds);

// Keeps only the samples whose configuration is in `keep`.
ProfiledDataset subset_by_configuration(const ProfiledDataset& ds, const std::vector<ConfigurationKey>& keep);

}  // namespace vnfprof
