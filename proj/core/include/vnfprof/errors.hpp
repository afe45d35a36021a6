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

#include <stdexcept>
#include <string>
#include <string_view>

namespace vnfprof {

enum class Errc {
  invalid_argument,
  io_error,
  malformed_input,
  missing_column,
  non_numeric_cell,
  schema_mismatch,
  empty_dataset,
  degenerate_column,
  too_few_configurations,
  non_positive_metric,
  empty_trace,
  trace_too_short,
  unknown_configuration,
  singular_fit,
  empty_training_set,
  non_finite_loss,
  unfitted_model,
  too_few_samples,
  insufficient_samples,
  fit_diverged,
  no_valid_configurations,
  unfitted_profile,
  target_unattainable,
  no_surrounding_configurations,
  target_infeasible,
  extrapolation_bound,
  length_mismatch,
  zero_variance,
  mismatched_traces,
};

std::string_view to_string(Errc code) noexcept;

// Every failure in the library surfaces as this exception type; callers
// branch on code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace vnfprof
