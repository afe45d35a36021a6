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

#include "vnfprof/errors.hpp"

namespace vnfprof {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
    case Errc::malformed_input: return "MalformedInput";
    case Errc::missing_column: return "MissingColumn";
    case Errc::non_numeric_cell: return "NonNumericCell";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::degenerate_column: return "DegenerateColumn";
    case Errc::too_few_configurations: return "TooFewConfigurations";
    case Errc::non_positive_metric: return "NonPositiveMetric";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::trace_too_short: return "TraceTooShort";
    case Errc::unknown_configuration: return "UnknownConfiguration";
    case Errc::singular_fit: return "SingularFit";
    case Errc::empty_training_set: return "EmptyTrainingSet";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::unfitted_model: return "UnfittedModel";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::fit_diverged: return "FitDiverged";
    case Errc::no_valid_configurations: return "NoValidConfigurations";
    case Errc::unfitted_profile: return "UnfittedProfile";
    case Errc::target_unattainable: return "TargetUnattainable";
    case Errc::no_surrounding_configurations: return "NoSurroundingConfigurations";
    case Errc::target_infeasible: return "TargetInfeasible";
    case Errc::extrapolation_bound: return "ExtrapolationBound";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::mismatched_traces: return "MismatchedTraces";
  }
  return "Unknown";
}

}  // namespace vnfprof
