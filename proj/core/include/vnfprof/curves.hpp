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

#include <algorithm>
#include <cmath>

namespace vnfprof::curves {

// Exponent arguments are capped so the pre-saturation curves overflow to a
// large finite value instead of inf.
inline double safe_exp(double v) { return std::exp(std::min(v, 700.0)); }

// Packet loss before saturation: -exp(-ab) + exp(a (x - b)); zero at x = 0.
inline double forwarding_nonsat(double a, double b, double x) { return -safe_exp(-a * b) + safe_exp(a * (x - b)); }

// Packet loss after saturation: 100 (1 - c / (x - d)). Defined as 0 for
// x <= c + d, where the hyperbola would be negative or past its pole.
inline double forwarding_sat(double c, double d, double x) {
  if (x <= c + d) return 0.0;
  return 100.0 * (1.0 - c / (x - d));
}

// Raw hyperbola, no domain guard (used for fitting).
inline double forwarding_sat_raw(double c, double d, double x) { return 100.0 * (1.0 - c / (x - d)); }

// Response time before saturation: a + exp(b (x - c)).
inline double request_nonsat(double a, double b, double c, double x) { return a + safe_exp(b * (x - c)); }

// Response time after saturation: d (x - e), floored at zero below the onset.
inline double request_sat(double d, double e, double x) { return std::max(0.0, d * (x - e)); }

inline double forwarding_nonsat_inverse(double a, double b, double y) { return b + std::log(y + std::exp(-a * b)) / a; }
inline double forwarding_sat_inverse(double c, double d, double y) { return d + 100.0 * c / (100.0 - y); }
inline double request_nonsat_inverse(double a, double b, double c, double y) { return c + std::log(y - a) / b; }
inline double request_sat_inverse(double d, double e, double y) { return e + y / d; }

}  // namespace vnfprof::curves
