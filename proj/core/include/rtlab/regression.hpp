// Copyright 2026 The rtlab Authors.
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

#ifndef RTLAB_REGRESSION_HPP_
#define RTLAB_REGRESSION_HPP_

#include <span>

namespace rtlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope * x. Needs at least two
// distinct x values; throws std::invalid_argument otherwise.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Fits log(y) against x. Every y must be strictly positive and finite.
LinearFit fit_log_linear(std::span<const double> x, std::span<const double> y);

// Fits log(y) against log(x).
LinearFit fit_log_log(std::span<const double> x, std::span<const double> y);

}  // namespace rtlab

#endif  // RTLAB_REGRESSION_HPP_
