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

#include "rtlab/regression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtlab {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two paired points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

namespace {

std::vector<double> logs(std::span<const double> v, const char* what) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double value : v) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string(what) +
                                  ": log of a non-positive value");
    }
    out.push_back(std::log(value));
  }
  return out;
}

}  // namespace

LinearFit fit_log_linear(std::span<const double> x, std::span<const double> y) {
  const auto ly = logs(y, "fit_log_linear");
  return fit_line(x, ly);
}

LinearFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  const auto lx = logs(x, "fit_log_log");
  const auto ly = logs(y, "fit_log_log");
  return fit_line(lx, ly);
}

}  // namespace rtlab
