// Copyright 2026 The nrkpi Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nrkpi/types.hpp"

namespace nrkpi {

/// Mean squared error, (1/n) sum (y_i - yhat_i)^2.
double mse(std::span<const double> y, std::span<const double> yhat);

/// sqrt(mse), computed from the same floating path so rmse^2 == mse.
double rmse(std::span<const double> y, std::span<const double> yhat);

/// 1 - SSE/SST; negative for worse-than-mean predictors. Throws
/// DegenerateTarget when Var(y) == 0 and LengthMismatch on size mismatch.
double r2(std::span<const double> y, std::span<const double> yhat);

/// Acceptance bands on |error| per target, from the reported error spread.
double default_error_band(TargetKind kind);  // 2.5 Mbps / 0.05

struct ErrorHistogram {
  std::vector<double> edges;        // n_bins + 1 uniform edges over [min, max]
  std::vector<std::size_t> counts;  // per bin, sums to n
  double band = 0.0;
  double within_band_fraction = 0.0;
  double min_error = 0.0;
  double max_error = 0.0;
};

/// Uniform histogram of errors e_i = y_i - yhat_i plus the fraction with
/// |e| <= band.
ErrorHistogram error_distribution(std::span<const double> y,
                                  std::span<const double> yhat, int n_bins,
                                  double band);

}  // namespace nrkpi
