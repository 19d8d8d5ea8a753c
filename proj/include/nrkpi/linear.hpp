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

#include <span>
#include <vector>

#include "nrkpi/types.hpp"

namespace nrkpi {

struct LinearCore {
  std::vector<double> weights;
  double intercept = 0.0;
  /// Set when the normal equations were singular and the ridge fallback
  /// (lambda = 1e-8) produced the solution.
  bool condition_warning = false;
};

/// Ordinary least squares with intercept via the normal equations
/// (Cholesky). Singular systems fall back to a tiny ridge and set the
/// condition warning; predictions still reproduce the least-squares fit.
LinearCore fit_linear(const Matrix& X, std::span<const double> y);

double predict_linear(const LinearCore& core, const double* row,
                      std::size_t p);

}  // namespace nrkpi
