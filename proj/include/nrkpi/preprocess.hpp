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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nrkpi/types.hpp"

namespace nrkpi {

/// Per-feature z-score parameters, fitted on training rows only.
/// Standard deviations use the population convention (divide by n).
struct ScalerParams {
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<std::string> feature_names;

  static ScalerParams identity(std::vector<std::string> names) {
    ScalerParams p;
    p.means.assign(names.size(), 0.0);
    p.stds.assign(names.size(), 1.0);
    p.feature_names = std::move(names);
    return p;
  }
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct OutlierResult {
  FeatureMatrix matrix;
  /// std(target) == 0: input returned unchanged.
  bool degenerate = false;
  /// The 3-sigma rule wanted to drop more than 10% of rows; only the 10%
  /// furthest from the mean were dropped.
  bool capped = false;
  std::size_t n_removed = 0;
};

/// Drops row i iff |target_i - mean| > z_threshold * std (population std of
/// the target), removing at most 10% of rows.
OutlierResult remove_outliers(const FeatureMatrix& matrix,
                              double z_threshold = 3.0);

/// Seeded uniform shuffle split; train size = round(n * train_fraction).
/// With shuffle = false the first rows become the training part, which is a
/// time-ordered split for timestamp-sorted traces. Throws TooFewSamples for
/// n < 5.
std::pair<FeatureMatrix, FeatureMatrix> train_test_split(
    const FeatureMatrix& matrix, const SplitSpec& spec);

ScalerParams fit_scaler(const FeatureMatrix& train);

/// x' = (x - mean) / std per column; zero-variance columns map to zero.
/// Targets pass through untouched. Throws SchemaMismatch when feature names
/// disagree.
FeatureMatrix apply_scaler(const FeatureMatrix& matrix,
                           const ScalerParams& params);

/// Width-checked variant for raw numeric rows.
Matrix apply_scaler(const Matrix& rows, const ScalerParams& params);

void scale_row_inplace(const ScalerParams& params, const double* raw,
                       double* scaled);

}  // namespace nrkpi
