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

#include "nrkpi/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrkpi/errors.hpp"
#include "nrkpi/rng.hpp"

namespace nrkpi {

namespace {

FeatureMatrix take_rows(const FeatureMatrix& src,
                        const std::vector<std::size_t>& indices) {
  FeatureMatrix out;
  out.feature_names = src.feature_names;
  out.target_kind = src.target_kind;
  out.rows = Matrix(indices.size(), src.p());
  out.target.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t r = indices[i];
    std::copy_n(src.rows.row(r), src.p(), out.rows.row(i));
    out.target[i] = src.target[r];
  }
  return out;
}

}  // namespace

OutlierResult remove_outliers(const FeatureMatrix& matrix, double z_threshold) {
  if (matrix.n() == 0) throw EmptyTrace("remove_outliers on empty matrix");
  if (z_threshold <= 0.0) throw ConfigError("z_threshold must be positive");

  const std::size_t n = matrix.n();
  const double mean =
      std::accumulate(matrix.target.begin(), matrix.target.end(), 0.0) /
      static_cast<double>(n);
  double var = 0.0;
  for (const double y : matrix.target) var += (y - mean) * (y - mean);
  var /= static_cast<double>(n);
  const double std_dev = std::sqrt(var);

  OutlierResult result;
  if (std_dev == 0.0) {
    result.matrix = matrix;
    result.degenerate = true;
    return result;
  }

  std::vector<std::size_t> beyond;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(matrix.target[i] - mean) > z_threshold * std_dev)
      beyond.push_back(i);
  }

  const std::size_t max_drop = n / 10;
  if (beyond.size() > max_drop) {
    // Keep the rows closest to the mean: drop the max_drop largest
    // deviations (ties resolved by lower row index first).
    std::stable_sort(beyond.begin(), beyond.end(),
                     [&](std::size_t a, std::size_t b) {
                       return std::fabs(matrix.target[a] - mean) >
                              std::fabs(matrix.target[b] - mean);
                     });
    beyond.resize(max_drop);
    result.capped = true;
  }

  std::vector<bool> drop(n, false);
  for (const std::size_t i : beyond) drop[i] = true;
  std::vector<std::size_t> keep;
  keep.reserve(n - beyond.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) keep.push_back(i);
  }

  result.n_removed = beyond.size();
  result.matrix = take_rows(matrix, keep);
  return result;
}

std::pair<FeatureMatrix, FeatureMatrix> train_test_split(
    const FeatureMatrix& matrix, const SplitSpec& spec) {
  const std::size_t n = matrix.n();
  if (n < 5) throw TooFewSamples("need at least 5 samples to split, got " +
                                 std::to_string(n));
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ConfigError("train_fraction must lie in (0, 1)");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (spec.shuffle) {
    Rng rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
      std::swap(perm[i], perm[j]);
    }
  }

  std::size_t n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * spec.train_fraction + 0.5));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  const std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + n_train);
  const std::vector<std::size_t> test_idx(perm.begin() + n_train, perm.end());
  return {take_rows(matrix, train_idx), take_rows(matrix, test_idx)};
}

ScalerParams fit_scaler(const FeatureMatrix& train) {
  if (train.n() == 0) throw EmptyTrace("fit_scaler on empty matrix");
  const std::size_t n = train.n();
  const std::size_t p = train.p();

  ScalerParams params;
  params.feature_names = train.feature_names;
  params.means.assign(p, 0.0);
  params.stds.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += train.rows.at(i, j);
    const double mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = train.rows.at(i, j) - mean;
      var += d * d;
    }
    params.means[j] = mean;
    params.stds[j] = std::sqrt(var / static_cast<double>(n));
  }
  return params;
}

void scale_row_inplace(const ScalerParams& params, const double* raw,
                       double* scaled) {
  for (std::size_t j = 0; j < params.means.size(); ++j) {
    scaled[j] = params.stds[j] > 0.0
                    ? (raw[j] - params.means[j]) / params.stds[j]
                    : 0.0;
  }
}

Matrix apply_scaler(const Matrix& rows, const ScalerParams& params) {
  if (rows.n_cols != params.means.size())
    throw SchemaMismatch("matrix has " + std::to_string(rows.n_cols) +
                         " columns, scaler expects " +
                         std::to_string(params.means.size()));
  Matrix out(rows.n_rows, rows.n_cols);
  for (std::size_t i = 0; i < rows.n_rows; ++i) {
    scale_row_inplace(params, rows.row(i), out.row(i));
  }
  return out;
}

FeatureMatrix apply_scaler(const FeatureMatrix& matrix,
                           const ScalerParams& params) {
  if (matrix.feature_names != params.feature_names)
    throw SchemaMismatch("feature names do not match scaler parameters");
  FeatureMatrix out;
  out.feature_names = matrix.feature_names;
  out.target_kind = matrix.target_kind;
  out.target = matrix.target;
  out.rows = apply_scaler(matrix.rows, params);
  return out;
}

}  // namespace nrkpi
