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

// Test-only reference implementations. These deliberately avoid the
// library's split-scan shortcuts: SSE is computed by direct two-pass
// summation and every (feature, boundary) pair is enumerated.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "nrkpi/rng.hpp"
#include "nrkpi/tree.hpp"
#include "nrkpi/types.hpp"

namespace oracle {

inline double sse_direct(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(values.size());
  double sse = 0.0;
  for (const double v : values) sse += (v - mean) * (v - mean);
  return sse;
}

struct CartSplit {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

/// Exhaustive best split: every feature, every boundary between distinct
/// sorted values, gains from two-pass SSE. Same tie rules as the library
/// (lowest feature, then smallest threshold, strictly-better replacement).
inline CartSplit exhaustive_best_split(const nrkpi::Matrix& X,
                                       const std::vector<double>& y,
                                       const std::vector<std::size_t>& rows,
                                       int min_samples_leaf) {
  CartSplit best;
  const std::size_t n = rows.size();
  std::vector<double> parent;
  parent.reserve(n);
  for (const std::size_t r : rows) parent.push_back(y[r]);
  const double parent_min = *std::min_element(parent.begin(), parent.end());
  const double parent_max = *std::max_element(parent.begin(), parent.end());
  if (parent_min == parent_max) return best;
  const double sse_parent = sse_direct(parent);

  for (std::size_t f = 0; f < X.n_cols; ++f) {
    std::vector<double> values;
    values.reserve(n);
    for (const std::size_t r : rows) values.push_back(X.at(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    for (std::size_t b = 1; b < values.size(); ++b) {
      const double threshold = nrkpi::split_midpoint(values[b - 1], values[b]);
      std::vector<double> left;
      std::vector<double> right;
      for (const std::size_t r : rows) {
        (X.at(r, f) <= threshold ? left : right).push_back(y[r]);
      }
      if (left.size() < static_cast<std::size_t>(min_samples_leaf) ||
          right.size() < static_cast<std::size_t>(min_samples_leaf)) {
        continue;
      }
      const double gain = sse_parent - sse_direct(left) - sse_direct(right);
      if (gain <= 0.0) continue;
      if (gain > best.gain) {
        best.feature = static_cast<int>(f);
        best.threshold = threshold;
        best.gain = gain;
      }
    }
  }
  return best;
}

/// Greedy unlimited-depth CART by exhaustive search; returns per-row
/// training predictions.
inline void cart_predict_rows(const nrkpi::Matrix& X,
                              const std::vector<double>& y,
                              const std::vector<std::size_t>& rows,
                              int min_samples_leaf,
                              std::vector<double>& out) {
  const CartSplit split = exhaustive_best_split(X, y, rows, min_samples_leaf);
  if (split.feature < 0) {
    double mean = 0.0;
    for (const std::size_t r : rows) mean += y[r];
    mean /= static_cast<double>(rows.size());
    for (const std::size_t r : rows) out[r] = mean;
    return;
  }
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (const std::size_t r : rows) {
    if (X.at(r, static_cast<std::size_t>(split.feature)) <= split.threshold) {
      left.push_back(r);
    } else {
      right.push_back(r);
    }
  }
  cart_predict_rows(X, y, left, min_samples_leaf, out);
  cart_predict_rows(X, y, right, min_samples_leaf, out);
}

inline std::vector<double> cart_training_predictions(
    const nrkpi::Matrix& X, const std::vector<double>& y,
    int min_samples_leaf) {
  std::vector<std::size_t> rows(X.n_rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<double> out(X.n_rows, 0.0);
  cart_predict_rows(X, y, rows, min_samples_leaf, out);
  return out;
}

/// Least squares through Eigen's completely orthogonal decomposition of
/// the intercept-augmented design (a pseudo-inverse route independent of
/// the library's normal equations).
inline std::vector<double> pinv_least_squares(const nrkpi::Matrix& X,
                                              const std::vector<double>& y) {
  const Eigen::Index n = static_cast<Eigen::Index>(X.n_rows);
  const Eigen::Index p = static_cast<Eigen::Index>(X.n_cols);
  Eigen::MatrixXd design(n, p + 1);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      design(i, j) = X.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    design(i, p) = 1.0;
    target(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd solution =
      design.completeOrthogonalDecomposition().solve(target);
  return std::vector<double>(solution.data(), solution.data() + p + 1);
}

/// Uniform random regression instance.
struct RandomInstance {
  nrkpi::Matrix X;
  std::vector<double> y;
};

inline RandomInstance random_instance(nrkpi::Rng& rng, std::size_t n,
                                      std::size_t p, double y_scale = 10.0) {
  RandomInstance inst;
  inst.X = nrkpi::Matrix(n, p);
  inst.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      inst.X.at(i, j) = rng.next_uniform(-5.0, 5.0);
    }
    inst.y[i] = rng.next_uniform(0.0, y_scale);
  }
  return inst;
}

}  // namespace oracle
