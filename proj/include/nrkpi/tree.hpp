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

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nrkpi/hyper.hpp"
#include "nrkpi/rng.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

/// Binary regression tree node. Internal nodes route x[feature] <= threshold
/// to the left child; leaves carry the region value (mean target for CART,
/// second-order weight for boosted trees).
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  double gain = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  double value = 0.0;
  int n_samples = 0;

  bool is_leaf() const { return left == nullptr; }
};

struct SplitCandidate {
  double threshold = 0.0;
  double gain = 0.0;  // SSE reduction
};

/// Scans midpoints between consecutive distinct sorted values of x and
/// returns the threshold with maximum SSE reduction (running-sums identity,
/// ties broken toward the smallest threshold). Splits leaving fewer than
/// min_samples_leaf rows on either side are skipped; a split must have
/// strictly positive reduction.
std::optional<SplitCandidate> best_split(std::span<const double> x_col,
                                         std::span<const double> y,
                                         int min_samples_leaf);

/// Midpoint between adjacent distinct values. If rounding lands on the
/// upper value the lower one is returned, so routing by x <= threshold
/// always reproduces the scanned partition.
double split_midpoint(double lo, double hi);

/// Greedy CART growth over all features; feature ties break toward the
/// lowest index. `feature_rng`, when given, selects a random feature subset
/// of ceil(p * feature_subsample) per split (random-forest mode).
std::unique_ptr<TreeNode> grow_tree(const Matrix& X, std::span<const double> y,
                                    std::span<const std::size_t> row_indices,
                                    const HyperParams& hyper,
                                    Rng* feature_rng = nullptr);

std::unique_ptr<TreeNode> fit_tree(const Matrix& X, std::span<const double> y,
                                   const HyperParams& hyper);

double predict_tree(const TreeNode& root, const double* row);

std::unique_ptr<TreeNode> clone_tree(const TreeNode& root);

/// Depth-first accumulation of split gains per feature.
void accumulate_gains(const TreeNode& root, std::vector<double>& per_feature);

std::size_t count_leaves(const TreeNode& root);

}  // namespace nrkpi
