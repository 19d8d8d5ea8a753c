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

#include "nrkpi/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrkpi/errors.hpp"

namespace nrkpi {

double split_midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) * 0.5;
  if (mid >= hi || !(mid >= lo)) return lo;
  return mid;
}

namespace {

struct SortedColumn {
  std::vector<double> x;
  std::vector<double> y;
};

std::optional<SplitCandidate> best_split_sorted(const SortedColumn& col,
                                                int min_samples_leaf) {
  const std::size_t n = col.x.size();
  if (n < 2 * static_cast<std::size_t>(min_samples_leaf)) return std::nullopt;

  // Constant target: no reduction is possible, and the running-sums
  // identity could otherwise manufacture one from rounding noise.
  const auto [y_min, y_max] = std::minmax_element(col.y.begin(), col.y.end());
  if (*y_min == *y_max) return std::nullopt;

  double total_sum = 0.0;
  double total_sq = 0.0;
  for (const double v : col.y) {
    total_sum += v;
    total_sq += v * v;
  }
  const double sse_parent =
      total_sq - total_sum * total_sum / static_cast<double>(n);

  std::optional<SplitCandidate> best;
  double left_sum = 0.0;
  double left_sq = 0.0;
  const std::size_t msl = static_cast<std::size_t>(min_samples_leaf);
  for (std::size_t i = 1; i < n; ++i) {
    left_sum += col.y[i - 1];
    left_sq += col.y[i - 1] * col.y[i - 1];
    if (i < msl || n - i < msl) continue;
    if (col.x[i - 1] == col.x[i]) continue;

    const double sse_left =
        left_sq - left_sum * left_sum / static_cast<double>(i);
    const double right_sum = total_sum - left_sum;
    const double right_sq = total_sq - left_sq;
    const double sse_right =
        right_sq - right_sum * right_sum / static_cast<double>(n - i);
    const double reduction = sse_parent - sse_left - sse_right;
    if (reduction <= 0.0) continue;
    // Strict > keeps the smallest threshold on ties (ascending scan).
    if (!best || reduction > best->gain) {
      best = SplitCandidate{split_midpoint(col.x[i - 1], col.x[i]), reduction};
    }
  }
  return best;
}

SortedColumn gather_sorted(const Matrix& X, std::span<const double> y,
                           std::span<const std::size_t> rows,
                           std::size_t feature) {
  SortedColumn col;
  const std::size_t n = rows.size();
  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return X.at(a, feature) < X.at(b, feature);
                   });
  col.x.reserve(n);
  col.y.reserve(n);
  for (const std::size_t r : order) {
    col.x.push_back(X.at(r, feature));
    col.y.push_back(y[r]);
  }
  return col;
}

struct GrowContext {
  const Matrix& X;
  std::span<const double> y;
  const HyperParams& hyper;
  Rng* feature_rng;
  std::vector<std::size_t> feature_scratch;
};

double subset_mean(std::span<const double> y,
                   std::span<const std::size_t> rows) {
  double sum = 0.0;
  for (const std::size_t r : rows) sum += y[r];
  return sum / static_cast<double>(rows.size());
}

// Candidate features in ascending index order; with an RNG, a subset of
// ceil(p * feature_subsample) drawn without replacement.
std::span<const std::size_t> candidate_features(GrowContext& ctx) {
  const std::size_t p = ctx.X.n_cols;
  auto& scratch = ctx.feature_scratch;
  scratch.resize(p);
  std::iota(scratch.begin(), scratch.end(), std::size_t{0});
  if (!ctx.feature_rng) return {scratch.data(), p};

  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(static_cast<double>(p) * ctx.hyper.feature_subsample)));
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(ctx.feature_rng->next_below(p - i));
    std::swap(scratch[i], scratch[j]);
  }
  std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k));
  return {scratch.data(), k};
}

std::unique_ptr<TreeNode> grow_node(GrowContext& ctx,
                                    std::vector<std::size_t>& rows,
                                    int depth) {
  auto node = std::make_unique<TreeNode>();
  node->n_samples = static_cast<int>(rows.size());
  node->value = subset_mean(ctx.y, rows);

  const bool depth_exhausted =
      ctx.hyper.max_depth >= 0 && depth >= ctx.hyper.max_depth;
  if (depth_exhausted ||
      rows.size() < 2 * static_cast<std::size_t>(ctx.hyper.min_samples_leaf)) {
    return node;
  }

  int best_feature = -1;
  SplitCandidate best{};
  for (const std::size_t f : candidate_features(ctx)) {
    const SortedColumn col = gather_sorted(ctx.X, ctx.y, rows, f);
    const auto cand = best_split_sorted(col, ctx.hyper.min_samples_leaf);
    if (cand && (best_feature < 0 || cand->gain > best.gain)) {
      best_feature = static_cast<int>(f);
      best = *cand;
    }
  }
  if (best_feature < 0 || best.gain <= ctx.hyper.min_split_gain) return node;

  // Stable partition keeps both halves in ascending row order, which keeps
  // leaf means reproducible by any oracle that sums in row order.
  std::vector<std::size_t> left_rows;
  std::vector<std::size_t> right_rows;
  for (const std::size_t r : rows) {
    if (ctx.X.at(r, static_cast<std::size_t>(best_feature)) <= best.threshold) {
      left_rows.push_back(r);
    } else {
      right_rows.push_back(r);
    }
  }
  if (left_rows.empty() || right_rows.empty()) return node;

  node->feature_index = best_feature;
  node->threshold = best.threshold;
  node->gain = best.gain;
  rows.clear();
  rows.shrink_to_fit();
  node->left = grow_node(ctx, left_rows, depth + 1);
  node->right = grow_node(ctx, right_rows, depth + 1);
  return node;
}

}  // namespace

std::optional<SplitCandidate> best_split(std::span<const double> x_col,
                                         std::span<const double> y,
                                         int min_samples_leaf) {
  if (x_col.size() != y.size())
    throw LengthMismatch("best_split: feature and target length differ");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");

  SortedColumn col;
  std::vector<std::size_t> order(x_col.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x_col[a] < x_col[b];
  });
  col.x.reserve(x_col.size());
  col.y.reserve(x_col.size());
  for (const std::size_t i : order) {
    col.x.push_back(x_col[i]);
    col.y.push_back(y[i]);
  }
  return best_split_sorted(col, min_samples_leaf);
}

std::unique_ptr<TreeNode> grow_tree(const Matrix& X, std::span<const double> y,
                                    std::span<const std::size_t> row_indices,
                                    const HyperParams& hyper,
                                    Rng* feature_rng) {
  if (row_indices.empty()) throw EmptyTrace("grow_tree on empty row set");
  GrowContext ctx{X, y, hyper, feature_rng, {}};
  std::vector<std::size_t> rows(row_indices.begin(), row_indices.end());
  return grow_node(ctx, rows, 0);
}

std::unique_ptr<TreeNode> fit_tree(const Matrix& X, std::span<const double> y,
                                   const HyperParams& hyper) {
  if (X.n_rows != y.size())
    throw LengthMismatch("fit_tree: matrix rows and target length differ");
  std::vector<std::size_t> rows(X.n_rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return grow_tree(X, y, rows, hyper, nullptr);
}

double predict_tree(const TreeNode& root, const double* row) {
  const TreeNode* node = &root;
  while (!node->is_leaf()) {
    node = row[node->feature_index] <= node->threshold ? node->left.get()
                                                       : node->right.get();
  }
  return node->value;
}

std::unique_ptr<TreeNode> clone_tree(const TreeNode& root) {
  auto node = std::make_unique<TreeNode>();
  node->feature_index = root.feature_index;
  node->threshold = root.threshold;
  node->gain = root.gain;
  node->value = root.value;
  node->n_samples = root.n_samples;
  if (!root.is_leaf()) {
    node->left = clone_tree(*root.left);
    node->right = clone_tree(*root.right);
  }
  return node;
}

void accumulate_gains(const TreeNode& root, std::vector<double>& per_feature) {
  if (root.is_leaf()) return;
  per_feature[static_cast<std::size_t>(root.feature_index)] += root.gain;
  accumulate_gains(*root.left, per_feature);
  accumulate_gains(*root.right, per_feature);
}

std::size_t count_leaves(const TreeNode& root) {
  if (root.is_leaf()) return 1;
  return count_leaves(*root.left) + count_leaves(*root.right);
}

}  // namespace nrkpi
