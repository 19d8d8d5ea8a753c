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

#include "nrkpi/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "nrkpi/errors.hpp"

namespace nrkpi {

// ---------------------------------------------------------------------------
// Random forest
// ---------------------------------------------------------------------------

EnsembleCore fit_forest(const Matrix& X, std::span<const double> y,
                        const HyperParams& hyper, int n_threads) {
  if (X.n_rows != y.size())
    throw LengthMismatch("fit_forest: matrix rows and target length differ");
  if (X.n_rows < 2) throw TooFewSamples("fit_forest needs at least 2 rows");

  const std::size_t n = X.n_rows;
  const std::size_t n_trees = static_cast<std::size_t>(hyper.n_trees);
  EnsembleCore core;
  core.trees.resize(n_trees);

  const auto build_one = [&](std::size_t t) {
    // Per-tree stream: results do not depend on which thread builds what.
    Rng rng(hyper.seed ^ static_cast<std::uint64_t>(t));
    std::vector<std::size_t> rows;
    rows.reserve(n);
    if (hyper.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) {
        rows.push_back(static_cast<std::size_t>(rng.next_below(n)));
      }
      std::sort(rows.begin(), rows.end());
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    core.trees[t] = grow_tree(X, y, rows, hyper, &rng);
  };

  const std::size_t workers = std::min<std::size_t>(
      n_trees, static_cast<std::size_t>(std::max(1, n_threads)));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_trees; ++t) build_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < n_trees;
             t = next.fetch_add(1)) {
          build_one(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return core;
}

double predict_forest(const EnsembleCore& core, const double* row) {
  if (core.trees.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& tree : core.trees) sum += predict_tree(*tree, row);
  return sum / static_cast<double>(core.trees.size());
}

// ---------------------------------------------------------------------------
// Second-order boosting, shared pieces
// ---------------------------------------------------------------------------

double squared_loss(double y, double yhat) {
  const double d = yhat - y;
  return 0.5 * d * d;
}

double squared_loss_gradient(double y, double yhat) { return yhat - y; }

double squared_loss_hessian(double /*y*/, double /*yhat*/) { return 1.0; }

double second_order_gain(double g_left, double h_left, double g_right,
                         double h_right, double reg_lambda) {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + reg_lambda) +
                g_right * g_right / (h_right + reg_lambda) -
                g * g / (h + reg_lambda));
}

namespace {

double leaf_weight(double g_sum, double h_sum, double reg_lambda) {
  return -g_sum / (h_sum + reg_lambda);
}

struct BoostedSplit {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Exact split search on (g, h) for one node subset.
BoostedSplit best_second_order_split(const Matrix& X,
                                     std::span<const double> g,
                                     std::span<const double> h,
                                     const std::vector<std::size_t>& rows,
                                     const HyperParams& hyper) {
  BoostedSplit best;
  const std::size_t n = rows.size();
  const std::size_t msl = static_cast<std::size_t>(hyper.min_samples_leaf);
  if (n < 2 * msl) return best;

  double g_total = 0.0;
  double h_total = 0.0;
  for (const std::size_t r : rows) {
    g_total += g[r];
    h_total += h[r];
  }

  std::vector<std::size_t> order(rows);
  std::vector<double> gx(n);
  std::vector<double> hx(n);
  std::vector<double> xs(n);
  for (std::size_t f = 0; f < X.n_cols; ++f) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return X.at(a, f) < X.at(b, f);
                     });
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = X.at(order[i], f);
      gx[i] = g[order[i]];
      hx[i] = h[order[i]];
    }
    double g_left = 0.0;
    double h_left = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      g_left += gx[i - 1];
      h_left += hx[i - 1];
      if (i < msl || n - i < msl) continue;
      if (xs[i - 1] == xs[i]) continue;
      const double gain = second_order_gain(g_left, h_left, g_total - g_left,
                                            h_total - h_left, hyper.reg_lambda);
      // Strict > and ascending scan order implement the lowest-feature /
      // smallest-threshold tie rules; the zero init demands positive gain.
      if (gain > best.gain) {
        best.feature = static_cast<int>(f);
        best.threshold = split_midpoint(xs[i - 1], xs[i]);
        best.gain = gain;
      }
    }
  }
  return best;
}

std::unique_ptr<TreeNode> grow_boosted_node(const Matrix& X,
                                            std::span<const double> g,
                                            std::span<const double> h,
                                            std::vector<std::size_t>& rows,
                                            const HyperParams& hyper,
                                            int depth) {
  auto node = std::make_unique<TreeNode>();
  node->n_samples = static_cast<int>(rows.size());
  double g_sum = 0.0;
  double h_sum = 0.0;
  for (const std::size_t r : rows) {
    g_sum += g[r];
    h_sum += h[r];
  }
  node->value = leaf_weight(g_sum, h_sum, hyper.reg_lambda);

  const bool depth_exhausted = hyper.max_depth >= 0 && depth >= hyper.max_depth;
  if (depth_exhausted) return node;

  const BoostedSplit split = best_second_order_split(X, g, h, rows, hyper);
  if (split.feature < 0 || split.gain <= hyper.min_split_gain) return node;

  std::vector<std::size_t> left_rows;
  std::vector<std::size_t> right_rows;
  for (const std::size_t r : rows) {
    if (X.at(r, static_cast<std::size_t>(split.feature)) <= split.threshold) {
      left_rows.push_back(r);
    } else {
      right_rows.push_back(r);
    }
  }
  if (left_rows.empty() || right_rows.empty()) return node;

  node->feature_index = split.feature;
  node->threshold = split.threshold;
  node->gain = split.gain;
  rows.clear();
  rows.shrink_to_fit();
  node->left = grow_boosted_node(X, g, h, left_rows, hyper, depth + 1);
  node->right = grow_boosted_node(X, g, h, right_rows, hyper, depth + 1);
  return node;
}

double mean_of(std::span<const double> y) {
  return std::accumulate(y.begin(), y.end(), 0.0) /
         static_cast<double>(y.size());
}

}  // namespace

EnsembleCore fit_xgb_style(const Matrix& X, std::span<const double> y,
                           const HyperParams& hyper) {
  if (X.n_rows != y.size())
    throw LengthMismatch("fit_xgb_style: matrix rows and target length differ");
  if (X.n_rows == 0) throw EmptyTrace("fit_xgb_style on empty matrix");

  const std::size_t n = X.n_rows;
  EnsembleCore core;
  core.base_score = mean_of(y);
  core.learning_rate = hyper.learning_rate;

  std::vector<double> yhat(n, core.base_score);
  std::vector<double> g(n);
  std::vector<double> h(n);
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  for (int round = 0; round < hyper.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = squared_loss_gradient(y[i], yhat[i]);
      h[i] = squared_loss_hessian(y[i], yhat[i]);
    }
    std::vector<std::size_t> rows = all_rows;
    auto tree = grow_boosted_node(X, g, h, rows, hyper, 0);
    for (std::size_t i = 0; i < n; ++i) {
      yhat[i] += hyper.learning_rate * predict_tree(*tree, X.row(i));
    }
    core.trees.push_back(std::move(tree));
  }
  return core;
}

double predict_boosted(const EnsembleCore& core, const double* row) {
  double acc = core.base_score;
  for (const auto& tree : core.trees) {
    acc += core.learning_rate * predict_tree(*tree, row);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Leaf-wise histogram boosting
// ---------------------------------------------------------------------------

std::vector<double> quantile_bin_edges(std::span<const double> values,
                                       int n_bins) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> edges;
  const std::size_t d = sorted.size();
  if (d <= 1) return edges;

  if (d <= static_cast<std::size_t>(n_bins)) {
    edges.reserve(d - 1);
    for (std::size_t i = 1; i < d; ++i) {
      edges.push_back(split_midpoint(sorted[i - 1], sorted[i]));
    }
    return edges;
  }

  // More distinct values than bins: edges at the distinct-value quantiles.
  edges.reserve(static_cast<std::size_t>(n_bins) - 1);
  for (int k = 1; k < n_bins; ++k) {
    const std::size_t pos = static_cast<std::size_t>(
        static_cast<std::uint64_t>(k) * d / static_cast<std::uint64_t>(n_bins));
    if (pos == 0 || pos >= d) continue;
    const double edge = split_midpoint(sorted[pos - 1], sorted[pos]);
    if (edges.empty() || edge > edges.back()) edges.push_back(edge);
  }
  return edges;
}

namespace {

struct HistogramBin {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

// Open-leaf bookkeeping; the vector holding these stays in creation order,
// which is the "leftmost leaf" tie rule for equal gains.
struct LeafState {
  TreeNode* node = nullptr;
  std::vector<std::size_t> rows;
  int depth = 0;
  BoostedSplit best;            // threshold stored as bin-edge index
  int best_edge_index = -1;

  bool splittable() const { return best.feature >= 0; }
};

// Per-feature histogram scan for one leaf; returns the best split with the
// threshold recorded as an edge index.
void evaluate_leaf(const Matrix& /*X*/, const std::vector<std::vector<int>>& binned,
                   const std::vector<std::vector<double>>& edges,
                   std::span<const double> g, std::span<const double> h,
                   const HyperParams& hyper, LeafState& leaf) {
  leaf.best = BoostedSplit{};
  leaf.best_edge_index = -1;

  const std::size_t n = leaf.rows.size();
  const std::size_t msl = static_cast<std::size_t>(hyper.min_samples_leaf);
  if (n < 2 * msl) return;

  double g_total = 0.0;
  double h_total = 0.0;
  for (const std::size_t r : leaf.rows) {
    g_total += g[r];
    h_total += h[r];
  }

  const std::size_t p = binned.size();
  std::vector<HistogramBin> hist;
  for (std::size_t f = 0; f < p; ++f) {
    const auto& feature_edges = edges[f];
    if (feature_edges.empty()) continue;
    hist.assign(feature_edges.size() + 1, HistogramBin{});
    const auto& bins = binned[f];
    for (const std::size_t r : leaf.rows) {
      auto& b = hist[static_cast<std::size_t>(bins[r])];
      b.g += g[r];
      b.h += h[r];
      b.count += 1;
    }

    double g_left = 0.0;
    double h_left = 0.0;
    std::size_t count_left = 0;
    for (std::size_t e = 0; e < feature_edges.size(); ++e) {
      g_left += hist[e].g;
      h_left += hist[e].h;
      count_left += hist[e].count;
      if (count_left < msl || n - count_left < msl) continue;
      if (count_left == 0 || count_left == n) continue;
      const double gain = second_order_gain(g_left, h_left, g_total - g_left,
                                            h_total - h_left, hyper.reg_lambda);
      if (gain <= 0.0) continue;
      if (leaf.best.feature < 0 || gain > leaf.best.gain) {
        leaf.best.feature = static_cast<int>(f);
        leaf.best.threshold = feature_edges[e];
        leaf.best.gain = gain;
        leaf.best_edge_index = static_cast<int>(e);
      }
    }
  }
}

}  // namespace

EnsembleCore fit_lgbm_style(const Matrix& X, std::span<const double> y,
                            const HyperParams& hyper) {
  if (X.n_rows != y.size())
    throw LengthMismatch("fit_lgbm_style: matrix rows and target length differ");
  if (X.n_rows == 0) throw EmptyTrace("fit_lgbm_style on empty matrix");

  const std::size_t n = X.n_rows;
  const std::size_t p = X.n_cols;

  EnsembleCore core;
  core.base_score = mean_of(y);
  core.learning_rate = hyper.learning_rate;

  // Bin layout is fitted once on the training matrix and shared by all trees.
  core.bin_edges.resize(p);
  std::vector<std::vector<int>> binned(p, std::vector<int>(n));
  std::vector<double> column(n);
  for (std::size_t f = 0; f < p; ++f) {
    for (std::size_t i = 0; i < n; ++i) column[i] = X.at(i, f);
    core.bin_edges[f] = quantile_bin_edges(column, hyper.n_bins);
    const auto& edges = core.bin_edges[f];
    for (std::size_t i = 0; i < n; ++i) {
      const auto it = std::lower_bound(edges.begin(), edges.end(), column[i]);
      binned[f][i] = static_cast<int>(it - edges.begin());
    }
  }

  std::vector<double> yhat(n, core.base_score);
  std::vector<double> g(n);
  std::vector<double> h(n);

  for (int round = 0; round < hyper.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = squared_loss_gradient(y[i], yhat[i]);
      h[i] = squared_loss_hessian(y[i], yhat[i]);
    }

    auto root = std::make_unique<TreeNode>();
    root->n_samples = static_cast<int>(n);
    {
      double g_sum = 0.0;
      double h_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        g_sum += g[i];
        h_sum += h[i];
      }
      root->value = leaf_weight(g_sum, h_sum, hyper.reg_lambda);
    }

    std::vector<LeafState> open;
    {
      LeafState leaf;
      leaf.node = root.get();
      leaf.rows.resize(n);
      std::iota(leaf.rows.begin(), leaf.rows.end(), std::size_t{0});
      leaf.depth = 0;
      evaluate_leaf(X, binned, core.bin_edges, g, h, hyper, leaf);
      open.push_back(std::move(leaf));
    }

    std::size_t n_leaves = 1;
    while (n_leaves < static_cast<std::size_t>(hyper.max_leaves)) {
      // Expand the open leaf with maximum gain; creation order breaks ties.
      std::size_t best_idx = open.size();
      for (std::size_t i = 0; i < open.size(); ++i) {
        const auto& leaf = open[i];
        if (!leaf.splittable() || leaf.best.gain <= hyper.min_split_gain)
          continue;
        if (hyper.max_depth >= 0 && leaf.depth >= hyper.max_depth) continue;
        if (best_idx == open.size() ||
            leaf.best.gain > open[best_idx].best.gain) {
          best_idx = i;
        }
      }
      if (best_idx == open.size()) break;

      LeafState leaf = std::move(open[best_idx]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_idx));

      TreeNode* node = leaf.node;
      node->feature_index = leaf.best.feature;
      node->threshold = leaf.best.threshold;
      node->gain = leaf.best.gain;
      node->left = std::make_unique<TreeNode>();
      node->right = std::make_unique<TreeNode>();

      const auto& bins = binned[static_cast<std::size_t>(leaf.best.feature)];
      LeafState left;
      LeafState right;
      for (const std::size_t r : leaf.rows) {
        if (bins[r] <= leaf.best_edge_index) {
          left.rows.push_back(r);
        } else {
          right.rows.push_back(r);
        }
      }

      const auto finish_child = [&](LeafState& child, TreeNode* child_node) {
        child.node = child_node;
        child.depth = leaf.depth + 1;
        double g_sum = 0.0;
        double h_sum = 0.0;
        for (const std::size_t r : child.rows) {
          g_sum += g[r];
          h_sum += h[r];
        }
        child_node->n_samples = static_cast<int>(child.rows.size());
        child_node->value = leaf_weight(g_sum, h_sum, hyper.reg_lambda);
        evaluate_leaf(X, binned, core.bin_edges, g, h, hyper, child);
        open.push_back(std::move(child));
      };
      finish_child(left, node->left.get());
      finish_child(right, node->right.get());
      ++n_leaves;
    }

    for (std::size_t i = 0; i < n; ++i) {
      yhat[i] += hyper.learning_rate * predict_tree(*root, X.row(i));
    }
    core.trees.push_back(std::move(root));
  }
  return core;
}

}  // namespace nrkpi
