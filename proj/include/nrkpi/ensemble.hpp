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
#include <span>
#include <vector>

#include "nrkpi/hyper.hpp"
#include "nrkpi/tree.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

/// Shared carrier for bagged and boosted tree ensembles.
struct EnsembleCore {
  std::vector<std::unique_ptr<TreeNode>> trees;
  /// Boosting only; 0 for forests.
  double base_score = 0.0;
  /// Boosting shrinkage applied at prediction time; 1 for forests.
  double learning_rate = 1.0;
  /// lgbm-style only: per-feature histogram bin edges.
  std::vector<std::vector<double>> bin_edges;
};

/// Bagging: each tree fits a bootstrap resample drawn from its own RNG
/// stream (seed XOR tree index), with a random feature subset per split.
/// Per-tree streams make results independent of thread scheduling.
EnsembleCore fit_forest(const Matrix& X, std::span<const double> y,
                        const HyperParams& hyper, int n_threads = 1);

double predict_forest(const EnsembleCore& core, const double* row);

/// Squared-error loss family used by both boosters: L = 1/2 (y - yhat)^2.
double squared_loss(double y, double yhat);
double squared_loss_gradient(double y, double yhat);  // d L / d yhat
double squared_loss_hessian(double y, double yhat);

/// Second-order split gain with L2 leaf regularization.
double second_order_gain(double g_left, double h_left, double g_right,
                         double h_right, double reg_lambda);

/// Second-order boosting with level-wise trees grown on exact splits.
EnsembleCore fit_xgb_style(const Matrix& X, std::span<const double> y,
                           const HyperParams& hyper);

/// Second-order boosting with leaf-wise growth over per-feature quantile
/// histograms; split thresholds are bin-edge values.
EnsembleCore fit_lgbm_style(const Matrix& X, std::span<const double> y,
                            const HyperParams& hyper);

double predict_boosted(const EnsembleCore& core, const double* row);

/// Quantile bin edges (at most n_bins - 1 of them, deduplicated). With
/// fewer distinct values than bins, edges sit at midpoints between
/// consecutive distinct values, making histogram splits match exact splits.
std::vector<double> quantile_bin_edges(std::span<const double> values,
                                       int n_bins);

}  // namespace nrkpi
