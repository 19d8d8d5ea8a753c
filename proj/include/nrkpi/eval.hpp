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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nrkpi/metrics.hpp"
#include "nrkpi/model.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

struct EvalReport {
  ModelKind model_kind = ModelKind::linear;
  TargetKind target_kind = TargetKind::throughput;
  double mse = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
  ErrorHistogram error_histogram;
  std::vector<double> importance;
  bool importance_uniform_fallback = false;
  std::size_t n_test = 0;
};

/// Evaluates a fitted model on a raw test matrix.
EvalReport evaluate_model(const Model& model, const FeatureMatrix& test_raw,
                          int hist_bins = 40, double band_override = -1.0);

/// Hyperparameters for the five-model comparison.
struct HyperSet {
  HyperParams linear;
  HyperParams tree;
  HyperParams forest;
  HyperParams xgb;
  HyperParams lgbm;

  static HyperSet defaults(std::uint64_t seed = 0);
};

struct ComparisonRow {
  ModelKind kind = ModelKind::linear;
  double mse = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
};

/// All five models fitted on the same train matrix and evaluated on the
/// same test matrix, in the fixed order linear, tree, forest, xgb, lgbm.
struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<EvalReport> reports;
  std::vector<Model> models;
};

Comparison compare_models(const FeatureMatrix& train, const FeatureMatrix& test,
                          const HyperSet& hypers, int n_threads = 1,
                          double band_override = -1.0, int hist_bins = 40);

/// Two-column CSV "actual,predicted"; round-trips at full precision.
void export_scatter(std::span<const double> y, std::span<const double> yhat,
                    std::ostream& out);
void export_scatter_file(std::span<const double> y,
                         std::span<const double> yhat,
                         const std::string& path);

void export_histogram(const ErrorHistogram& hist, std::ostream& out);
void export_histogram_file(const ErrorHistogram& hist,
                           const std::string& path);

/// Human-readable comparison table (stdout side of the report contract).
void print_comparison_table(const Comparison& comparison,
                            const std::vector<std::string>& feature_names,
                            std::ostream& out);

/// Machine-readable report JSON.
std::string comparison_to_json_text(const Comparison& comparison,
                                    const std::vector<std::string>& feature_names);

}  // namespace nrkpi
