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

#include <string>
#include <vector>

#include "nrkpi/ensemble.hpp"
#include "nrkpi/hyper.hpp"
#include "nrkpi/linear.hpp"
#include "nrkpi/preprocess.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

inline constexpr const char* kModelFormatVersion = "1";

/// A fitted predictor with its embedded scaler. predict() takes raw
/// features and applies the scaler internally, so inference needs no
/// separate scaler artifact.
struct Model {
  ModelKind kind = ModelKind::linear;
  TargetKind target = TargetKind::throughput;
  HyperParams hyper;
  ScalerParams scaler;
  LinearCore linear;
  EnsembleCore ensemble;

  std::size_t p() const { return scaler.means.size(); }
};

Model clone_model(const Model& model);

/// Fits the requested model on a raw training matrix: the scaler is fitted
/// on these rows and embedded, and the core model is trained in scaled
/// space. `n_threads` only affects forest build speed, never its result.
Model train_model(ModelKind kind, const FeatureMatrix& train_raw,
                  const HyperParams& hyper, int n_threads = 1);

/// Predictions for raw features (scaler applied internally).
std::vector<double> predict(const Model& model, const Matrix& raw_rows);
std::vector<double> predict(const Model& model, const FeatureMatrix& raw);
double predict_row(const Model& model, const double* raw_row, std::size_t p);

/// Scaled-space path; predict(raw) is exactly scale-then-this.
double predict_scaled_row(const Model& model, const double* scaled_row);

struct ImportanceResult {
  std::vector<double> values;  // non-negative, sums to 1
  /// No splits existed (or all weights were zero): uniform fallback.
  bool uniform_fallback = false;
};

/// Tree models: per-feature split-gain totals, normalized to sum 1.
/// Linear models: |w| / sum |w| (a sensitivity proxy, not a gain).
ImportanceResult feature_importance(const Model& model);

std::string model_to_json_text(const Model& model);
Model model_from_json_text(const std::string& text);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace nrkpi
