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

namespace nrkpi {

enum class ModelKind { linear, tree, random_forest, xgb_style, lgbm_style };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct HyperParams {
  int max_depth = 10;
  int min_samples_leaf = 2;
  int n_trees = 100;
  double learning_rate = 0.1;
  double reg_lambda = 1.0;
  double min_split_gain = 0.0;
  int max_leaves = 31;
  int n_bins = 255;
  double feature_subsample = 1.0 / 3.0;
  std::uint64_t seed = 0;
  /// Test hook: with bootstrapping off, every forest tree sees all rows.
  bool bootstrap = true;

  /// Community-standard defaults per model family.
  static HyperParams defaults_for(ModelKind kind, std::uint64_t seed = 0);

  void validate(ModelKind kind) const;
};

}  // namespace nrkpi
