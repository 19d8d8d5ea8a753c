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

#include "nrkpi/hyper.hpp"

#include "nrkpi/errors.hpp"

namespace nrkpi {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::tree: return "tree";
    case ModelKind::random_forest: return "forest";
    case ModelKind::xgb_style: return "xgb";
    case ModelKind::lgbm_style: return "lgbm";
  }
  return "linear";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "tree") return ModelKind::tree;
  if (name == "forest" || name == "random_forest") return ModelKind::random_forest;
  if (name == "xgb" || name == "xgb_style") return ModelKind::xgb_style;
  if (name == "lgbm" || name == "lgbm_style") return ModelKind::lgbm_style;
  throw ConfigError("unknown model kind '" + name + "'");
}

HyperParams HyperParams::defaults_for(ModelKind kind, std::uint64_t seed) {
  HyperParams h;
  h.seed = seed;
  switch (kind) {
    case ModelKind::linear:
      break;
    case ModelKind::tree:
      h.max_depth = 10;
      h.min_samples_leaf = 2;
      break;
    case ModelKind::random_forest:
      h.max_depth = 10;
      h.min_samples_leaf = 2;
      h.n_trees = 100;
      break;
    case ModelKind::xgb_style:
      h.max_depth = 6;
      h.min_samples_leaf = 2;
      h.n_trees = 200;
      break;
    case ModelKind::lgbm_style:
      h.max_depth = -1;  // unbounded; the leaf budget is the constraint
      h.min_samples_leaf = 2;
      h.n_trees = 200;
      break;
  }
  return h;
}

void HyperParams::validate(ModelKind kind) const {
  // max_depth: -1 = unbounded, 0 = a single leaf.
  if (max_depth < -1) throw ConfigError("max_depth must be >= -1");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (n_trees < 0) throw ConfigError("n_trees must be >= 0");
  if (learning_rate <= 0.0 || learning_rate > 1.0)
    throw ConfigError("learning_rate must lie in (0, 1]");
  if (reg_lambda < 0.0) throw ConfigError("reg_lambda must be >= 0");
  if (min_split_gain < 0.0) throw ConfigError("min_split_gain must be >= 0");
  if (kind == ModelKind::lgbm_style && max_leaves < 1)
    throw ConfigError("max_leaves must be >= 1");
  if (kind == ModelKind::lgbm_style && n_bins < 2)
    throw ConfigError("n_bins must be >= 2");
  if (feature_subsample <= 0.0 || feature_subsample > 1.0)
    throw ConfigError("feature_subsample must lie in (0, 1]");
}

}  // namespace nrkpi
