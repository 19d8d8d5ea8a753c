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

#include "nrkpi/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nrkpi/errors.hpp"

namespace nrkpi {

using ordered_json = nlohmann::ordered_json;

Model clone_model(const Model& model) {
  Model out;
  out.kind = model.kind;
  out.target = model.target;
  out.hyper = model.hyper;
  out.scaler = model.scaler;
  out.linear = model.linear;
  out.ensemble.base_score = model.ensemble.base_score;
  out.ensemble.learning_rate = model.ensemble.learning_rate;
  out.ensemble.bin_edges = model.ensemble.bin_edges;
  out.ensemble.trees.reserve(model.ensemble.trees.size());
  for (const auto& tree : model.ensemble.trees) {
    out.ensemble.trees.push_back(clone_tree(*tree));
  }
  return out;
}

Model train_model(ModelKind kind, const FeatureMatrix& train_raw,
                  const HyperParams& hyper, int n_threads) {
  hyper.validate(kind);
  if (train_raw.n() == 0) throw EmptyTrace("train_model on empty matrix");

  Model model;
  model.kind = kind;
  model.target = train_raw.target_kind;
  model.hyper = hyper;
  model.scaler = fit_scaler(train_raw);

  const Matrix scaled = apply_scaler(train_raw.rows, model.scaler);
  const std::span<const double> y(train_raw.target);

  switch (kind) {
    case ModelKind::linear:
      model.linear = fit_linear(scaled, y);
      break;
    case ModelKind::tree:
      model.ensemble.trees.push_back(fit_tree(scaled, y, hyper));
      break;
    case ModelKind::random_forest:
      model.ensemble = fit_forest(scaled, y, hyper, n_threads);
      break;
    case ModelKind::xgb_style:
      model.ensemble = fit_xgb_style(scaled, y, hyper);
      break;
    case ModelKind::lgbm_style:
      model.ensemble = fit_lgbm_style(scaled, y, hyper);
      break;
  }
  return model;
}

double predict_scaled_row(const Model& model, const double* scaled_row) {
  switch (model.kind) {
    case ModelKind::linear:
      return predict_linear(model.linear, scaled_row, model.p());
    case ModelKind::tree:
      return predict_tree(*model.ensemble.trees.front(), scaled_row);
    case ModelKind::random_forest:
      return predict_forest(model.ensemble, scaled_row);
    case ModelKind::xgb_style:
    case ModelKind::lgbm_style:
      return predict_boosted(model.ensemble, scaled_row);
  }
  return 0.0;
}

double predict_row(const Model& model, const double* raw_row, std::size_t p) {
  if (p != model.p())
    throw SchemaMismatch("row has " + std::to_string(p) +
                         " features, model expects " + std::to_string(model.p()));
  double scaled[64];
  std::vector<double> heap;
  double* buf = scaled;
  if (p > 64) {
    heap.resize(p);
    buf = heap.data();
  }
  scale_row_inplace(model.scaler, raw_row, buf);
  return predict_scaled_row(model, buf);
}

std::vector<double> predict(const Model& model, const Matrix& raw_rows) {
  if (raw_rows.n_cols != model.p())
    throw SchemaMismatch("matrix has " + std::to_string(raw_rows.n_cols) +
                         " columns, model expects " + std::to_string(model.p()));
  std::vector<double> out(raw_rows.n_rows);
  for (std::size_t i = 0; i < raw_rows.n_rows; ++i) {
    out[i] = predict_row(model, raw_rows.row(i), raw_rows.n_cols);
  }
  return out;
}

std::vector<double> predict(const Model& model, const FeatureMatrix& raw) {
  if (raw.feature_names != model.scaler.feature_names)
    throw SchemaMismatch("feature names do not match the model's scaler");
  return predict(model, raw.rows);
}

ImportanceResult feature_importance(const Model& model) {
  const std::size_t p = model.p();
  ImportanceResult result;
  result.values.assign(p, 0.0);

  if (model.kind == ModelKind::linear) {
    double total = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      result.values[j] = std::fabs(model.linear.weights[j]);
      total += result.values[j];
    }
    if (total > 0.0) {
      for (auto& v : result.values) v /= total;
      return result;
    }
  } else {
    double total = 0.0;
    for (const auto& tree : model.ensemble.trees) {
      accumulate_gains(*tree, result.values);
    }
    for (const double v : result.values) total += v;
    if (total > 0.0) {
      for (auto& v : result.values) v /= total;
      return result;
    }
  }

  result.values.assign(p, 1.0 / static_cast<double>(p));
  result.uniform_fallback = true;
  return result;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

ordered_json tree_to_json(const TreeNode& node) {
  if (node.is_leaf()) {
    return ordered_json{{"value", node.value}, {"n", node.n_samples}};
  }
  return ordered_json{{"feature", node.feature_index},
                      {"threshold", node.threshold},
                      {"gain", node.gain},
                      {"n", node.n_samples},
                      {"left", tree_to_json(*node.left)},
                      {"right", tree_to_json(*node.right)}};
}

std::unique_ptr<TreeNode> tree_from_json(const nlohmann::json& j) {
  auto node = std::make_unique<TreeNode>();
  node->n_samples = j.value("n", 0);
  if (j.contains("feature")) {
    node->feature_index = j.at("feature").get<int>();
    node->threshold = j.at("threshold").get<double>();
    node->gain = j.value("gain", 0.0);
    node->left = tree_from_json(j.at("left"));
    node->right = tree_from_json(j.at("right"));
  } else {
    node->value = j.at("value").get<double>();
  }
  return node;
}

ordered_json hyper_to_json(const HyperParams& h) {
  return ordered_json{{"max_depth", h.max_depth},
                      {"min_samples_leaf", h.min_samples_leaf},
                      {"n_trees", h.n_trees},
                      {"learning_rate", h.learning_rate},
                      {"reg_lambda", h.reg_lambda},
                      {"min_split_gain", h.min_split_gain},
                      {"max_leaves", h.max_leaves},
                      {"n_bins", h.n_bins},
                      {"feature_subsample", h.feature_subsample},
                      {"seed", h.seed},
                      {"bootstrap", h.bootstrap}};
}

HyperParams hyper_from_json(const nlohmann::json& j) {
  HyperParams h;
  h.max_depth = j.value("max_depth", h.max_depth);
  h.min_samples_leaf = j.value("min_samples_leaf", h.min_samples_leaf);
  h.n_trees = j.value("n_trees", h.n_trees);
  h.learning_rate = j.value("learning_rate", h.learning_rate);
  h.reg_lambda = j.value("reg_lambda", h.reg_lambda);
  h.min_split_gain = j.value("min_split_gain", h.min_split_gain);
  h.max_leaves = j.value("max_leaves", h.max_leaves);
  h.n_bins = j.value("n_bins", h.n_bins);
  h.feature_subsample = j.value("feature_subsample", h.feature_subsample);
  h.seed = j.value("seed", h.seed);
  h.bootstrap = j.value("bootstrap", h.bootstrap);
  return h;
}

}  // namespace

std::string model_to_json_text(const Model& model) {
  ordered_json j;
  j["format_version"] = kModelFormatVersion;
  j["model_kind"] = to_string(model.kind);
  j["target_kind"] = to_string(model.target);
  j["hyper"] = hyper_to_json(model.hyper);
  j["scaler"] = ordered_json{{"feature_names", model.scaler.feature_names},
                             {"means", model.scaler.means},
                             {"stds", model.scaler.stds}};
  if (model.kind == ModelKind::linear) {
    j["weights"] = model.linear.weights;
    j["intercept"] = model.linear.intercept;
    j["condition_warning"] = model.linear.condition_warning;
  } else {
    j["base_score"] = model.ensemble.base_score;
    j["learning_rate"] = model.ensemble.learning_rate;
    if (model.kind == ModelKind::lgbm_style) {
      j["bins"] = model.ensemble.bin_edges;
    }
    ordered_json trees = ordered_json::array();
    for (const auto& tree : model.ensemble.trees) {
      trees.push_back(tree_to_json(*tree));
    }
    j["trees"] = std::move(trees);
  }
  const ImportanceResult imp = feature_importance(model);
  j["importance"] = imp.values;
  return j.dump(2) + "\n";
}

Model model_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid model JSON: ") + e.what());
  }

  try {
    const std::string version = j.at("format_version").get<std::string>();
    if (version != kModelFormatVersion) {
      throw FormatError("unknown model format_version '" + version + "'");
    }
    Model model;
    model.kind = model_kind_from_string(j.at("model_kind").get<std::string>());
    model.target = target_kind_from_string(j.at("target_kind").get<std::string>());
    model.hyper = hyper_from_json(j.at("hyper"));
    const auto& scaler = j.at("scaler");
    model.scaler.feature_names =
        scaler.at("feature_names").get<std::vector<std::string>>();
    model.scaler.means = scaler.at("means").get<std::vector<double>>();
    model.scaler.stds = scaler.at("stds").get<std::vector<double>>();
    if (model.scaler.means.size() != model.scaler.stds.size() ||
        model.scaler.means.size() != model.scaler.feature_names.size()) {
      throw FormatError("inconsistent scaler arrays");
    }

    if (model.kind == ModelKind::linear) {
      model.linear.weights = j.at("weights").get<std::vector<double>>();
      model.linear.intercept = j.at("intercept").get<double>();
      model.linear.condition_warning = j.value("condition_warning", false);
      if (model.linear.weights.size() != model.p()) {
        throw FormatError("weight vector width does not match scaler");
      }
    } else {
      model.ensemble.base_score = j.value("base_score", 0.0);
      model.ensemble.learning_rate = j.value("learning_rate", 1.0);
      if (j.contains("bins")) {
        model.ensemble.bin_edges =
            j.at("bins").get<std::vector<std::vector<double>>>();
      }
      for (const auto& tree : j.at("trees")) {
        model.ensemble.trees.push_back(tree_from_json(tree));
      }
      if (model.kind == ModelKind::tree && model.ensemble.trees.size() != 1) {
        throw FormatError("tree model must contain exactly one tree");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid model field: ") + e.what());
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << model_to_json_text(model);
  if (!out) throw IoError("write failed for '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json_text(buffer.str());
}

}  // namespace nrkpi
