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

#include "nrkpi/eval.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nrkpi/errors.hpp"
#include "nrkpi/numfmt.hpp"

namespace nrkpi {

EvalReport evaluate_model(const Model& model, const FeatureMatrix& test_raw,
                          int hist_bins, double band_override) {
  const std::vector<double> yhat = predict(model, test_raw);

  EvalReport report;
  report.model_kind = model.kind;
  report.target_kind = model.target;
  report.n_test = test_raw.n();
  report.mse = mse(test_raw.target, yhat);
  report.rmse = rmse(test_raw.target, yhat);
  report.r2 = r2(test_raw.target, yhat);
  const double band =
      band_override > 0.0 ? band_override : default_error_band(model.target);
  report.error_histogram =
      error_distribution(test_raw.target, yhat, hist_bins, band);
  const ImportanceResult imp = feature_importance(model);
  report.importance = imp.values;
  report.importance_uniform_fallback = imp.uniform_fallback;
  return report;
}

HyperSet HyperSet::defaults(std::uint64_t seed) {
  HyperSet set;
  set.linear = HyperParams::defaults_for(ModelKind::linear, seed);
  set.tree = HyperParams::defaults_for(ModelKind::tree, seed);
  set.forest = HyperParams::defaults_for(ModelKind::random_forest, seed);
  set.xgb = HyperParams::defaults_for(ModelKind::xgb_style, seed);
  set.lgbm = HyperParams::defaults_for(ModelKind::lgbm_style, seed);
  return set;
}

Comparison compare_models(const FeatureMatrix& train, const FeatureMatrix& test,
                          const HyperSet& hypers, int n_threads,
                          double band_override, int hist_bins) {
  if (train.feature_names != test.feature_names)
    throw SchemaMismatch("train and test matrices disagree on features");

  const std::pair<ModelKind, const HyperParams*> plan[] = {
      {ModelKind::linear, &hypers.linear},
      {ModelKind::tree, &hypers.tree},
      {ModelKind::random_forest, &hypers.forest},
      {ModelKind::xgb_style, &hypers.xgb},
      {ModelKind::lgbm_style, &hypers.lgbm},
  };

  Comparison comparison;
  for (const auto& [kind, hyper] : plan) {
    Model model = train_model(kind, train, *hyper, n_threads);
    EvalReport report = evaluate_model(model, test, hist_bins, band_override);
    comparison.rows.push_back({kind, report.mse, report.rmse, report.r2});
    comparison.reports.push_back(std::move(report));
    comparison.models.push_back(std::move(model));
  }
  return comparison;
}

void export_scatter(std::span<const double> y, std::span<const double> yhat,
                    std::ostream& out) {
  if (y.size() != yhat.size())
    throw LengthMismatch("scatter vectors have different lengths");
  out << "actual,predicted\n";
  for (std::size_t i = 0; i < y.size(); ++i) {
    out << format_double(y[i]) << ',' << format_double(yhat[i]) << '\n';
  }
}

void export_scatter_file(std::span<const double> y,
                         std::span<const double> yhat,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  export_scatter(y, yhat, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

void export_histogram(const ErrorHistogram& hist, std::ostream& out) {
  out << "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    out << format_double(hist.edges[b]) << ',' << format_double(hist.edges[b + 1])
        << ',' << hist.counts[b] << '\n';
  }
}

void export_histogram_file(const ErrorHistogram& hist,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  export_histogram(hist, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

void print_comparison_table(const Comparison& comparison,
                            const std::vector<std::string>& feature_names,
                            std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %12s %12s %10s\n", "model",
                "mse", "rmse", "r2");
  out << line;
  for (const auto& row : comparison.rows) {
    std::snprintf(line, sizeof(line), "%-10s %12.4f %12.4f %10.4f\n",
                  to_string(row.kind).c_str(), row.mse, row.rmse, row.r2);
    out << line;
  }
  out << "\nfeature importance (gain share)\n";
  for (const auto& report : comparison.reports) {
    std::string text = to_string(report.model_kind);
    text.resize(10, ' ');
    out << text;
    for (std::size_t j = 0; j < report.importance.size(); ++j) {
      std::snprintf(line, sizeof(line), " %s=%.3f", feature_names[j].c_str(),
                    report.importance[j]);
      out << line;
    }
    out << '\n';
  }
}

std::string comparison_to_json_text(
    const Comparison& comparison,
    const std::vector<std::string>& feature_names) {
  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < comparison.reports.size(); ++i) {
    const auto& report = comparison.reports[i];
    nlohmann::ordered_json entry{
        {"model_kind", to_string(report.model_kind)},
        {"target_kind", to_string(report.target_kind)},
        {"mse", report.mse},
        {"rmse", report.rmse},
        {"r2", report.r2},
        {"n_test", report.n_test},
        {"importance", report.importance},
        {"importance_uniform_fallback", report.importance_uniform_fallback},
        {"error_histogram",
         {{"edges", report.error_histogram.edges},
          {"counts", report.error_histogram.counts},
          {"band", report.error_histogram.band},
          {"within_band_fraction", report.error_histogram.within_band_fraction}}},
    };
    models.push_back(std::move(entry));
  }
  nlohmann::ordered_json j{{"schema_version", kSchemaVersion},
                           {"feature_names", feature_names},
                           {"models", std::move(models)}};
  return j.dump(2) + "\n";
}

}  // namespace nrkpi
