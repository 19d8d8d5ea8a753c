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

#include "nrkpi/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nrkpi/console.hpp"
#include "nrkpi/csv.hpp"
#include "nrkpi/errors.hpp"
#include "nrkpi/ingest.hpp"
#include "nrkpi/numfmt.hpp"

namespace nrkpi {

namespace {

Dataset load_trace(const std::string& path, std::vector<RowIssue>* rejected) {
  CsvParseResult parsed = parse_csv_file(path);
  if (rejected) *rejected = std::move(parsed.rejected);
  return std::move(parsed.dataset);
}

}  // namespace

std::size_t cmd_synth(const SynthCommand& cmd) {
  const Dataset trace = generate_trace(cmd.generator);
  write_csv_file(trace, cmd.out_path);
  write_metadata_file(cmd.generator, cmd.out_path + ".meta.json");
  return trace.samples.size();
}

IngestSummary cmd_ingest(const IngestCommand& cmd, std::ostream& log) {
  IngestSummary summary;
  Dataset dataset;

  std::ifstream file;
  std::istream* in = &std::cin;
  if (cmd.in_path != "-") {
    file.open(cmd.in_path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + cmd.in_path + "'");
    in = &file;
  }

  if (cmd.format == IngestFormat::csv) {
    CsvParseResult parsed = parse_csv_trace(*in);
    summary.n_rejected = parsed.rejected.size();
    for (const auto& issue : parsed.rejected) {
      log << "row " << issue.row << ": " << issue.reason << '\n';
    }
    dataset = std::move(parsed.dataset);
  } else {
    auto samples = parse_srsran_console(*in);
    dataset.samples = std::move(samples);
    dataset.source = SourceKind::srsran_console;
  }

  if (cmd.align_interval_ms > 0) {
    dataset = align_timestamps(dataset.samples, cmd.align_interval_ms);
  }

  summary.n_samples = dataset.samples.size();
  write_csv_file(dataset, cmd.out_path);
  return summary;
}

std::pair<FeatureMatrix, FeatureMatrix> prepare_split(
    const Dataset& dataset, TargetKind target, double outlier_z,
    const SplitSpec& split, std::ostream* log) {
  const FeatureMatrix features = derive_features(dataset, target);
  OutlierResult cleaned = remove_outliers(features, outlier_z);
  if (log) {
    if (cleaned.degenerate) *log << "outlier filter: degenerate target, kept all rows\n";
    if (cleaned.capped) *log << "outlier filter: capped at 10% removal\n";
    if (cleaned.n_removed > 0)
      *log << "outlier filter: removed " << cleaned.n_removed << " rows\n";
  }
  return train_test_split(cleaned.matrix, split);
}

TrainOutcome cmd_train(const TrainCommand& cmd, std::ostream& out) {
  const Dataset dataset = load_trace(cmd.in_path, nullptr);
  auto [train, test] = prepare_split(dataset, cmd.target, cmd.outlier_z,
                                     cmd.split, nullptr);

  TrainOutcome outcome;
  outcome.model = train_model(cmd.kind, train, cmd.hyper, cmd.n_threads);
  save_model(outcome.model, cmd.model_out_path);
  outcome.test_report = evaluate_model(outcome.model, test);

  out << "model=" << to_string(cmd.kind) << " target=" << to_string(cmd.target)
      << " n_train=" << train.n() << " n_test=" << test.n() << '\n';
  out << "mse=" << format_double(outcome.test_report.mse)
      << " rmse=" << format_double(outcome.test_report.rmse)
      << " r2=" << format_double(outcome.test_report.r2) << '\n';
  return outcome;
}

Comparison cmd_eval(const EvalCommand& cmd, std::ostream& out) {
  const Dataset dataset = load_trace(cmd.in_path, nullptr);
  auto [train, test] = prepare_split(dataset, cmd.target, cmd.outlier_z,
                                     cmd.split, nullptr);

  Comparison comparison =
      compare_models(train, test, cmd.hypers, cmd.n_threads, cmd.band_override,
                     cmd.hist_bins);

  print_comparison_table(comparison, train.feature_names, out);

  const std::filesystem::path dir(cmd.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create out dir '" + cmd.out_dir + "'");

  {
    std::ofstream report(dir / "report.json", std::ios::binary);
    if (!report) throw IoError("cannot write report.json");
    report << comparison_to_json_text(comparison, train.feature_names);
  }
  {
    std::ofstream importance(dir / "importance.csv", std::ios::binary);
    if (!importance) throw IoError("cannot write importance.csv");
    importance << "model,feature,importance\n";
    for (const auto& report : comparison.reports) {
      for (std::size_t j = 0; j < report.importance.size(); ++j) {
        importance << to_string(report.model_kind) << ','
                   << train.feature_names[j] << ','
                   << format_double(report.importance[j]) << '\n';
      }
    }
  }

  // Scatter and error histogram for the lgbm model (the reference model of
  // the report artifacts).
  const Model& lgbm = comparison.models.back();
  const std::vector<double> yhat = predict(lgbm, test);
  export_scatter_file(test.target, yhat,
                      (dir / ("scatter_" + to_string(cmd.target) + ".csv")).string());
  export_histogram_file(
      comparison.reports.back().error_histogram,
      (dir / ("error_hist_" + to_string(cmd.target) + ".csv")).string());
  return comparison;
}

StreamStats cmd_predict_stream(const PredictStreamCommand& cmd,
                               std::ostream& out, std::ostream& log) {
  const Model model = load_model(cmd.model_path);

  std::ifstream file;
  std::istream* in = &std::cin;
  if (cmd.in_path != "-") {
    file.open(cmd.in_path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + cmd.in_path + "'");
    in = &file;
  }
  return run_prediction_stream(model, *in, out, log, cmd.stream);
}

void cmd_report(const std::string& report_path, std::ostream& out) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + report_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid report JSON: ") + e.what());
  }

  try {
    Comparison comparison;
    const auto feature_names =
        j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& entry : j.at("models")) {
      EvalReport report;
      report.model_kind =
          model_kind_from_string(entry.at("model_kind").get<std::string>());
      report.target_kind =
          target_kind_from_string(entry.at("target_kind").get<std::string>());
      report.mse = entry.at("mse").get<double>();
      report.rmse = entry.at("rmse").get<double>();
      report.r2 = entry.at("r2").get<double>();
      report.n_test = entry.value("n_test", std::size_t{0});
      report.importance = entry.at("importance").get<std::vector<double>>();
      comparison.rows.push_back(
          {report.model_kind, report.mse, report.rmse, report.r2});
      comparison.reports.push_back(std::move(report));
    }
    print_comparison_table(comparison, feature_names, out);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid report field: ") + e.what());
  }
}

}  // namespace nrkpi
