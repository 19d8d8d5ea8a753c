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
#include <optional>
#include <string>

#include "nrkpi/eval.hpp"
#include "nrkpi/model.hpp"
#include "nrkpi/preprocess.hpp"
#include "nrkpi/stream.hpp"
#include "nrkpi/synthgen.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

/// CLI command implementations. The binary in tools/ is a flag parser over
/// these, which keeps the whole pipeline drivable from tests.

struct SynthCommand {
  GeneratorConfig generator;
  std::string out_path;
};

/// Writes the trace CSV plus a `<out>.meta.json` sidecar. Returns the
/// number of samples written.
std::size_t cmd_synth(const SynthCommand& cmd);

enum class IngestFormat { csv, console };

struct IngestCommand {
  std::string in_path;   // "-" reads standard input
  std::string out_path;
  IngestFormat format = IngestFormat::csv;
  /// 0 disables alignment.
  std::int64_t align_interval_ms = 0;
};

struct IngestSummary {
  std::size_t n_samples = 0;
  std::size_t n_rejected = 0;
};

IngestSummary cmd_ingest(const IngestCommand& cmd, std::ostream& log);

struct TrainCommand {
  std::string in_path;
  std::string model_out_path;
  ModelKind kind = ModelKind::lgbm_style;
  TargetKind target = TargetKind::throughput;
  HyperParams hyper;
  SplitSpec split;
  double outlier_z = 3.0;
  int n_threads = 1;
};

struct TrainOutcome {
  Model model;
  EvalReport test_report;
};

/// outliers -> split -> scale -> fit; prints test MSE/RMSE/R2 to `out` and
/// writes the model JSON.
TrainOutcome cmd_train(const TrainCommand& cmd, std::ostream& out);

struct EvalCommand {
  std::string in_path;
  std::string out_dir;
  TargetKind target = TargetKind::throughput;
  HyperSet hypers;
  SplitSpec split;
  double outlier_z = 3.0;
  int n_threads = 1;
  double band_override = -1.0;
  int hist_bins = 40;
};

/// Runs the five-model comparison; writes report.json, importance.csv, and
/// the lgbm scatter/error-histogram CSVs into out_dir; prints the table.
Comparison cmd_eval(const EvalCommand& cmd, std::ostream& out);

struct PredictStreamCommand {
  std::string model_path;
  std::string in_path;  // "-" reads standard input
  StreamOptions stream;
};

StreamStats cmd_predict_stream(const PredictStreamCommand& cmd,
                               std::ostream& out, std::ostream& log);

/// Renders a saved report.json as the human-readable table.
void cmd_report(const std::string& report_path, std::ostream& out);

/// Shared preprocessing front half: derive -> outliers -> split.
std::pair<FeatureMatrix, FeatureMatrix> prepare_split(
    const Dataset& dataset, TargetKind target, double outlier_z,
    const SplitSpec& split, std::ostream* log = nullptr);

}  // namespace nrkpi
