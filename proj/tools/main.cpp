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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nrkpi/errors.hpp"
#include "nrkpi/pipeline.hpp"

namespace {

using nrkpi::GeneratorConfig;
using nrkpi::HyperParams;
using nrkpi::ModelKind;

struct GlobalFlags {
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  int threads = 1;
  std::string config_path;
};

// Optional defaults file. Accepts a trace sidecar (generator only) or a
// combined document with "generator" / "split" / "hyper" sections plus
// "model", "target", "outlier_z", and "band" keys. Precedence everywhere:
// built-in defaults < config file < explicit flags.
struct FileConfig {
  nlohmann::json root;

  static FileConfig load(const std::string& path) {
    FileConfig config;
    if (path.empty()) return config;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nrkpi::IoError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
      config.root = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
      throw nrkpi::FormatError(std::string("invalid config JSON: ") + e.what());
    }
    return config;
  }

  bool empty() const { return root.is_null(); }

  const nlohmann::json* section(const char* name) const {
    if (root.is_object() && root.contains(name)) return &root.at(name);
    return nullptr;
  }

  bool has_generator() const {
    return section("generator") != nullptr ||
           (root.is_object() && root.contains("n_samples"));
  }

  GeneratorConfig generator() const {
    return nrkpi::config_from_json_text(root.dump());
  }

  void apply_split(nrkpi::SplitSpec& split, bool fraction_passed,
                   bool seed_passed, bool shuffle_passed) const {
    const nlohmann::json* j = section("split");
    if (!j) return;
    if (!fraction_passed)
      split.train_fraction = j->value("train_fraction", split.train_fraction);
    if (!seed_passed) split.seed = j->value("seed", split.seed);
    if (!shuffle_passed) split.shuffle = j->value("shuffle", split.shuffle);
  }

  void apply_hyper(HyperParams& hyper) const {
    const nlohmann::json* j = section("hyper");
    if (!j) return;
    hyper.max_depth = j->value("max_depth", hyper.max_depth);
    hyper.min_samples_leaf = j->value("min_samples_leaf", hyper.min_samples_leaf);
    hyper.n_trees = j->value("n_trees", hyper.n_trees);
    hyper.learning_rate = j->value("learning_rate", hyper.learning_rate);
    hyper.reg_lambda = j->value("reg_lambda", hyper.reg_lambda);
    hyper.min_split_gain = j->value("min_split_gain", hyper.min_split_gain);
    hyper.max_leaves = j->value("max_leaves", hyper.max_leaves);
    hyper.n_bins = j->value("n_bins", hyper.n_bins);
    hyper.feature_subsample =
        j->value("feature_subsample", hyper.feature_subsample);
    hyper.seed = j->value("seed", hyper.seed);
  }

  std::optional<std::string> string_key(const char* name) const {
    if (root.is_object() && root.contains(name) && root.at(name).is_string()) {
      return root.at(name).get<std::string>();
    }
    return std::nullopt;
  }

  std::optional<double> number_key(const char* name) const {
    if (root.is_object() && root.contains(name) && root.at(name).is_number()) {
      return root.at(name).get<double>();
    }
    return std::nullopt;
  }
};

void log_effective_config(const std::string& command,
                          const nlohmann::ordered_json& config) {
  std::cerr << "config " << command << " " << config.dump() << '\n';
}

void add_generator_flags(CLI::App* cmd, GeneratorConfig& gen) {
  cmd->add_option("--n", gen.n_samples, "number of samples");
  cmd->add_option("--seed", gen.seed, "generator seed");
  cmd->add_option("--snr-mean", gen.snr_mean_db, "mean SNR (dB)");
  cmd->add_option("--snr-ar", gen.snr_ar_coeff, "AR(1) coefficient in [0,1)");
  cmd->add_option("--snr-noise", gen.snr_noise_std_db, "AR(1) noise std (dB)");
  cmd->add_flag("--mobility", gen.mobility, "add sinusoidal SNR swing");
  cmd->add_option("--cqi-report-noise", gen.cqi_report_noise_db,
                  "measurement error on the recorded CQI (dB)");
  cmd->add_option("--eff-floor", gen.eff_floor,
                  "relative spectral efficiency at MCS 0");
  cmd->add_option("--bandwidth", gen.bandwidth_mhz, "channel bandwidth (MHz)");
  cmd->add_option("--max-thr", gen.max_thr_mbps, "peak throughput at 20 MHz (Mbps)");
  cmd->add_option("--bler-target", gen.bler_target, "outer-loop BLER target");
  cmd->add_option("--label-noise", gen.label_noise_std,
                  "throughput label noise std (Mbps)");
  cmd->add_option("--session-length", gen.session_length,
                  "samples per load session");
  cmd->add_option("--load-min", gen.load_min, "minimum session load factor");
  cmd->add_option("--load-max", gen.load_max, "maximum session load factor");
  cmd->add_option("--tti-budget", gen.tti_budget, "TTIs per reporting interval");
  cmd->add_option("--load-bler-gain", gen.load_bler_gain_db,
                  "load interference penalty (dB at full load)");
  cmd->add_option("--margin-sensitivity", gen.margin_sensitivity,
                  "error-rate sensitivity to the link-margin mismatch");
  cmd->add_option("--interval-ms", gen.interval_ms, "reporting interval (ms)");
  cmd->add_option("--olla-init", gen.olla_init, "initial OLLA offset");
}

// Keeps flag-passed generator fields on top of config-file values.
void merge_generator(CLI::App* synth, const GeneratorConfig& from_flags,
                     GeneratorConfig& gen) {
  const auto passed = [&](const char* flag) { return synth->count(flag) > 0; };
  if (passed("--n")) gen.n_samples = from_flags.n_samples;
  if (passed("--seed")) gen.seed = from_flags.seed;
  if (passed("--snr-mean")) gen.snr_mean_db = from_flags.snr_mean_db;
  if (passed("--snr-ar")) gen.snr_ar_coeff = from_flags.snr_ar_coeff;
  if (passed("--snr-noise")) gen.snr_noise_std_db = from_flags.snr_noise_std_db;
  if (passed("--mobility")) gen.mobility = from_flags.mobility;
  if (passed("--cqi-report-noise"))
    gen.cqi_report_noise_db = from_flags.cqi_report_noise_db;
  if (passed("--eff-floor")) gen.eff_floor = from_flags.eff_floor;
  if (passed("--bandwidth")) gen.bandwidth_mhz = from_flags.bandwidth_mhz;
  if (passed("--max-thr")) gen.max_thr_mbps = from_flags.max_thr_mbps;
  if (passed("--bler-target")) gen.bler_target = from_flags.bler_target;
  if (passed("--label-noise")) gen.label_noise_std = from_flags.label_noise_std;
  if (passed("--session-length")) gen.session_length = from_flags.session_length;
  if (passed("--load-min")) gen.load_min = from_flags.load_min;
  if (passed("--load-max")) gen.load_max = from_flags.load_max;
  if (passed("--tti-budget")) gen.tti_budget = from_flags.tti_budget;
  if (passed("--load-bler-gain"))
    gen.load_bler_gain_db = from_flags.load_bler_gain_db;
  if (passed("--margin-sensitivity"))
    gen.margin_sensitivity = from_flags.margin_sensitivity;
  if (passed("--interval-ms")) gen.interval_ms = from_flags.interval_ms;
  if (passed("--olla-init")) gen.olla_init = from_flags.olla_init;
}

struct HyperFlags {
  std::optional<int> max_depth;
  std::optional<int> min_samples_leaf;
  std::optional<int> n_trees;
  std::optional<double> learning_rate;
  std::optional<double> reg_lambda;
  std::optional<double> min_split_gain;
  std::optional<int> max_leaves;
  std::optional<int> n_bins;
  std::optional<double> feature_subsample;

  void apply(HyperParams& hyper) const {
    if (max_depth) hyper.max_depth = *max_depth;
    if (min_samples_leaf) hyper.min_samples_leaf = *min_samples_leaf;
    if (n_trees) hyper.n_trees = *n_trees;
    if (learning_rate) hyper.learning_rate = *learning_rate;
    if (reg_lambda) hyper.reg_lambda = *reg_lambda;
    if (min_split_gain) hyper.min_split_gain = *min_split_gain;
    if (max_leaves) hyper.max_leaves = *max_leaves;
    if (n_bins) hyper.n_bins = *n_bins;
    if (feature_subsample) hyper.feature_subsample = *feature_subsample;
  }
};

void add_hyper_flags(CLI::App* cmd, HyperFlags& flags) {
  cmd->add_option("--max-depth", flags.max_depth, "tree depth limit (-1 = unbounded)");
  cmd->add_option("--min-samples-leaf", flags.min_samples_leaf,
                  "minimum samples per leaf");
  cmd->add_option("--n-trees", flags.n_trees, "ensemble size / boosting rounds");
  cmd->add_option("--learning-rate", flags.learning_rate, "boosting shrinkage");
  cmd->add_option("--reg-lambda", flags.reg_lambda, "L2 leaf regularization");
  cmd->add_option("--min-split-gain", flags.min_split_gain,
                  "minimum gain to accept a split");
  cmd->add_option("--max-leaves", flags.max_leaves, "leaf budget (lgbm)");
  cmd->add_option("--n-bins", flags.n_bins, "histogram bins (lgbm)");
  cmd->add_option("--feature-subsample", flags.feature_subsample,
                  "feature fraction per split (forest)");
}

nlohmann::ordered_json split_json(const nrkpi::SplitSpec& split) {
  return {{"train_fraction", split.train_fraction},
          {"seed", split.seed},
          {"shuffle", split.shuffle}};
}

int run(int argc, char** argv) {
  CLI::App app{"5G NR downlink throughput/BLER prediction pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalFlags global;
  app.add_option("--seed", global.seed, "default seed for all stages");
  app.add_option("--out-dir", global.out_dir, "default output directory");
  app.add_option("--threads", global.threads, "worker threads for forest fitting");
  app.add_option("--config", global.config_path,
                 "JSON defaults: generator/split/hyper sections, model, "
                 "target, outlier_z, band (flags win)");

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic trace");
  GeneratorConfig gen;
  std::string synth_out;
  add_generator_flags(synth, gen);
  synth->add_option("--out", synth_out, "output CSV path");

  // --- ingest ---------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "normalize a trace into canonical CSV");
  nrkpi::IngestCommand ingest_cmd;
  std::string ingest_format = "csv";
  ingest->add_option("--in", ingest_cmd.in_path, "input path ('-' = stdin)")
      ->default_val("-");
  ingest->add_option("--out", ingest_cmd.out_path, "output CSV path")->required();
  ingest->add_option("--format", ingest_format, "input format: csv | console")
      ->check(CLI::IsMember({"csv", "console"}));
  ingest->add_option("--align", ingest_cmd.align_interval_ms,
                     "snap timestamps to this grid (ms, 0 = off)");

  // --- train ----------------------------------------------------------------
  auto* train = app.add_subcommand("train", "fit one model and report test metrics");
  nrkpi::TrainCommand train_cmd;
  std::string train_model_name = "lgbm";
  std::string train_target = "throughput";
  HyperFlags train_hyper;
  bool train_time_ordered = false;
  std::optional<std::uint64_t> train_split_seed;
  train->add_option("--in", train_cmd.in_path, "input trace CSV")->required();
  train->add_option("--out", train_cmd.model_out_path, "model JSON path")
      ->default_val("model.json");
  train->add_option("--model", train_model_name,
                    "linear | tree | forest | xgb | lgbm");
  train->add_option("--target", train_target, "throughput | bler");
  train->add_option("--train-fraction", train_cmd.split.train_fraction,
                    "training fraction of the split");
  train->add_option("--split-seed", train_split_seed, "split permutation seed");
  train->add_flag("--time-ordered", train_time_ordered,
                  "no shuffle: first rows train, last rows test");
  train->add_option("--outlier-z", train_cmd.outlier_z, "outlier threshold (sigma)");
  add_hyper_flags(train, train_hyper);

  // --- eval -----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "compare all five models on one trace");
  nrkpi::EvalCommand eval_cmd;
  std::string eval_target = "throughput";
  bool eval_time_ordered = false;
  std::optional<std::uint64_t> eval_split_seed;
  std::optional<std::string> eval_out_dir;
  eval->add_option("--in", eval_cmd.in_path, "input trace CSV")->required();
  eval->add_option("--out-dir", eval_out_dir, "report output directory");
  eval->add_option("--target", eval_target, "throughput | bler");
  eval->add_option("--train-fraction", eval_cmd.split.train_fraction,
                   "training fraction of the split");
  eval->add_option("--split-seed", eval_split_seed, "split permutation seed");
  eval->add_flag("--time-ordered", eval_time_ordered,
                 "no shuffle: first rows train, last rows test");
  eval->add_option("--outlier-z", eval_cmd.outlier_z, "outlier threshold (sigma)");
  eval->add_option("--band", eval_cmd.band_override,
                   "error-band override for the within-band fraction");
  eval->add_option("--hist-bins", eval_cmd.hist_bins, "error histogram bins");

  // --- predict-stream ---------------------------------------------------------
  auto* stream = app.add_subcommand("predict-stream",
                                    "replay or follow a stream of samples");
  nrkpi::PredictStreamCommand stream_cmd;
  std::string stream_format = "csv";
  stream->add_option("--model", stream_cmd.model_path, "model JSON path")
      ->required();
  stream->add_option("--in", stream_cmd.in_path, "input path ('-' = stdin)")
      ->default_val("-");
  stream->add_option("--format", stream_format, "input format: csv | console")
      ->check(CLI::IsMember({"csv", "console"}));
  stream->add_option("--window", stream_cmd.stream.window,
                     "rolling R2 window length");

  // --- report ---------------------------------------------------------------
  auto* report = app.add_subcommand("report", "render a saved report.json");
  std::string report_path;
  report->add_option("--in", report_path, "report.json path")->required();

  CLI11_PARSE(app, argc, argv);

  const FileConfig file = FileConfig::load(global.config_path);
  const bool global_seed_passed = app.count("--seed") > 0;

  if (synth->parsed()) {
    if (!synth->count("--seed")) gen.seed = global.seed;
    if (file.has_generator()) {
      const GeneratorConfig from_flags = gen;
      gen = file.generator();
      merge_generator(synth, from_flags, gen);
      if (global_seed_passed && !synth->count("--seed")) gen.seed = global.seed;
    }
    if (synth_out.empty()) synth_out = global.out_dir + "/trace.csv";
    nrkpi::SynthCommand cmd{gen, synth_out};
    log_effective_config("synth",
                         nlohmann::ordered_json::parse(nrkpi::metadata_json(gen)));
    const std::size_t n = cmd_synth(cmd);
    std::cout << "wrote " << n << " samples to " << synth_out << '\n';
    return 0;
  }

  if (ingest->parsed()) {
    ingest_cmd.format = ingest_format == "console" ? nrkpi::IngestFormat::console
                                                   : nrkpi::IngestFormat::csv;
    log_effective_config("ingest",
                         {{"in", ingest_cmd.in_path},
                          {"out", ingest_cmd.out_path},
                          {"format", ingest_format},
                          {"align_interval_ms", ingest_cmd.align_interval_ms}});
    const auto summary = cmd_ingest(ingest_cmd, std::cerr);
    std::cout << "wrote " << summary.n_samples << " samples ("
              << summary.n_rejected << " rejected) to " << ingest_cmd.out_path
              << '\n';
    return 0;
  }

  if (train->parsed()) {
    if (!train->count("--model")) {
      if (const auto name = file.string_key("model")) train_model_name = *name;
    }
    if (!train->count("--target")) {
      if (const auto name = file.string_key("target")) train_target = *name;
    }
    if (!train->count("--outlier-z")) {
      if (const auto z = file.number_key("outlier_z")) train_cmd.outlier_z = *z;
    }
    train_cmd.kind = nrkpi::model_kind_from_string(train_model_name);
    train_cmd.target = nrkpi::target_kind_from_string(train_target);
    train_cmd.split.seed = global.seed;
    train_cmd.split.shuffle = !train_time_ordered;
    file.apply_split(train_cmd.split, train->count("--train-fraction") > 0,
                     train_split_seed.has_value() || global_seed_passed,
                     train->count("--time-ordered") > 0);
    if (train_split_seed) train_cmd.split.seed = *train_split_seed;
    train_cmd.hyper = HyperParams::defaults_for(train_cmd.kind, global.seed);
    file.apply_hyper(train_cmd.hyper);
    if (global_seed_passed) train_cmd.hyper.seed = global.seed;
    train_hyper.apply(train_cmd.hyper);
    train_cmd.n_threads = global.threads;
    log_effective_config("train",
                         {{"in", train_cmd.in_path},
                          {"out", train_cmd.model_out_path},
                          {"model", to_string(train_cmd.kind)},
                          {"target", to_string(train_cmd.target)},
                          {"outlier_z", train_cmd.outlier_z},
                          {"split", split_json(train_cmd.split)},
                          {"threads", train_cmd.n_threads}});
    cmd_train(train_cmd, std::cout);
    return 0;
  }

  if (eval->parsed()) {
    if (!eval->count("--target")) {
      if (const auto name = file.string_key("target")) eval_target = *name;
    }
    if (!eval->count("--outlier-z")) {
      if (const auto z = file.number_key("outlier_z")) eval_cmd.outlier_z = *z;
    }
    if (!eval->count("--band")) {
      if (const auto band = file.number_key("band")) eval_cmd.band_override = *band;
    }
    eval_cmd.target = nrkpi::target_kind_from_string(eval_target);
    eval_cmd.split.seed = global.seed;
    eval_cmd.split.shuffle = !eval_time_ordered;
    file.apply_split(eval_cmd.split, eval->count("--train-fraction") > 0,
                     eval_split_seed.has_value() || global_seed_passed,
                     eval->count("--time-ordered") > 0);
    if (eval_split_seed) eval_cmd.split.seed = *eval_split_seed;
    eval_cmd.hypers = nrkpi::HyperSet::defaults(global.seed);
    for (HyperParams* h : {&eval_cmd.hypers.linear, &eval_cmd.hypers.tree,
                           &eval_cmd.hypers.forest, &eval_cmd.hypers.xgb,
                           &eval_cmd.hypers.lgbm}) {
      file.apply_hyper(*h);
      if (global_seed_passed) h->seed = global.seed;
    }
    eval_cmd.out_dir = eval_out_dir.value_or(global.out_dir);
    eval_cmd.n_threads = global.threads;
    log_effective_config("eval", {{"in", eval_cmd.in_path},
                                  {"out_dir", eval_cmd.out_dir},
                                  {"target", to_string(eval_cmd.target)},
                                  {"outlier_z", eval_cmd.outlier_z},
                                  {"split", split_json(eval_cmd.split)},
                                  {"threads", eval_cmd.n_threads}});
    cmd_eval(eval_cmd, std::cout);
    return 0;
  }

  if (stream->parsed()) {
    stream_cmd.stream.format = stream_format == "console"
                                   ? nrkpi::StreamFormat::console
                                   : nrkpi::StreamFormat::csv;
    log_effective_config("predict-stream",
                         {{"model", stream_cmd.model_path},
                          {"in", stream_cmd.in_path},
                          {"format", stream_format},
                          {"window", stream_cmd.stream.window}});
    cmd_predict_stream(stream_cmd, std::cout, std::cerr);
    return 0;
  }

  if (report->parsed()) {
    log_effective_config("report", {{"in", report_path}});
    nrkpi::cmd_report(report_path, std::cout);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nrkpi::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << '\n';
    return 1;
  }
}
