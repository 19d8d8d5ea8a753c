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

// Acceptance suite: one line per criterion, exit code = number of failures.
//
//  1. tree fits match an exhaustive CART oracle exactly
//  2. linear fits match a pseudo-inverse oracle to 1e-8 relative
//  3. metric identities and worked examples
//  4. boosting descent and gradient check
//  5. five-model comparison reproduces the reported R^2 pattern
//  6. feature importance: MCS leads throughput, TTI leads BLER
//  7. error bands: 90% within +/-2.5 Mbps and +/-0.05
//  8. fixed seeds give byte-identical artifacts across runs and threads
//  9. streaming emits one line per sample under 1 ms each
// 10. ingest round trip and console fixtures

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "nrkpi/console.hpp"
#include "nrkpi/csv.hpp"
#include "nrkpi/ensemble.hpp"
#include "nrkpi/eval.hpp"
#include "nrkpi/ingest.hpp"
#include "nrkpi/metrics.hpp"
#include "nrkpi/model.hpp"
#include "nrkpi/pipeline.hpp"
#include "nrkpi/preprocess.hpp"
#include "nrkpi/stream.hpp"
#include "nrkpi/synthgen.hpp"
#include "nrkpi/tree.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nrkpi;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", index,
              name, detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct SplitData {
  FeatureMatrix train;
  FeatureMatrix test;
};

SplitData default_split(const Dataset& trace, TargetKind target) {
  SplitSpec spec;
  spec.seed = 42;
  auto [train, test] = prepare_split(trace, target, 3.0, spec);
  return {std::move(train), std::move(test)};
}

// --------------------------------------------------------------------------

void criterion_1_tree_oracle() {
  const auto start = Clock::now();
  Rng rng(20260810);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(63));
    const std::size_t p = 1 + static_cast<std::size_t>(rng.next_below(3));
    const auto inst = oracle::random_instance(rng, n, p);

    HyperParams h;
    h.max_depth = -1;
    h.min_samples_leaf = 1;
    const auto tree = fit_tree(inst.X, inst.y, h);
    const auto expected = oracle::cart_training_predictions(inst.X, inst.y, 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (predict_tree(*tree, inst.X.row(i)) != expected[i]) {
        ++mismatches;
        break;
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "200 instances, " << mismatches << " mismatches, "
         << elapsed << " s";
  report(1, "CART oracle equivalence", mismatches == 0 && elapsed < 10.0,
         detail.str());
}

void criterion_2_linear_oracle() {
  Rng rng(8086);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 30 + static_cast<std::size_t>(rng.next_below(50));
    const auto inst = oracle::random_instance(rng, n, 4);
    const LinearCore core = fit_linear(inst.X, inst.y);
    const auto expected = oracle::pinv_least_squares(inst.X, inst.y);
    for (std::size_t j = 0; j < 5; ++j) {
      const double got = j < 4 ? core.weights[j] : core.intercept;
      const double rel = std::fabs(got - expected[j]) /
                         std::max(std::fabs(expected[j]), 1e-3);
      worst = std::max(worst, rel);
    }
  }
  std::ostringstream detail;
  detail << "100 instances, worst relative deviation " << worst;
  report(2, "linear pseudo-inverse equivalence", worst < 1e-8, detail.str());
}

void criterion_3_metric_identities() {
  bool ok = true;
  std::string why = "worked examples + 1000 random vectors";

  const std::vector<double> y{1, 2, 3};
  ok = ok && mse(y, std::vector<double>{2, 2, 2}) == 2.0 / 3.0;
  ok = ok && std::fabs(rmse(y, std::vector<double>{2, 2, 2}) -
                       std::sqrt(2.0 / 3.0)) < 1e-15;
  ok = ok && r2(y, y) == 1.0;
  ok = ok && std::fabs(r2(y, std::vector<double>{2, 2, 2})) < 1e-15;

  Rng rng(303);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(60));
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.next_uniform(-30, 30);
      b[i] = rng.next_uniform(-30, 30);
    }
    const double m = mse(a, b);
    const double r = rmse(a, b);
    if (std::fabs(r * r - m) > 1e-12 * std::max(1.0, m)) {
      ok = false;
      why = "rmse^2 != mse";
    }
    const double scale = rng.next_uniform(0.5, 4.0);
    const double shift = rng.next_uniform(-20, 20);
    std::vector<double> as(n);
    std::vector<double> bs(n);
    bool constant = true;
    for (std::size_t i = 0; i < n; ++i) {
      as[i] = scale * a[i] + shift;
      bs[i] = scale * b[i] + shift;
      constant = constant && a[i] == a[0];
    }
    if (!constant && std::fabs(r2(as, bs) - r2(a, b)) > 1e-9) {
      ok = false;
      why = "r2 not affine invariant";
    }
  }
  report(3, "metric identities", ok, why);
}

void criterion_4_boosting_descent() {
  GeneratorConfig config;
  config.n_samples = 2000;
  config.seed = 4;
  const FeatureMatrix fm =
      derive_features(generate_trace(config), TargetKind::throughput);
  const FeatureMatrix scaled = apply_scaler(fm, fit_scaler(fm));

  HyperParams h = HyperParams::defaults_for(ModelKind::xgb_style, 0);
  h.n_trees = 200;
  const EnsembleCore core = fit_xgb_style(scaled.rows, scaled.target, h);

  std::vector<double> yhat(scaled.n(), core.base_score);
  double prev = mse(scaled.target, yhat);
  bool monotone = true;
  for (const auto& tree : core.trees) {
    for (std::size_t i = 0; i < scaled.n(); ++i) {
      yhat[i] += core.learning_rate * predict_tree(*tree, scaled.rows.row(i));
    }
    const double current = mse(scaled.target, yhat);
    if (current > prev + 1e-12) monotone = false;
    prev = current;
  }

  double worst_grad = 0.0;
  const double eps = 1e-4;
  Rng rng(44);
  for (int i = 0; i < 500; ++i) {
    const double target = rng.next_uniform(-10, 10);
    const double pred = rng.next_uniform(-10, 10);
    const double numeric =
        (squared_loss(target, pred + eps) - squared_loss(target, pred - eps)) /
        (2 * eps);
    worst_grad = std::max(
        worst_grad, std::fabs(numeric - squared_loss_gradient(target, pred)));
  }

  std::ostringstream detail;
  detail << "200 rounds monotone=" << (monotone ? "yes" : "no")
         << ", max gradient deviation " << worst_grad;
  report(4, "boosting descent + gradient check", monotone && worst_grad < 1e-6,
         detail.str());
}

struct PipelineRun {
  Comparison thr;
  Comparison bler;
};

void criteria_5_6_7(const Dataset& trace, PipelineRun& out) {
  const auto start = Clock::now();
  const SplitData thr_split = default_split(trace, TargetKind::throughput);
  const SplitData bler_split = default_split(trace, TargetKind::bler);
  const HyperSet hypers = HyperSet::defaults(42);
  out.thr = compare_models(thr_split.train, thr_split.test, hypers, 2);
  out.bler = compare_models(bler_split.train, bler_split.test, hypers, 2);
  const double elapsed = seconds_since(start);

  // criterion 5: R^2 pattern of the reported comparison
  const double r2_linear = out.thr.rows[0].r2;
  const double r2_tree = out.thr.rows[1].r2;
  const double r2_forest = out.thr.rows[2].r2;
  const double r2_lgbm = out.thr.rows[4].r2;
  const double tol = 0.005;
  const bool ordering = r2_lgbm >= r2_forest - tol &&
                        r2_forest >= r2_tree - tol && r2_tree >= r2_linear - tol;
  const bool levels = r2_lgbm >= 0.95 && r2_linear >= 0.80;
  {
    std::ostringstream detail;
    detail << "r2 linear/tree/forest/xgb/lgbm = " << r2_linear << "/" << r2_tree
           << "/" << r2_forest << "/" << out.thr.rows[3].r2 << "/" << r2_lgbm
           << ", " << elapsed << " s";
    report(5, "comparison pattern", ordering && levels && elapsed < 60.0,
           detail.str());
  }

  // criterion 6: importance argmax per target (lgbm reports)
  const auto argmax = [](const std::vector<double>& v) {
    return static_cast<std::size_t>(
        std::max_element(v.begin(), v.end()) - v.begin());
  };
  const std::size_t thr_top = argmax(out.thr.reports[4].importance);
  const std::size_t bler_top = argmax(out.bler.reports[4].importance);
  {
    std::ostringstream detail;
    detail << "throughput argmax=" << thr_split.train.feature_names[thr_top]
           << ", bler argmax=" << bler_split.train.feature_names[bler_top];
    report(6, "feature-importance reproduction",
           thr_split.train.feature_names[thr_top] == "mcs" &&
               bler_split.train.feature_names[bler_top] == "tti",
           detail.str());
  }

  // criterion 7: error bands of the lgbm models
  const double thr_band = out.thr.reports[4].error_histogram.within_band_fraction;
  const double bler_band =
      out.bler.reports[4].error_histogram.within_band_fraction;
  {
    std::ostringstream detail;
    detail << "within ±2.5 Mbps: " << thr_band << ", within ±0.05: "
           << bler_band;
    report(7, "error-band reproduction", thr_band >= 0.9 && bler_band >= 0.9,
           detail.str());
  }
}

void criterion_8_determinism(const fs::path& dir) {
  const auto run_pipeline = [&](const fs::path& base, int threads) {
    fs::create_directories(base);
    SynthCommand synth;
    synth.generator = GeneratorConfig{};  // n=10000, seed=42
    synth.out_path = (base / "trace.csv").string();
    cmd_synth(synth);

    TrainCommand train;
    train.in_path = synth.out_path;
    train.model_out_path = (base / "model.json").string();
    train.kind = ModelKind::lgbm_style;
    train.target = TargetKind::throughput;
    train.hyper = HyperParams::defaults_for(ModelKind::lgbm_style, 42);
    train.split.seed = 42;
    train.n_threads = threads;
    std::ostringstream sink;
    cmd_train(train, sink);

    EvalCommand eval;
    eval.in_path = synth.out_path;
    eval.out_dir = (base / "report").string();
    eval.target = TargetKind::throughput;
    eval.hypers = HyperSet::defaults(42);
    eval.split.seed = 42;
    eval.n_threads = threads;
    cmd_eval(eval, sink);
  };

  run_pipeline(dir / "run1", 1);
  run_pipeline(dir / "run2", 2);

  const char* files[] = {"trace.csv",          "trace.csv.meta.json",
                         "model.json",         "report/report.json",
                         "report/importance.csv",
                         "report/scatter_throughput.csv",
                         "report/error_hist_throughput.csv"};
  std::string differing;
  for (const char* file : files) {
    if (slurp(dir / "run1" / file) != slurp(dir / "run2" / file) ||
        slurp(dir / "run1" / file).empty()) {
      differing += std::string(file) + " ";
    }
  }
  report(8, "artifact determinism across runs and thread counts",
         differing.empty(),
         differing.empty() ? "7 artifacts byte-identical" : differing);
}

void criterion_9_streaming(const fs::path& dir, const Dataset& trace) {
  // Train the 200-round lgbm model on the default throughput pipeline.
  const SplitData split = default_split(trace, TargetKind::throughput);
  const Model model =
      train_model(ModelKind::lgbm_style, split.train,
                  HyperParams::defaults_for(ModelKind::lgbm_style, 42));

  std::ostringstream csv;
  write_csv(trace, csv);
  std::istringstream in(csv.str());
  std::ostringstream out;
  std::ostringstream log;
  const StreamStats stats = run_prediction_stream(model, in, out, log);

  std::size_t lines = 0;
  for (const char c : out.str()) {
    if (c == '\n') ++lines;
  }
  if (stats.n_predictions != lines) lines = 0;  // lines must match the count

  // Per-sample predict latency, measured over the full trace.
  const FeatureMatrix fm = derive_features(trace, TargetKind::throughput);
  const auto start = Clock::now();
  double checksum = 0.0;
  for (std::size_t i = 0; i < fm.n(); ++i) {
    checksum += predict_row(model, fm.rows.row(i), fm.p());
  }
  const double per_sample_ms =
      seconds_since(start) * 1000.0 / static_cast<double>(fm.n());

  // The real binary must agree on the line count.
  const fs::path trace_path = dir / "stream_trace.csv";
  write_csv_file(trace, trace_path.string());
  const fs::path model_path = dir / "stream_model.json";
  save_model(model, model_path.string());
  const fs::path out_path = dir / "stream_out.txt";
  const std::string command = std::string(NRKPI_CLI_PATH) +
                              " predict-stream --model " + model_path.string() +
                              " --in " + trace_path.string() + " > " +
                              out_path.string() + " 2>/dev/null";
  const int status = std::system(command.c_str());
  std::size_t cli_lines = 0;
  for (const char c : slurp(out_path)) {
    if (c == '\n') ++cli_lines;
  }

  std::ostringstream detail;
  detail << lines << " in-process lines, " << cli_lines << " CLI lines, "
         << per_sample_ms << " ms/sample (checksum " << checksum << ")";
  report(9, "streaming contract",
         lines == 10000 && cli_lines == 10000 && WEXITSTATUS(status) == 0 &&
             per_sample_ms < 1.0,
         detail.str());
}

void criterion_10_ingest(const Dataset& trace) {
  bool ok = true;
  std::string why = "round trip exact; fixtures parsed";

  std::ostringstream out;
  write_csv(trace, out);
  std::istringstream in(out.str());
  const CsvParseResult reparsed = parse_csv_trace(in);
  if (reparsed.dataset.samples.size() != trace.samples.size()) {
    ok = false;
    why = "round trip changed row count";
  } else {
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
      const auto& a = trace.samples[i];
      const auto& b = reparsed.dataset.samples[i];
      const bool same =
          a.timestamp_ms == b.timestamp_ms && a.ue_id == b.ue_id &&
          a.cqi == b.cqi && a.mcs == b.mcs && a.tti_count == b.tti_count &&
          a.ok_count == b.ok_count && a.nok_count == b.nok_count &&
          std::fabs(a.brate_mbps - b.brate_mbps) <= 1e-9 &&
          std::fabs(a.bler - b.bler) <= 1e-9 &&
          std::fabs(a.dl_thr_mbps - b.dl_thr_mbps) <= 1e-9;
      if (!same) {
        ok = false;
        why = "round trip field mismatch at row " + std::to_string(i);
        break;
      }
    }
  }

  {
    std::ifstream fixture(std::string(NRKPI_TEST_DATA_DIR) +
                          "/console_basic.txt");
    const auto samples = parse_srsran_console(fixture);
    if (samples.size() != 3 || samples[0].bler != 0.0 ||
        std::fabs(samples[1].bler - 0.1) > 1e-12 ||
        std::fabs(samples[2].brate_mbps - 0.95) > 1e-12) {
      ok = false;
      why = "console_basic fixture mismatch";
    }
  }
  {
    std::ifstream fixture(std::string(NRKPI_TEST_DATA_DIR) +
                          "/console_noisy.txt");
    const auto samples = parse_srsran_console(fixture);
    if (samples.size() != 4 || std::fabs(samples[1].bler - 0.1) > 1e-12 ||
        samples[3].bler != 0.0) {
      ok = false;
      why = "console_noisy fixture mismatch";
    }
  }
  report(10, "ingest robustness", ok, why);
}

}  // namespace

int main() {
  const fs::path dir = fs::current_path() / "acceptance_tmp";
  fs::remove_all(dir);
  fs::create_directories(dir);

  criterion_1_tree_oracle();
  criterion_2_linear_oracle();
  criterion_3_metric_identities();
  criterion_4_boosting_descent();

  const Dataset trace = generate_trace(GeneratorConfig{});  // n=10000 seed=42
  PipelineRun run;
  criteria_5_6_7(trace, run);
  criterion_8_determinism(dir);
  criterion_9_streaming(dir, trace);
  criterion_10_ingest(trace);

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
