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

#include "nrkpi/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nrkpi/errors.hpp"

namespace nrkpi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void GeneratorConfig::validate() const {
  if (n_samples == 0) throw ConfigError("n_samples must be positive");
  if (!(snr_ar_coeff >= 0.0 && snr_ar_coeff < 1.0))
    throw ConfigError("snr_ar_coeff must lie in [0, 1)");
  if (snr_noise_std_db < 0.0)
    throw ConfigError("snr_noise_std_db must be non-negative");
  if (bandwidth_mhz <= 0.0) throw ConfigError("bandwidth_mhz must be positive");
  if (max_thr_mbps <= 0.0) throw ConfigError("max_thr_mbps must be positive");
  if (!(bler_target > 0.0 && bler_target < 1.0))
    throw ConfigError("bler_target must lie in (0, 1)");
  if (label_noise_std < 0.0)
    throw ConfigError("label_noise_std must be non-negative");
  if (session_length == 0) throw ConfigError("session_length must be positive");
  if (!(load_min >= 0.0 && load_min <= load_max && load_max <= 1.0))
    throw ConfigError("load range must satisfy 0 <= load_min <= load_max <= 1");
  if (tti_budget == 0) throw ConfigError("tti_budget must be positive");
  if (load_bler_gain_db < 0.0)
    throw ConfigError("load_bler_gain_db must be non-negative");
  if (cqi_report_noise_db < 0.0)
    throw ConfigError("cqi_report_noise_db must be non-negative");
  if (margin_sensitivity < 0.0)
    throw ConfigError("margin_sensitivity must be non-negative");
  if (!(eff_floor > 0.0 && eff_floor <= 1.0))
    throw ConfigError("eff_floor must lie in (0, 1]");
  if (interval_ms <= 0) throw ConfigError("interval_ms must be positive");
}

double snr_step(double prev_snr_db, const GeneratorConfig& config, Rng& rng) {
  const double noise = config.snr_noise_std_db * rng.next_normal();
  return config.snr_mean_db +
         config.snr_ar_coeff * (prev_snr_db - config.snr_mean_db) + noise;
}

double mobility_offset_db(const GeneratorConfig& config, std::uint64_t index) {
  if (!config.mobility) return 0.0;
  return kMobilityAmplitudeDb *
         std::sin(2.0 * kPi * static_cast<double>(index) /
                  kMobilityPeriodSamples);
}

int cqi_from_snr(double snr_db) {
  const int q = static_cast<int>(std::floor((snr_db + 6.0) / 2.0 + 0.5));
  return std::clamp(q, 0, kCqiMax);
}

int mcs_from_cqi(int cqi, double olla_offset) {
  const int m = static_cast<int>(
      std::floor(static_cast<double>(cqi) * 28.0 / 15.0 + olla_offset));
  return std::clamp(m, 0, kMcsMax);
}

double mcs_threshold_db(int mcs) {
  return static_cast<double>(mcs) * 24.0 / 28.0 - 4.0;
}

double spectral_efficiency(int mcs, double eff_floor) {
  return std::pow(eff_floor, 1.0 - static_cast<double>(mcs) / 28.0);
}

Dataset generate_trace(const GeneratorConfig& config) {
  config.validate();

  Rng rng(config.seed);
  Dataset out;
  out.source = SourceKind::synthetic;
  out.samples.reserve(config.n_samples);

  const double peak_mbps = config.max_thr_mbps * config.bandwidth_mhz / 20.0;
  const double nack_step =
      kOllaAckStep * (1.0 - config.bler_target) / config.bler_target;

  double snr_state = config.snr_mean_db;
  double olla_offset = config.olla_init;
  double load = 0.0;

  for (std::uint64_t i = 0; i < config.n_samples; ++i) {
    if (i % config.session_length == 0) {
      load = rng.next_uniform(config.load_min, config.load_max);
    }

    snr_state = snr_step(snr_state, config, rng);
    const double snr = snr_state + mobility_offset_db(config, i);

    // Link adaptation runs on the scheduler's channel estimate; the sample
    // records the UE's noisy wideband report.
    const int sched_cqi = cqi_from_snr(snr);
    const int cqi =
        cqi_from_snr(snr + config.cqi_report_noise_db * rng.next_normal());
    const int mcs = mcs_from_cqi(sched_cqi, olla_offset);

    const std::uint64_t tti = rng.next_binomial(config.tti_budget, load);
    const double load_frac =
        static_cast<double>(tti) / static_cast<double>(config.tti_budget);

    // Error probability: damped link margin at the scheduler's channel
    // estimate (the inverse of the CQI quantizer) plus a load-interference
    // penalty centered on the middle of the load range.
    const double snr_estimate = 2.0 * static_cast<double>(sched_cqi) - 6.0;
    const double margin = mcs_threshold_db(mcs) - snr_estimate;
    const double load_mid = 0.5 * (config.load_min + config.load_max);
    const double z = (config.margin_sensitivity * margin +
                      config.load_bler_gain_db * (load_frac - load_mid)) /
                         1.5 +
                     std::log(config.bler_target / (1.0 - config.bler_target));
    const double p_err = logistic(z);

    const std::uint64_t nok = rng.next_binomial(tti, p_err);
    const std::uint64_t ok = tti - nok;
    const double bler =
        tti > 0 ? static_cast<double>(nok) / static_cast<double>(tti) : 0.0;

    const double brate =
        peak_mbps * load_frac * spectral_efficiency(mcs, config.eff_floor);
    double thr = brate * (1.0 - bler);
    if (config.label_noise_std > 0.0) {
      thr += config.label_noise_std * rng.next_normal();
    }
    thr = std::clamp(thr, 0.0, peak_mbps);

    // One outer-loop update per reporting interval, driven by a single
    // sampled transmission outcome at the current operating point.
    if (rng.next_unit() < p_err) {
      olla_offset -= nack_step;
    } else {
      olla_offset += kOllaAckStep;
    }
    olla_offset = std::clamp(olla_offset, -30.0, 30.0);

    MetricSample s;
    s.timestamp_ms = static_cast<std::int64_t>(i) * config.interval_ms;
    s.ue_id = 0;
    s.cqi = cqi;
    s.mcs = mcs;
    s.tti_count = tti;
    s.brate_mbps = brate;
    s.ok_count = ok;
    s.nok_count = nok;
    s.bler = bler;
    s.dl_thr_mbps = thr;
    out.samples.push_back(s);
  }
  return out;
}

namespace {

nlohmann::ordered_json config_to_json(const GeneratorConfig& c) {
  return nlohmann::ordered_json{{"n_samples", c.n_samples},
                                {"seed", c.seed},
                                {"snr_mean_db", c.snr_mean_db},
                                {"snr_ar_coeff", c.snr_ar_coeff},
                                {"snr_noise_std_db", c.snr_noise_std_db},
                                {"mobility", c.mobility},
                                {"cqi_report_noise_db", c.cqi_report_noise_db},
                                {"bandwidth_mhz", c.bandwidth_mhz},
                                {"max_thr_mbps", c.max_thr_mbps},
                                {"bler_target", c.bler_target},
                                {"label_noise_std", c.label_noise_std},
                                {"session_length", c.session_length},
                                {"load_min", c.load_min},
                                {"load_max", c.load_max},
                                {"tti_budget", c.tti_budget},
                                {"load_bler_gain_db", c.load_bler_gain_db},
                                {"margin_sensitivity", c.margin_sensitivity},
                                {"eff_floor", c.eff_floor},
                                {"interval_ms", c.interval_ms},
                                {"olla_init", c.olla_init}};
}

}  // namespace

std::string metadata_json(const GeneratorConfig& config) {
  nlohmann::ordered_json j{{"schema_version", kSchemaVersion},
                           {"rng_algorithm", kRngAlgorithm},
                           {"generator", config_to_json(config)}};
  return j.dump(2) + "\n";
}

void write_metadata_file(const GeneratorConfig& config,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << metadata_json(config);
  if (!out) throw IoError("write failed for '" + path + "'");
}

GeneratorConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid generator config JSON: ") + e.what());
  }
  const nlohmann::json& g = j.contains("generator") ? j.at("generator") : j;
  GeneratorConfig c;
  try {
    c.n_samples = g.value("n_samples", c.n_samples);
    c.seed = g.value("seed", c.seed);
    c.snr_mean_db = g.value("snr_mean_db", c.snr_mean_db);
    c.snr_ar_coeff = g.value("snr_ar_coeff", c.snr_ar_coeff);
    c.snr_noise_std_db = g.value("snr_noise_std_db", c.snr_noise_std_db);
    c.mobility = g.value("mobility", c.mobility);
    c.cqi_report_noise_db = g.value("cqi_report_noise_db", c.cqi_report_noise_db);
    c.bandwidth_mhz = g.value("bandwidth_mhz", c.bandwidth_mhz);
    c.max_thr_mbps = g.value("max_thr_mbps", c.max_thr_mbps);
    c.bler_target = g.value("bler_target", c.bler_target);
    c.label_noise_std = g.value("label_noise_std", c.label_noise_std);
    c.session_length = g.value("session_length", c.session_length);
    c.load_min = g.value("load_min", c.load_min);
    c.load_max = g.value("load_max", c.load_max);
    c.tti_budget = g.value("tti_budget", c.tti_budget);
    c.load_bler_gain_db = g.value("load_bler_gain_db", c.load_bler_gain_db);
    c.margin_sensitivity = g.value("margin_sensitivity", c.margin_sensitivity);
    c.eff_floor = g.value("eff_floor", c.eff_floor);
    c.interval_ms = g.value("interval_ms", c.interval_ms);
    c.olla_init = g.value("olla_init", c.olla_init);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid generator config field: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace nrkpi
