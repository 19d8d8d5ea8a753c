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
#include <iosfwd>
#include <string>

#include "nrkpi/rng.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

/// Link-adaptation channel model configuration. The defaults are calibrated
/// to a 20 MHz / 1-40 Mbps downlink regime where MCS and TTI dominate
/// throughput variance and scheduled load dominates BLER variance.
///
/// All constants are synthetic model choices, not measurements.
struct GeneratorConfig {
  std::uint64_t n_samples = 10000;
  std::uint64_t seed = 42;

  // AR(1) SNR process: snr' = mean + coeff * (snr - mean) + N(0, std^2).
  double snr_mean_db = 16.0;
  double snr_ar_coeff = 0.97;
  double snr_noise_std_db = 0.8;
  /// Adds a sinusoidal SNR swing (period 200 samples, amplitude 6 dB).
  bool mobility = false;
  /// Measurement error on the CQI the UE reports (and the trace records).
  /// Link adaptation runs on the scheduler's channel estimate, so the
  /// recorded CQI is a degraded view of what the MCS decision encodes.
  double cqi_report_noise_db = 2.0;

  double bandwidth_mhz = 20.0;
  double max_thr_mbps = 40.0;
  /// Outer-loop link adaptation steers the long-run BLER here.
  double bler_target = 0.1;
  /// Std-dev of additive Gaussian noise on the throughput label, in Mbps.
  double label_noise_std = 0.8;

  // Scheduler load model: one load factor per session of consecutive
  // samples, TTI budget per reporting interval drawn binomially from it.
  std::uint64_t session_length = 500;
  double load_min = 0.4;
  double load_max = 1.0;
  std::uint64_t tti_budget = 1000;
  /// Interference penalty of scheduled load on the error rate, in dB at
  /// full load. This is what makes TTI the dominant BLER predictor.
  double load_bler_gain_db = 8.0;
  /// Sensitivity of the aggregated error rate to the link-margin mismatch.
  /// Below 1 because HARQ and frequency diversity flatten the per-interval
  /// BLER curve relative to a per-TB waterfall.
  double margin_sensitivity = 0.3;
  /// Relative spectral efficiency at MCS 0 (MCS 28 is 1).
  double eff_floor = 0.04;

  std::int64_t interval_ms = 1000;
  double olla_init = -7.0;

  /// Throws ConfigError on invariant violations (e.g. snr_ar_coeff >= 1).
  void validate() const;
};

inline constexpr double kMobilityPeriodSamples = 200.0;
inline constexpr double kMobilityAmplitudeDb = 6.0;
inline constexpr double kOllaAckStep = 0.01;

/// One AR(1) step of the latent SNR state (mobility swing excluded; the
/// generator adds it on top of the returned state).
double snr_step(double prev_snr_db, const GeneratorConfig& config, Rng& rng);

/// Sinusoidal swing added to the AR(1) state when mobility is enabled.
double mobility_offset_db(const GeneratorConfig& config, std::uint64_t index);

/// Piecewise-linear CQI quantizer spanning -6 dB -> 0 and 24 dB -> 15.
int cqi_from_snr(double snr_db);

/// Inner link adaptation: mcs = clamp(floor(cqi * 28/15 + olla_offset)).
int mcs_from_cqi(int cqi, double olla_offset);

/// SNR required by an MCS for nominal operation: mcs * 24/28 - 4 dB.
double mcs_threshold_db(int mcs);

/// Relative spectral efficiency eff_floor^(1 - mcs/28); MCS 28 is 1.
double spectral_efficiency(int mcs, double eff_floor = 0.04);

/// Generates a labeled trace. Deterministic in the config; every emitted
/// sample satisfies the MetricSample invariants and, with zero label noise,
/// dl_thr_mbps is an exact function of (mcs, tti_count, bler).
Dataset generate_trace(const GeneratorConfig& config);

/// JSON sidecar recording the full config plus the RNG identifier.
std::string metadata_json(const GeneratorConfig& config);
void write_metadata_file(const GeneratorConfig& config, const std::string& path);
GeneratorConfig config_from_json_text(const std::string& text);

}  // namespace nrkpi
