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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace nrkpi {

inline constexpr int kCqiMax = 15;
inline constexpr int kMcsMax = 28;

/// One reporting-interval snapshot of downlink link state for a single UE.
///
/// `brate_mbps` is the PHY-scheduled rate, `dl_thr_mbps` the delivered rate.
/// The console adapter cannot distinguish the two and sets them equal.
struct MetricSample {
  std::int64_t timestamp_ms = 0;
  std::uint32_t ue_id = 0;
  int cqi = 0;                    // 0..15
  int mcs = 0;                    // 0..28
  std::uint64_t tti_count = 0;    // DL-scheduled TTIs in the interval
  double brate_mbps = 0.0;
  std::uint64_t ok_count = 0;
  std::uint64_t nok_count = 0;
  double bler = 0.0;              // in [0,1]; nok/(ok+nok) when counts exist
  double dl_thr_mbps = 0.0;
};

/// Range and consistency invariants for a single sample.
inline bool sample_in_range(const MetricSample& s) {
  if (s.cqi < 0 || s.cqi > kCqiMax) return false;
  if (s.mcs < 0 || s.mcs > kMcsMax) return false;
  if (!(s.bler >= 0.0 && s.bler <= 1.0)) return false;
  if (!(s.brate_mbps >= 0.0) || !std::isfinite(s.brate_mbps)) return false;
  if (!(s.dl_thr_mbps >= 0.0) || !std::isfinite(s.dl_thr_mbps)) return false;
  const std::uint64_t total = s.ok_count + s.nok_count;
  if (total > 0) {
    const double from_counts =
        static_cast<double>(s.nok_count) / static_cast<double>(total);
    if (std::fabs(s.bler - from_counts) > 1e-6) return false;
  }
  return true;
}

enum class SourceKind { csv, srsran_console, synthetic, stream };

std::string to_string(SourceKind kind);

inline constexpr const char* kSchemaVersion = "1";

/// Ordered sample collection. Timestamps strictly increase per UE.
struct Dataset {
  std::vector<MetricSample> samples;
  SourceKind source = SourceKind::csv;
  std::string schema_version = kSchemaVersion;
};

enum class TargetKind { throughput, bler };

std::string to_string(TargetKind kind);
TargetKind target_kind_from_string(const std::string& name);

/// Dense row-major matrix; small enough here that anything fancier would
/// just get in the way.
struct Matrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : n_rows(rows), n_cols(cols), data(rows * cols, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * n_cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * n_cols + j]; }
  const double* row(std::size_t i) const { return data.data() + i * n_cols; }
  double* row(std::size_t i) { return data.data() + i * n_cols; }
};

/// Numeric projection of a Dataset for one prediction target.
struct FeatureMatrix {
  Matrix rows;
  std::vector<std::string> feature_names;
  std::vector<double> target;
  TargetKind target_kind = TargetKind::throughput;

  std::size_t n() const { return rows.n_rows; }
  std::size_t p() const { return rows.n_cols; }
};

}  // namespace nrkpi
