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

#include "nrkpi/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nrkpi/errors.hpp"

namespace nrkpi {

namespace {

// Nearest grid point; exact midpoints round toward the later grid point.
std::int64_t snap_to_grid(std::int64_t t, std::int64_t interval) {
  const std::int64_t k = (t + interval / 2) / interval;
  return k * interval;
}

int round_half_up(double x) {
  return static_cast<int>(std::floor(x + 0.5));
}

}  // namespace

Dataset align_timestamps(std::span<const MetricSample> samples,
                         std::int64_t interval_ms) {
  if (interval_ms <= 0) throw ConfigError("interval_ms must be positive");

  struct Accumulator {
    std::size_t n = 0;
    double cqi = 0, mcs = 0, brate = 0, thr = 0, bler = 0;
    std::uint64_t tti = 0, ok = 0, nok = 0;
    std::uint32_t ue = 0;
  };

  std::map<std::pair<std::uint32_t, std::int64_t>, Accumulator> grid;
  for (const auto& s : samples) {
    const std::int64_t snapped = snap_to_grid(s.timestamp_ms, interval_ms);
    auto& acc = grid[{s.ue_id, snapped}];
    acc.ue = s.ue_id;
    acc.n += 1;
    acc.cqi += s.cqi;
    acc.mcs += s.mcs;
    acc.brate += s.brate_mbps;
    acc.thr += s.dl_thr_mbps;
    acc.bler += s.bler;
    acc.tti += s.tti_count;
    acc.ok += s.ok_count;
    acc.nok += s.nok_count;
  }

  Dataset out;
  out.source = SourceKind::csv;
  out.samples.reserve(grid.size());
  for (const auto& [key, acc] : grid) {
    MetricSample s;
    s.ue_id = acc.ue;
    s.timestamp_ms = key.second;
    const double inv = 1.0 / static_cast<double>(acc.n);
    s.cqi = std::clamp(round_half_up(acc.cqi * inv), 0, kCqiMax);
    s.mcs = std::clamp(round_half_up(acc.mcs * inv), 0, kMcsMax);
    s.brate_mbps = acc.brate * inv;
    s.dl_thr_mbps = acc.thr * inv;
    s.tti_count = acc.tti;
    s.ok_count = acc.ok;
    s.nok_count = acc.nok;
    const std::uint64_t total = acc.ok + acc.nok;
    s.bler = total > 0
                 ? static_cast<double>(acc.nok) / static_cast<double>(total)
                 : acc.bler * inv;
    out.samples.push_back(s);
  }

  // map keys iterate as (ue, timestamp); emit in (timestamp, ue) order to
  // match the canonical trace ordering.
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const MetricSample& a, const MetricSample& b) {
                     if (a.timestamp_ms != b.timestamp_ms)
                       return a.timestamp_ms < b.timestamp_ms;
                     return a.ue_id < b.ue_id;
                   });
  return out;
}

std::vector<std::string> feature_names_for(TargetKind kind) {
  if (kind == TargetKind::throughput) return {"cqi", "mcs", "tti", "bler"};
  return {"cqi", "mcs", "tti", "brate"};
}

void sample_to_feature_row(const MetricSample& sample, TargetKind kind,
                           double out[kNumFeatures]) {
  out[0] = static_cast<double>(sample.cqi);
  out[1] = static_cast<double>(sample.mcs);
  out[2] = static_cast<double>(sample.tti_count);
  out[3] = kind == TargetKind::throughput ? sample.bler : sample.brate_mbps;
}

double sample_target(const MetricSample& sample, TargetKind kind) {
  return kind == TargetKind::throughput ? sample.dl_thr_mbps : sample.bler;
}

FeatureMatrix derive_features(const Dataset& dataset, TargetKind kind) {
  if (dataset.samples.empty()) throw EmptyTrace("cannot derive features from an empty dataset");

  FeatureMatrix fm;
  fm.target_kind = kind;
  fm.feature_names = feature_names_for(kind);
  const std::size_t n = dataset.samples.size();
  fm.rows = Matrix(n, fm.feature_names.size());
  fm.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = dataset.samples[i];
    sample_to_feature_row(s, kind, fm.rows.row(i));
    fm.target[i] = sample_target(s, kind);
  }
  return fm;
}

}  // namespace nrkpi
