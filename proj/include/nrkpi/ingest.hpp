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
#include <span>
#include <string>
#include <vector>

#include "nrkpi/types.hpp"

namespace nrkpi {

/// Snaps samples to the nearest grid point k * interval_ms (midpoints round
/// up). Samples of one UE landing on the same grid point are merged: counts
/// summed, value fields averaged, bler recomputed from summed counts.
Dataset align_timestamps(std::span<const MetricSample> samples,
                         std::int64_t interval_ms);

/// Feature column order mandated per target:
///   throughput -> [cqi, mcs, tti, bler],  bler -> [cqi, mcs, tti, brate].
std::vector<std::string> feature_names_for(TargetKind kind);

/// Projects samples onto the per-target feature matrix, preserving row
/// order. Throws EmptyTrace on an empty dataset.
FeatureMatrix derive_features(const Dataset& dataset, TargetKind kind);

inline constexpr std::size_t kNumFeatures = 4;

/// Single-sample projection used by the streaming path.
void sample_to_feature_row(const MetricSample& sample, TargetKind kind,
                           double out[kNumFeatures]);
double sample_target(const MetricSample& sample, TargetKind kind);

}  // namespace nrkpi
