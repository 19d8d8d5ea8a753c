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

#include "nrkpi/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nrkpi/errors.hpp"

namespace nrkpi {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size())
    throw LengthMismatch("vectors have lengths " + std::to_string(y.size()) +
                         " and " + std::to_string(yhat.size()));
  if (y.empty()) throw LengthMismatch("metric on empty vectors");
}

}  // namespace

double mse(std::span<const double> y, std::span<const double> yhat) {
  check_lengths(y, yhat);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - yhat[i];
    acc += d * d;
  }
  return acc / static_cast<double>(y.size());
}

double rmse(std::span<const double> y, std::span<const double> yhat) {
  return std::sqrt(mse(y, yhat));
}

double r2(std::span<const double> y, std::span<const double> yhat) {
  check_lengths(y, yhat);
  if (y.size() < 2) throw DegenerateTarget("r2 needs at least 2 samples");

  double mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(y.size());

  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sse += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    sst += (y[i] - mean) * (y[i] - mean);
  }
  if (sst == 0.0) throw DegenerateTarget("target variance is zero");
  return 1.0 - sse / sst;
}

double default_error_band(TargetKind kind) {
  return kind == TargetKind::throughput ? 2.5 : 0.05;
}

ErrorHistogram error_distribution(std::span<const double> y,
                                  std::span<const double> yhat, int n_bins,
                                  double band) {
  check_lengths(y, yhat);
  if (n_bins < 1) throw ConfigError("n_bins must be >= 1");

  std::vector<double> errors(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) errors[i] = y[i] - yhat[i];

  ErrorHistogram hist;
  hist.band = band;
  const auto [lo_it, hi_it] = std::minmax_element(errors.begin(), errors.end());
  hist.min_error = *lo_it;
  hist.max_error = *hi_it;

  // Degenerate spread: one bin holds everything.
  const double width = hist.max_error - hist.min_error;
  const int bins = width > 0.0 ? n_bins : 1;
  hist.counts.assign(static_cast<std::size_t>(bins), 0);
  hist.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) {
    hist.edges[static_cast<std::size_t>(b)] =
        hist.min_error + width * static_cast<double>(b) / static_cast<double>(bins);
  }

  std::size_t within = 0;
  for (const double e : errors) {
    int b = width > 0.0
                ? static_cast<int>((e - hist.min_error) / width *
                                   static_cast<double>(bins))
                : 0;
    b = std::clamp(b, 0, bins - 1);
    hist.counts[static_cast<std::size_t>(b)] += 1;
    if (std::fabs(e) <= band) ++within;
  }
  hist.within_band_fraction =
      static_cast<double>(within) / static_cast<double>(errors.size());
  return hist;
}

}  // namespace nrkpi
