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

#include "nrkpi/stream.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "nrkpi/console.hpp"
#include "nrkpi/csv.hpp"
#include "nrkpi/errors.hpp"
#include "nrkpi/ingest.hpp"
#include "nrkpi/metrics.hpp"
#include "nrkpi/numfmt.hpp"

namespace nrkpi {

namespace {

struct StreamItem {
  MetricSample sample;
  bool skipped = false;  // unparseable row, reported but not predicted
  std::string note;
};

void parser_stage(std::istream& in, StreamFormat format,
                  BoundedQueue<StreamItem>& queue) {
  std::string line;
  if (format == StreamFormat::csv) {
    if (!std::getline(in, line)) return;
    validate_csv_header(line);
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      StreamItem item;
      std::string why;
      if (parse_csv_row(line, item.sample, &why)) {
        queue.push(std::move(item));
      } else {
        item.skipped = true;
        item.note = why;
        queue.push(std::move(item));
      }
    }
  } else {
    ConsoleParser parser;
    while (std::getline(in, line)) {
      if (auto sample = parser.feed_line(line)) {
        StreamItem item;
        item.sample = *sample;
        queue.push(std::move(item));
      }
    }
  }
}

class RollingR2 {
 public:
  explicit RollingR2(std::size_t window) : window_(window) {}

  void add(double actual, double predicted) {
    actual_.push_back(actual);
    predicted_.push_back(predicted);
    if (actual_.size() > window_) {
      actual_.pop_front();
      predicted_.pop_front();
    }
  }

  double value() const {
    if (actual_.size() < 2) return std::nan("");
    const std::vector<double> y(actual_.begin(), actual_.end());
    const std::vector<double> yhat(predicted_.begin(), predicted_.end());
    try {
      return r2(y, yhat);
    } catch (const DegenerateTarget&) {
      return std::nan("");
    }
  }

 private:
  std::size_t window_;
  std::deque<double> actual_;
  std::deque<double> predicted_;
};

}  // namespace

StreamStats run_prediction_stream(const Model& model, std::istream& in,
                                  std::ostream& out, std::ostream& log,
                                  const StreamOptions& options) {
  if (model.p() != kNumFeatures) {
    throw SchemaMismatch("model expects " + std::to_string(model.p()) +
                         " features, stream rows carry " +
                         std::to_string(kNumFeatures));
  }

  BoundedQueue<StreamItem> queue(options.queue_capacity);

  std::exception_ptr parser_error;
  std::thread parser([&] {
    try {
      parser_stage(in, options.format, queue);
    } catch (...) {
      parser_error = std::current_exception();
    }
    queue.close();
  });

  StreamStats stats;
  try {
    RollingR2 rolling(options.window);
    double row[kNumFeatures];
    while (auto item = queue.pop()) {
      if (item->skipped) {
        ++stats.n_skipped;
        log << "skip: " << item->note << '\n';
        continue;
      }
      const MetricSample& s = item->sample;
      sample_to_feature_row(s, model.target, row);
      const double actual = sample_target(s, model.target);
      const double predicted = predict_row(model, row, kNumFeatures);
      const double abs_error = std::fabs(actual - predicted);

      out << s.timestamp_ms << ',' << format_double(actual) << ','
          << format_double(predicted) << ',' << format_double(abs_error)
          << '\n';
      out.flush();

      rolling.add(actual, predicted);
      ++stats.n_predictions;
      if (options.window > 0 && stats.n_predictions % options.window == 0) {
        log << "rolling_r2 n=" << stats.n_predictions
            << " window=" << options.window
            << " r2=" << format_double(rolling.value()) << '\n';
      }
    }
  } catch (...) {
    // Unblock a parser stuck on a full queue, then let it finish.
    while (queue.pop()) {
    }
    parser.join();
    throw;
  }

  parser.join();
  if (parser_error) std::rethrow_exception(parser_error);
  return stats;
}

}  // namespace nrkpi
