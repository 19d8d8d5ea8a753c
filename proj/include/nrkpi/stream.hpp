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

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <iosfwd>
#include <mutex>
#include <optional>

#include "nrkpi/model.hpp"
#include "nrkpi/types.hpp"

namespace nrkpi {

/// Blocking bounded handoff queue. push() blocks when full (backpressure on
/// the parser stage), pop() returns nullopt once closed and drained.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(T value) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return items_.size() < capacity_; });
    items_.push_back(std::move(value));
    not_empty_.notify_one();
  }

  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return value;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_empty_.notify_all();
  }

 private:
  std::size_t capacity_;
  std::deque<T> items_;
  bool closed_ = false;
  std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
};

enum class StreamFormat { csv, console };

struct StreamOptions {
  StreamFormat format = StreamFormat::csv;
  /// Rolling R^2 window length; a summary line goes to the log stream
  /// every `window` samples.
  std::size_t window = 100;
  std::size_t queue_capacity = 1024;
};

struct StreamStats {
  std::size_t n_predictions = 0;
  std::size_t n_skipped = 0;
};

/// Two-stage pipeline: a parser thread feeds samples through a bounded
/// queue; the calling thread predicts and emits one line per sample,
/// `timestamp_ms,actual,predicted,abs_error`, flushed immediately.
StreamStats run_prediction_stream(const Model& model, std::istream& in,
                                  std::ostream& out, std::ostream& log,
                                  const StreamOptions& options = {});

}  // namespace nrkpi
