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
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "nrkpi/types.hpp"

namespace nrkpi {

struct ConsoleOptions {
  /// Console tables carry no timestamps; each UE's k-th row is stamped at
  /// k * interval_ms.
  std::int64_t interval_ms = 1000;
};

/// Best-effort adapter for gNB console metrics tables.
///
/// The table layout varies across stack versions, so column positions are
/// learned from the most recent header line (any line containing a `cqi`
/// token). The DL block is the first occurrence of cqi/mcs/brate/ok/nok;
/// unknown columns are ignored. Separator / banner lines yield nothing.
/// `brate` accepts k/M/G magnitude suffixes (bits per second); an unknown
/// suffix raises SuffixError. Per row: bler = nok/(ok+nok) (0 when both are
/// zero), tti_count = ok+nok, and dl_thr_mbps = brate in Mbps, the only
/// rate the table exposes.
class ConsoleParser {
 public:
  explicit ConsoleParser(ConsoleOptions options = {}) : options_(options) {}

  /// Feeds one line; returns a sample for UE metrics lines, nullopt for
  /// headers, separators, and lines that do not fit the learned layout.
  std::optional<MetricSample> feed_line(std::string_view line);

 private:
  struct Layout {
    int cqi = -1, mcs = -1, brate = -1, ok = -1, nok = -1, rnti = -1;
    int max_index() const;
    bool complete() const {
      return cqi >= 0 && mcs >= 0 && brate >= 0 && ok >= 0 && nok >= 0;
    }
  };

  ConsoleOptions options_;
  Layout layout_;
  bool have_layout_ = false;
  std::map<std::uint64_t, std::uint32_t> ue_by_rnti_;
  std::map<std::uint32_t, std::uint64_t> rows_seen_;
};

/// Drains a whole stream through ConsoleParser.
std::vector<MetricSample> parse_srsran_console(std::istream& in,
                                               ConsoleOptions options = {});

/// Parses a rate token like "18M", "950k", "731" into Mbps.
/// Plain numbers are bits per second. Throws SuffixError.
double parse_brate_mbps(std::string_view token);

}  // namespace nrkpi
