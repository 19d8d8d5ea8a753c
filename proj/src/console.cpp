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

#include "nrkpi/console.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <string>

#include "nrkpi/errors.hpp"
#include "nrkpi/numfmt.hpp"

namespace nrkpi {

namespace {

std::string lowercase(std::string_view token) {
  std::string out(token);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Column separators '|' count as whitespace so header and data lines
// tokenize identically regardless of block walls.
std::vector<std::string_view> tokenize(std::string_view line,
                                       std::string& storage) {
  storage.assign(line);
  for (auto& c : storage) {
    if (c == '|') c = ' ';
  }
  std::vector<std::string_view> tokens;
  const std::string_view s(storage);
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool parse_count(std::string_view token, std::uint64_t& out) {
  return parse_uint64(token, out);
}

bool parse_small_int(std::string_view token, int& out) {
  std::int64_t v = 0;
  if (!parse_int64(token, v)) return false;
  out = static_cast<int>(v);
  return true;
}

}  // namespace

double parse_brate_mbps(std::string_view token) {
  if (token.empty()) throw SuffixError("empty rate token");
  double scale = 1.0;
  const char last = token.back();
  std::string_view digits = token;
  if (!std::isdigit(static_cast<unsigned char>(last)) && last != '.') {
    switch (last) {
      case 'k': case 'K': scale = 1e3; break;
      case 'M': scale = 1e6; break;
      case 'G': scale = 1e9; break;
      default:
        throw SuffixError("unknown magnitude suffix '" + std::string(1, last) +
                          "' in rate token '" + std::string(token) + "'");
    }
    digits.remove_suffix(1);
  }
  double value = 0.0;
  if (!parse_double(digits, value) || value < 0.0) {
    throw SuffixError("malformed rate token '" + std::string(token) + "'");
  }
  return value * scale / 1e6;
}

int ConsoleParser::Layout::max_index() const {
  return std::max({cqi, mcs, brate, ok, nok, rnti});
}

std::optional<MetricSample> ConsoleParser::feed_line(std::string_view line) {
  std::string storage;
  const auto tokens = tokenize(line, storage);
  if (tokens.empty()) return std::nullopt;

  // Header line: learn DL column positions (first occurrence of each name;
  // the DL block precedes UL in the table).
  bool is_header = false;
  for (const auto& tok : tokens) {
    if (lowercase(tok) == "cqi") {
      is_header = true;
      break;
    }
  }
  if (is_header) {
    Layout layout;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string name = lowercase(tokens[i]);
      const int idx = static_cast<int>(i);
      if (name == "cqi" && layout.cqi < 0) layout.cqi = idx;
      else if (name == "mcs" && layout.mcs < 0) layout.mcs = idx;
      else if (name == "brate" && layout.brate < 0) layout.brate = idx;
      else if (name == "ok" && layout.ok < 0) layout.ok = idx;
      else if (name == "nok" && layout.nok < 0) layout.nok = idx;
      else if (name == "rnti" && layout.rnti < 0) layout.rnti = idx;
    }
    if (layout.complete()) {
      layout_ = layout;
      have_layout_ = true;
    }
    return std::nullopt;
  }

  if (!have_layout_) return std::nullopt;
  if (static_cast<int>(tokens.size()) <= layout_.max_index()) return std::nullopt;

  MetricSample s;
  if (!parse_small_int(tokens[layout_.cqi], s.cqi)) return std::nullopt;
  if (!parse_small_int(tokens[layout_.mcs], s.mcs)) return std::nullopt;
  if (!parse_count(tokens[layout_.ok], s.ok_count)) return std::nullopt;
  if (!parse_count(tokens[layout_.nok], s.nok_count)) return std::nullopt;
  // Only brate may throw: a data row that reached here is a recognized
  // metrics line, and a bad magnitude suffix there is a real input defect.
  s.brate_mbps = parse_brate_mbps(tokens[layout_.brate]);

  const std::uint64_t total = s.ok_count + s.nok_count;
  s.bler = total > 0
               ? static_cast<double>(s.nok_count) / static_cast<double>(total)
               : 0.0;
  s.tti_count = total;
  s.dl_thr_mbps = s.brate_mbps;

  std::uint64_t rnti = 0;
  if (layout_.rnti >= 0 && parse_count(tokens[layout_.rnti], rnti)) {
    const auto it = ue_by_rnti_
                        .try_emplace(rnti, static_cast<std::uint32_t>(
                                               ue_by_rnti_.size()))
                        .first;
    s.ue_id = it->second;
  } else {
    s.ue_id = 0;
  }

  if (s.cqi < 0 || s.cqi > kCqiMax || s.mcs < 0 || s.mcs > kMcsMax)
    return std::nullopt;

  const std::uint64_t row = rows_seen_[s.ue_id]++;
  s.timestamp_ms = static_cast<std::int64_t>(row) * options_.interval_ms;
  return s;
}

std::vector<MetricSample> parse_srsran_console(std::istream& in,
                                               ConsoleOptions options) {
  ConsoleParser parser(options);
  std::vector<MetricSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (auto sample = parser.feed_line(line)) samples.push_back(*sample);
  }
  return samples;
}

}  // namespace nrkpi
