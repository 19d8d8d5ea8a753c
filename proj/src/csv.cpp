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

#include "nrkpi/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "nrkpi/errors.hpp"
#include "nrkpi/numfmt.hpp"

namespace nrkpi {

namespace {

constexpr const char* kColumns[] = {
    "timestamp_ms", "ue_id",    "cqi",       "mcs",  "tti_count",
    "brate_mbps",   "ok_count", "nok_count", "bler", "dl_thr_mbps"};
constexpr std::size_t kNumColumns = 10;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string canonical_csv_header() {
  std::string header;
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    if (i) header += ',';
    header += kColumns[i];
  }
  return header;
}

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::csv: return "csv";
    case SourceKind::srsran_console: return "srsran_console";
    case SourceKind::synthetic: return "synthetic";
    case SourceKind::stream: return "stream";
  }
  return "csv";
}

std::string to_string(TargetKind kind) {
  return kind == TargetKind::throughput ? "throughput" : "bler";
}

TargetKind target_kind_from_string(const std::string& name) {
  if (name == "throughput") return TargetKind::throughput;
  if (name == "bler") return TargetKind::bler;
  throw ConfigError("unknown target kind '" + name + "'");
}

void validate_csv_header(std::string_view line) {
  const auto fields = split_fields(line);
  if (fields.size() != kNumColumns) {
    throw MalformedHeader("expected " + std::to_string(kNumColumns) +
                          " columns, got " + std::to_string(fields.size()));
  }
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    if (trim(fields[i]) != kColumns[i]) {
      throw MalformedHeader("column " + std::to_string(i + 1) + " must be '" +
                            kColumns[i] + "', got '" +
                            std::string(trim(fields[i])) + "'");
    }
  }
}

bool parse_csv_row(std::string_view line, MetricSample& out,
                   std::string* error) {
  const auto fail = [&](const std::string& why) {
    if (error) *error = why;
    return false;
  };

  const auto fields = split_fields(trim(line));
  if (fields.size() != kNumColumns) {
    return fail("RowParseError: wrong field count " +
                std::to_string(fields.size()));
  }

  MetricSample s;
  std::int64_t cqi64 = 0;
  std::int64_t mcs64 = 0;
  std::uint64_t ue64 = 0;
  bool ok = parse_int64(trim(fields[0]), s.timestamp_ms);
  ok = ok && parse_uint64(trim(fields[1]), ue64);
  ok = ok && parse_int64(trim(fields[2]), cqi64);
  ok = ok && parse_int64(trim(fields[3]), mcs64);
  ok = ok && parse_uint64(trim(fields[4]), s.tti_count);
  ok = ok && parse_double(trim(fields[5]), s.brate_mbps);
  ok = ok && parse_uint64(trim(fields[6]), s.ok_count);
  ok = ok && parse_uint64(trim(fields[7]), s.nok_count);
  ok = ok && parse_double(trim(fields[8]), s.bler);
  ok = ok && parse_double(trim(fields[9]), s.dl_thr_mbps);
  if (!ok || ue64 > 0xffffffffULL) return fail("RowParseError: non-numeric field");
  s.ue_id = static_cast<std::uint32_t>(ue64);
  s.cqi = static_cast<int>(cqi64);
  s.mcs = static_cast<int>(mcs64);
  if (!sample_in_range(s)) return fail("RowParseError: range invariant violated");
  out = s;
  return true;
}

CsvParseResult parse_csv_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader("empty input, no header row");
  validate_csv_header(line);

  CsvParseResult result;
  result.dataset.source = SourceKind::csv;
  std::size_t row_index = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row_index;
    if (trim(std::string_view(line)).empty()) continue;
    MetricSample s;
    std::string why;
    if (!parse_csv_row(line, s, &why)) {
      result.rejected.push_back({row_index, why});
      continue;
    }
    result.dataset.samples.push_back(s);
  }

  // Per-UE order is enforced by a global stable sort on (timestamp, ue).
  std::stable_sort(result.dataset.samples.begin(), result.dataset.samples.end(),
                   [](const MetricSample& a, const MetricSample& b) {
                     if (a.timestamp_ms != b.timestamp_ms)
                       return a.timestamp_ms < b.timestamp_ms;
                     return a.ue_id < b.ue_id;
                   });

  // Strict per-UE monotonicity: a duplicate (ue, timestamp) pair cannot be
  // represented, so the later row is rejected.
  std::vector<MetricSample> deduped;
  deduped.reserve(result.dataset.samples.size());
  for (const auto& s : result.dataset.samples) {
    const bool duplicate =
        !deduped.empty() && deduped.back().ue_id == s.ue_id &&
        deduped.back().timestamp_ms == s.timestamp_ms;
    if (duplicate) {
      result.rejected.push_back(
          {0, "RowParseError: duplicate timestamp for ue " +
                  std::to_string(s.ue_id) + " at " +
                  std::to_string(s.timestamp_ms)});
      continue;
    }
    deduped.push_back(s);
  }
  result.dataset.samples = std::move(deduped);

  if (result.dataset.samples.empty()) throw EmptyTrace("no valid data rows");
  return result;
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << canonical_csv_header() << '\n';
  for (const auto& s : dataset.samples) {
    out << s.timestamp_ms << ',' << s.ue_id << ',' << s.cqi << ',' << s.mcs
        << ',' << s.tti_count << ',' << format_double(s.brate_mbps) << ','
        << s.ok_count << ',' << s.nok_count << ',' << format_double(s.bler)
        << ',' << format_double(s.dl_thr_mbps) << '\n';
  }
}

void write_csv_file(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(dataset, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

CsvParseResult parse_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv_trace(in);
}

}  // namespace nrkpi
