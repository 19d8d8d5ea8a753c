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

#include <iosfwd>
#include <string>
#include <vector>

#include "nrkpi/types.hpp"

namespace nrkpi {

/// Canonical trace schema. The header row must match this exactly.
std::string canonical_csv_header();

/// A rejected data row: 1-based row index (header = row 1) plus a reason
/// string prefixed with the stable error name, e.g. "RowParseError: ...".
struct RowIssue {
  std::size_t row = 0;
  std::string reason;
};

struct CsvParseResult {
  Dataset dataset;
  std::vector<RowIssue> rejected;
};

/// Parses a canonical CSV trace. Rows that fail numeric parsing or violate
/// sample invariants are collected in `rejected`; valid rows are kept and
/// sorted by (timestamp, ue). Throws MalformedHeader if the header row is
/// wrong and EmptyTrace if no valid data rows remain.
CsvParseResult parse_csv_trace(std::istream& in);

/// Throws MalformedHeader unless the line is the canonical header.
void validate_csv_header(std::string_view line);

/// Parses one data row. On failure returns false and stores the reason
/// (stable error-name prefix) in `error` when given.
bool parse_csv_row(std::string_view line, MetricSample& out,
                   std::string* error = nullptr);

/// Writes the canonical schema with shortest round-trip number formatting,
/// so parse(write(x)) reproduces x exactly.
void write_csv(const Dataset& dataset, std::ostream& out);

void write_csv_file(const Dataset& dataset, const std::string& path);
CsvParseResult parse_csv_file(const std::string& path);

}  // namespace nrkpi
