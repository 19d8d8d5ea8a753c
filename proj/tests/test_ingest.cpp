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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "nrkpi/console.hpp"
#include "nrkpi/csv.hpp"
#include "nrkpi/errors.hpp"
#include "nrkpi/ingest.hpp"
#include "nrkpi/rng.hpp"
#include "nrkpi/synthgen.hpp"

using namespace nrkpi;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(NRKPI_TEST_DATA_DIR) + "/" + name;
}

Dataset parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_csv_trace(in).dataset;
}

}  // namespace

TEST_CASE("csv: single row maps fields per schema") {
  const Dataset ds = parse_text(
      canonical_csv_header() +
      "\n1000,1,15,27,950,38.2,980,20,0.02,36.5\n");
  REQUIRE(ds.samples.size() == 1);
  const MetricSample& s = ds.samples[0];
  CHECK(s.timestamp_ms == 1000);
  CHECK(s.ue_id == 1);
  CHECK(s.cqi == 15);
  CHECK(s.mcs == 27);
  CHECK(s.tti_count == 950);
  CHECK(s.brate_mbps == doctest::Approx(38.2));
  CHECK(s.ok_count == 980);
  CHECK(s.nok_count == 20);
  CHECK(s.bler == doctest::Approx(0.02));
  CHECK(s.dl_thr_mbps == doctest::Approx(36.5));
}

TEST_CASE("csv: out-of-range rows are rejected, the rest kept") {
  std::istringstream in(canonical_csv_header() +
                        "\n1000,1,16,27,950,38.2,980,20,0.02,36.5\n"
                        "2000,1,15,27,950,38.2,980,20,0.02,36.5\n");
  const CsvParseResult result = parse_csv_trace(in);
  REQUIRE(result.dataset.samples.size() == 1);
  CHECK(result.dataset.samples[0].timestamp_ms == 2000);
  REQUIRE(result.rejected.size() == 1);
  CHECK(result.rejected[0].row == 2);
  CHECK(result.rejected[0].reason.find("RowParseError") == 0);
}

TEST_CASE("csv: shuffled timestamps come back sorted per UE") {
  const Dataset ds = parse_text(canonical_csv_header() +
                                "\n3000,1,10,20,100,5,90,10,0.1,4.5\n"
                                "1000,1,10,20,100,5,90,10,0.1,4.5\n"
                                "2000,1,10,20,100,5,90,10,0.1,4.5\n");
  REQUIRE(ds.samples.size() == 3);
  CHECK(ds.samples[0].timestamp_ms == 1000);
  CHECK(ds.samples[1].timestamp_ms == 2000);
  CHECK(ds.samples[2].timestamp_ms == 3000);
}

TEST_CASE("csv: header and row errors") {
  SUBCASE("missing column") {
    std::istringstream in("timestamp_ms,ue_id,cqi\n1,2,3\n");
    CHECK_THROWS_AS(parse_csv_trace(in), MalformedHeader);
  }
  SUBCASE("wrong column name") {
    std::string header = canonical_csv_header();
    header.replace(header.find("cqi"), 3, "CQI");
    std::istringstream in(header + "\n");
    CHECK_THROWS_AS(parse_csv_trace(in), MalformedHeader);
  }
  SUBCASE("zero valid rows") {
    std::istringstream in(canonical_csv_header() + "\n");
    CHECK_THROWS_AS(parse_csv_trace(in), EmptyTrace);
  }
  SUBCASE("non-numeric field recorded with row index") {
    std::istringstream in(canonical_csv_header() +
                          "\n1000,1,abc,27,950,38.2,980,20,0.02,36.5\n"
                          "2000,1,15,27,950,38.2,980,20,0.02,36.5\n");
    const CsvParseResult result = parse_csv_trace(in);
    REQUIRE(result.rejected.size() == 1);
    CHECK(result.rejected[0].row == 2);
  }
  SUBCASE("inconsistent bler vs counts is rejected") {
    std::istringstream in(canonical_csv_header() +
                          "\n1000,1,15,27,950,38.2,980,20,0.5,36.5\n"
                          "2000,1,15,27,950,38.2,980,20,0.02,36.5\n");
    const CsvParseResult result = parse_csv_trace(in);
    CHECK(result.dataset.samples.size() == 1);
    CHECK(result.rejected.size() == 1);
  }
  SUBCASE("non-finite reals are rejected") {
    std::istringstream in(canonical_csv_header() +
                          "\n1000,1,15,27,950,nan,980,20,0.02,36.5\n"
                          "2000,1,15,27,950,38.2,980,20,0.02,inf\n"
                          "3000,1,15,27,950,38.2,980,20,0.02,36.5\n");
    const CsvParseResult result = parse_csv_trace(in);
    CHECK(result.dataset.samples.size() == 1);
    CHECK(result.rejected.size() == 2);
  }
  SUBCASE("duplicate (ue, timestamp) keeps only the first row") {
    std::istringstream in(canonical_csv_header() +
                          "\n1000,1,15,27,950,38.2,980,20,0.02,36.5\n"
                          "1000,1,14,26,950,38.2,980,20,0.02,30.0\n");
    const CsvParseResult result = parse_csv_trace(in);
    CHECK(result.dataset.samples.size() == 1);
    CHECK(result.dataset.samples[0].cqi == 15);
    CHECK(result.rejected.size() == 1);
  }
}

TEST_CASE("csv: CRLF line endings parse identically") {
  std::istringstream in(canonical_csv_header() +
                        "\r\n1000,1,15,27,950,38.2,980,20,0.02,36.5\r\n");
  const CsvParseResult result = parse_csv_trace(in);
  REQUIRE(result.dataset.samples.size() == 1);
  CHECK(result.dataset.samples[0].dl_thr_mbps == 36.5);
  CHECK(result.rejected.empty());
}

TEST_CASE("csv: write/parse round trip is field-identical") {
  GeneratorConfig config;
  config.n_samples = 200;
  config.seed = 9001;
  const Dataset original = generate_trace(config);

  std::ostringstream out;
  write_csv(original, out);
  const Dataset reparsed = parse_text(out.str());

  REQUIRE(reparsed.samples.size() == original.samples.size());
  for (std::size_t i = 0; i < original.samples.size(); ++i) {
    const auto& a = original.samples[i];
    const auto& b = reparsed.samples[i];
    CHECK(a.timestamp_ms == b.timestamp_ms);
    CHECK(a.ue_id == b.ue_id);
    CHECK(a.cqi == b.cqi);
    CHECK(a.mcs == b.mcs);
    CHECK(a.tti_count == b.tti_count);
    CHECK(a.ok_count == b.ok_count);
    CHECK(a.nok_count == b.nok_count);
    // Shortest round-trip formatting reproduces the doubles exactly.
    CHECK(a.brate_mbps == b.brate_mbps);
    CHECK(a.bler == b.bler);
    CHECK(a.dl_thr_mbps == b.dl_thr_mbps);
  }
}

TEST_CASE("console: basic table parses with suffixes and BLER from counts") {
  std::ifstream in(fixture_path("console_basic.txt"));
  REQUIRE(in.good());
  const auto samples = parse_srsran_console(in);
  REQUIRE(samples.size() == 3);

  CHECK(samples[0].cqi == 15);
  CHECK(samples[0].mcs == 27);
  CHECK(samples[0].brate_mbps == doctest::Approx(18.0));
  CHECK(samples[0].bler == 0.0);
  CHECK(samples[0].dl_thr_mbps == doctest::Approx(18.0));
  CHECK(samples[0].tti_count == 100);
  CHECK(samples[0].ue_id == 0);

  CHECK(samples[1].bler == doctest::Approx(0.1));  // 10/(90+10)
  CHECK(samples[1].timestamp_ms == 1000);

  CHECK(samples[2].ue_id == 1);
  CHECK(samples[2].brate_mbps == doctest::Approx(0.95));  // 950k
  CHECK(samples[2].timestamp_ms == 0);
}

TEST_CASE("console: separators, banners, and pre-header data yield nothing") {
  ConsoleParser parser;
  CHECK_FALSE(parser.feed_line("----DL----|----UL----"));
  CHECK_FALSE(parser.feed_line(""));
  CHECK_FALSE(parser.feed_line("Stopping gNB..."));
  // Data before any header cannot be interpreted.
  CHECK_FALSE(parser.feed_line("  1 4601   15  1  27   18M  100   0   0%"));
}

TEST_CASE("console: noisy fixture keeps only UE metrics lines") {
  std::ifstream in(fixture_path("console_noisy.txt"));
  REQUIRE(in.good());
  const auto samples = parse_srsran_console(in);
  REQUIRE(samples.size() == 4);
  for (const auto& s : samples) {
    CHECK(s.bler >= 0.0);
    CHECK(s.bler <= 1.0);
    if (s.ok_count + s.nok_count > 0) {
      CHECK(s.bler ==
            static_cast<double>(s.nok_count) /
                static_cast<double>(s.ok_count + s.nok_count));
    }
  }
  CHECK(samples[0].brate_mbps == doctest::Approx(1.2e3));  // 1.2G
  CHECK(samples[3].bler == 0.0);                           // ok=0 nok=0
}

TEST_CASE("console: random junk lines never crash the parser") {
  Rng rng(606);
  ConsoleParser parser;
  parser.feed_line(" pci rnti  cqi  ri  mcs  brate  ok  nok  (%)");
  const std::string alphabet =
      "0123456789 .%|kMG-abcxyz\t";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string line;
    const std::size_t len = rng.next_below(60);
    for (std::size_t i = 0; i < len; ++i) {
      line += alphabet[rng.next_below(alphabet.size())];
    }
    try {
      const auto sample = parser.feed_line(line);
      if (sample) {
        CHECK(sample->bler >= 0.0);
        CHECK(sample->bler <= 1.0);
        CHECK(sample->cqi <= kCqiMax);
        CHECK(sample->mcs <= kMcsMax);
      }
    } catch (const SuffixError&) {
      // acceptable: a line that looked like UE metrics with a bad rate token
    }
  }
}

TEST_CASE("console: unknown magnitude suffix raises SuffixError") {
  ConsoleParser parser;
  parser.feed_line(" pci rnti  cqi  ri  mcs  brate  ok  nok  (%)");
  CHECK_THROWS_AS(
      parser.feed_line("   1 4601   15   1   27   18X  100    0   0%"),
      SuffixError);
}

TEST_CASE("align: samples snapping to one grid point are merged") {
  MetricSample a;
  a.timestamp_ms = 998;
  a.ue_id = 1;
  a.cqi = 15;
  a.mcs = 26;
  a.tti_count = 100;
  a.brate_mbps = 10.0;
  a.ok_count = 90;
  a.nok_count = 10;
  a.bler = 0.1;
  a.dl_thr_mbps = 9.0;
  MetricSample b = a;
  b.timestamp_ms = 1003;
  b.cqi = 14;
  b.mcs = 25;
  b.brate_mbps = 12.0;
  b.ok_count = 80;
  b.nok_count = 20;
  b.bler = 0.2;
  b.dl_thr_mbps = 10.0;

  const std::vector<MetricSample> samples{a, b};
  const Dataset ds = align_timestamps(samples, 1000);
  REQUIRE(ds.samples.size() == 1);
  const MetricSample& m = ds.samples[0];
  CHECK(m.timestamp_ms == 1000);
  CHECK(m.cqi == 15);  // mean 14.5 rounds half-up
  CHECK(m.mcs == 26);  // mean 25.5 rounds half-up
  CHECK(m.tti_count == 200);
  CHECK(m.ok_count == 170);
  CHECK(m.nok_count == 30);
  CHECK(m.bler == doctest::Approx(30.0 / 200.0));
  CHECK(m.brate_mbps == doctest::Approx(11.0));
  CHECK(m.dl_thr_mbps == doctest::Approx(9.5));
}

TEST_CASE("align: nearest-grid rounding, midpoint rounds up") {
  MetricSample s;
  s.ue_id = 0;
  SUBCASE("1499 -> 1000") {
    s.timestamp_ms = 1499;
    CHECK(align_timestamps(std::vector{s}, 1000).samples[0].timestamp_ms == 1000);
  }
  SUBCASE("1501 -> 2000") {
    s.timestamp_ms = 1501;
    CHECK(align_timestamps(std::vector{s}, 1000).samples[0].timestamp_ms == 2000);
  }
  SUBCASE("1500 -> 2000") {
    s.timestamp_ms = 1500;
    CHECK(align_timestamps(std::vector{s}, 1000).samples[0].timestamp_ms == 2000);
  }
}

TEST_CASE("align: alignment is per UE") {
  MetricSample a;
  a.timestamp_ms = 1002;
  a.ue_id = 1;
  MetricSample b = a;
  b.ue_id = 2;
  const Dataset ds = align_timestamps(std::vector{a, b}, 1000);
  REQUIRE(ds.samples.size() == 2);
  CHECK(ds.samples[0].timestamp_ms == 1000);
  CHECK(ds.samples[1].timestamp_ms == 1000);
  CHECK(ds.samples[0].ue_id != ds.samples[1].ue_id);
}

TEST_CASE("align: empty input and bad interval") {
  CHECK(align_timestamps({}, 1000).samples.empty());
  CHECK_THROWS_AS(align_timestamps({}, 0), ConfigError);
}

TEST_CASE("derive_features: projection per target kind") {
  MetricSample s;
  s.timestamp_ms = 0;
  s.cqi = 15;
  s.mcs = 27;
  s.tti_count = 950;
  s.brate_mbps = 38.2;
  s.ok_count = 931;
  s.nok_count = 19;
  s.bler = 0.02;
  s.dl_thr_mbps = 36.5;
  Dataset ds;
  ds.samples = {s};

  const FeatureMatrix thr = derive_features(ds, TargetKind::throughput);
  CHECK(thr.feature_names == std::vector<std::string>{"cqi", "mcs", "tti", "bler"});
  CHECK(thr.rows.at(0, 0) == 15.0);
  CHECK(thr.rows.at(0, 1) == 27.0);
  CHECK(thr.rows.at(0, 2) == 950.0);
  CHECK(thr.rows.at(0, 3) == 0.02);
  CHECK(thr.target[0] == 36.5);

  const FeatureMatrix bler = derive_features(ds, TargetKind::bler);
  CHECK(bler.feature_names ==
        std::vector<std::string>{"cqi", "mcs", "tti", "brate"});
  CHECK(bler.rows.at(0, 3) == 38.2);
  CHECK(bler.target[0] == 0.02);
}

TEST_CASE("derive_features: shape, order, and empty errors") {
  GeneratorConfig config;
  config.n_samples = 50;
  config.seed = 3;
  const Dataset ds = generate_trace(config);
  const FeatureMatrix fm = derive_features(ds, TargetKind::throughput);
  CHECK(fm.n() == ds.samples.size());
  CHECK(fm.p() == 4);
  for (std::size_t i = 0; i < fm.n(); ++i) {
    CHECK(fm.rows.at(i, 1) == static_cast<double>(ds.samples[i].mcs));
    CHECK(fm.target[i] == ds.samples[i].dl_thr_mbps);
  }
  CHECK_THROWS_AS(derive_features(Dataset{}, TargetKind::throughput), EmptyTrace);
}
