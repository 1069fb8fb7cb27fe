// Copyright 2026 The Shotbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shotbench/benchtab.hpp"
#include "shotbench/enumeration.hpp"

namespace shotbench {
namespace {

const BenchTable& s1_table() {
  static const BenchTable table = generate_surrogate_table(build_space(1), 7);
  return table;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

void expect_error(const std::string& text, ErrorCode code, const std::string& needle) {
  try {
    BenchTable::from_jsonl(text);
    FAIL() << "expected failure containing '" << needle << "'";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(SurrogateTable, CoversEveryKeyOfTheSpace) {
  const BenchTable& table = s1_table();
  EXPECT_EQ(table.size(), space_keys(build_space(1)).size());
  EXPECT_NO_THROW(check_coverage(table, build_space(1)));
  EXPECT_EQ(table.provenance(), Provenance::kSurrogate);
  EXPECT_THROW(check_coverage(table, build_space(2)), Error);
}

TEST(SurrogateTable, DeterministicPerSeed) {
  const BenchTable again = generate_surrogate_table(build_space(1), 7);
  EXPECT_EQ(again.to_jsonl(), s1_table().to_jsonl());
  const BenchTable other = generate_surrogate_table(build_space(1), 8);
  EXPECT_NE(other.to_jsonl(), s1_table().to_jsonl());
}

TEST(SurrogateTable, ValuesAreInRangeAndImproveWithBudget) {
  int improving = 0;
  for (const BenchRecord& r : s1_table().records()) {
    for (int budget : kBudgets) {
      for (int rep = 0; rep < kRepeats; ++rep) {
        const RunMetrics& m = r.run(budget, rep);
        ASSERT_GT(m.validation_error, 0.0);
        ASSERT_LT(m.validation_error, 1.0);
        ASSERT_GT(m.training_time, 0.0);
      }
    }
    improving += s1_table().validation_error(r.key, 108) <
                 s1_table().validation_error(r.key, 4);
    EXPECT_GT(s1_table().training_time(r.key, 108), s1_table().training_time(r.key, 4));
  }
  EXPECT_EQ(improving, static_cast<int>(s1_table().size()));
}

TEST(BenchTable, JsonlRoundTripIsExact) {
  const std::string text = s1_table().to_jsonl();
  const BenchTable back = BenchTable::from_jsonl(text);
  EXPECT_EQ(back.to_jsonl(), text);
  EXPECT_EQ(back.provenance(), Provenance::kIngested);
  const BenchRecord& r = s1_table().records().front();
  EXPECT_EQ(back.record(r.key).runs, r.runs);
}

TEST(BenchTable, SaveAndLoadThroughAFile) {
  const auto path = std::filesystem::temp_directory_path() / "shotbench_table_test.jsonl";
  s1_table().save(path.string());
  const BenchTable back = BenchTable::load(path.string());
  EXPECT_EQ(back.size(), s1_table().size());
  std::filesystem::remove(path);
  EXPECT_THROW(BenchTable::load("/nonexistent/table.jsonl"), Error);
}

TEST(BenchTable, MeansAverageTheRepeats) {
  const BenchRecord& r = s1_table().records()[10];
  for (int budget : kBudgets) {
    double v = 0, t = 0, s = 0;
    for (int rep = 0; rep < kRepeats; ++rep) {
      v += r.run(budget, rep).validation_error;
      t += r.run(budget, rep).test_error;
      s += r.run(budget, rep).training_time;
    }
    EXPECT_DOUBLE_EQ(s1_table().validation_error(r.key, budget), v / 3);
    EXPECT_DOUBLE_EQ(s1_table().test_error(r.key, budget), t / 3);
    EXPECT_DOUBLE_EQ(s1_table().training_time(r.key, budget), s / 3);
  }
  EXPECT_THROW(s1_table().validation_error(r.key, 50), Error);
  EXPECT_THROW(s1_table().validation_error(0, 108), Error);
}

TEST(BenchTable, QueryLooksUpByPrunedCanonicalForm) {
  const BenchRecord& r = s1_table().records()[3];
  const RunMetrics m = query(s1_table(), r.cell, 36);
  EXPECT_DOUBLE_EQ(m.validation_error, s1_table().validation_error(r.key, 36));
}

TEST(BenchTable, IngestErrorsNameTheLine) {
  auto lines = lines_of(s1_table().to_jsonl());
  lines.resize(3);

  auto missing_budget = lines;
  {
    const auto pos = missing_budget[1].find("\"36\"");
    missing_budget[1].replace(pos, 4, "\"35\"");
  }
  expect_error(join(missing_budget), ErrorCode::kParse, "line 2: missing budget 36");

  auto duplicate = lines;
  duplicate.push_back(lines[0]);
  expect_error(join(duplicate), ErrorCode::kInvalidArgument, "first seen on line 1");

  auto out_of_range = lines;
  {
    const auto pos = out_of_range[2].find("\"val\":");
    const auto end = out_of_range[2].find(',', pos);
    out_of_range[2].replace(pos, end - pos, "\"val\":1.5");
  }
  expect_error(join(out_of_range), ErrorCode::kOutOfRange, "line 3: error outside [0,1]");

  auto tampered = lines;
  {
    const auto pos = tampered[0].find("\"key\":\"") + 7;
    tampered[0][pos + 15] = tampered[0][pos + 15] == '0' ? '1' : '0';
  }
  expect_error(join(tampered), ErrorCode::kParse, "line 1: stored key");

  auto repeats = lines;
  {
    const auto pos = repeats[0].find("\"4\":[{");
    const auto end = repeats[0].find("},", pos);
    repeats[0].erase(pos + 5, end - pos - 3);
  }
  expect_error(join(repeats), ErrorCode::kParse, "exactly 3 repeats");

  expect_error("{not json}\n", ErrorCode::kParse, "line 1");
}

TEST(BestInSpace, AgreesWithALinearScan) {
  const SearchSpaceSpec spec = build_space(1);
  for (Metric metric : {Metric::kValidation, Metric::kTest}) {
    for (int budget : kBudgets) {
      CanonicalKey best_key = 0;
      double best = 2.0;
      for (const BenchRecord& r : s1_table().records()) {
        const double v = metric == Metric::kValidation
                             ? s1_table().validation_error(r.key, budget)
                             : s1_table().test_error(r.key, budget);
        if (v < best || (v == best && r.key < best_key)) {
          best = v;
          best_key = r.key;
        }
      }
      const BestEntry e = best_in_space(s1_table(), spec, budget, metric);
      EXPECT_EQ(e.key, best_key);
      EXPECT_EQ(e.value, best);
    }
  }
}

TEST(AuditedSource, CountsReadsByKind) {
  AuditedSource audited(s1_table());
  const CanonicalKey k = s1_table().records().front().key;
  audited.validation_error(k, 12);
  audited.validation_error(k, 108);
  audited.training_time(k, 12);
  EXPECT_EQ(audited.validation_reads(), 2U);
  EXPECT_EQ(audited.test_reads(), 0U);
  audited.test_error(k, 108);
  EXPECT_EQ(audited.test_reads(), 1U);
}

}  // namespace
}  // namespace shotbench
