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

#include "shotbench/benchtab.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "shotbench/rng.hpp"

namespace shotbench {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_line(std::size_t line, ErrorCode code,
                            const std::string& what) {
  fail(code, "line " + std::to_string(line) + ": " + what);
}

double finite_number(const nlohmann::json& v, std::size_t line,
                     const char* field) {
  if (!v.is_number()) {
    fail_line(line, ErrorCode::kParse,
              std::string("field '") + field + "' is not a number");
  }
  return v.get<double>();
}

BenchRecord parse_record(const std::string& text, std::size_t line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail_line(line, ErrorCode::kParse, std::string("parse failure: ") + e.what());
  }
  if (!doc.is_object()) fail_line(line, ErrorCode::kParse, "record is not an object");
  for (const char* field : {"key", "ops", "adjacency", "metrics"}) {
    if (!doc.contains(field)) {
      fail_line(line, ErrorCode::kParse, std::string("missing field '") + field + "'");
    }
  }
  if (!doc["key"].is_string() || !doc["adjacency"].is_string() ||
      !doc["ops"].is_array() || !doc["metrics"].is_object()) {
    fail_line(line, ErrorCode::kParse, "record fields have wrong types");
  }

  BenchRecord record;
  try {
    std::string text_form;
    for (std::size_t i = 0; i < doc["ops"].size(); ++i) {
      if (i > 0) text_form += ',';
      text_form += doc["ops"][i].get<std::string>();
    }
    text_form += '|';
    text_form += doc["adjacency"].get<std::string>();
    record.cell = Architecture::parse(text_form);
    record.key = key_from_hex(doc["key"].get<std::string>());
  } catch (const Error& e) {
    fail_line(line, e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    fail_line(line, ErrorCode::kParse, e.what());
  }
  CanonicalKey recomputed = 0;
  try {
    recomputed = lookup_key(record.cell);
  } catch (const Error& e) {
    fail_line(line, e.code(), e.what());
  }
  if (recomputed != record.key) {
    fail_line(line, ErrorCode::kParse,
              "stored key " + key_to_hex(record.key) +
                  " does not match the cell (expected " +
                  key_to_hex(recomputed) + ")");
  }

  const auto& metrics = doc["metrics"];
  for (std::size_t b = 0; b < kBudgets.size(); ++b) {
    const std::string name = std::to_string(kBudgets[b]);
    if (!metrics.contains(name)) {
      fail_line(line, ErrorCode::kParse, "missing budget " + name);
    }
    const auto& repeats = metrics[name];
    if (!repeats.is_array() || repeats.size() != kRepeats) {
      fail_line(line, ErrorCode::kParse,
                "budget " + name + " must have exactly 3 repeats");
    }
    for (int r = 0; r < kRepeats; ++r) {
      const auto& run = repeats[r];
      if (!run.is_object() || !run.contains("val") || !run.contains("test") ||
          !run.contains("time")) {
        fail_line(line, ErrorCode::kParse,
                  "repeat of budget " + name + " lacks val/test/time");
      }
      RunMetrics m{finite_number(run["val"], line, "val"),
                   finite_number(run["test"], line, "test"),
                   finite_number(run["time"], line, "time")};
      if (!(m.validation_error >= 0.0 && m.validation_error <= 1.0) ||
          !(m.test_error >= 0.0 && m.test_error <= 1.0)) {
        fail_line(line, ErrorCode::kOutOfRange,
                  "error outside [0,1] at budget " + name);
      }
      if (!(m.training_time > 0.0)) {
        fail_line(line, ErrorCode::kOutOfRange,
                  "non-positive training time at budget " + name);
      }
      record.runs[b][r] = m;
    }
  }
  return record;
}

std::string format_record(const BenchRecord& record) {
  ordered_json doc;
  doc["key"] = key_to_hex(record.key);
  ordered_json ops = ordered_json::array();
  for (Op op : record.cell.ops()) ops.push_back(std::string(op_label(op)));
  doc["ops"] = ops;
  const std::string text = record.cell.to_text();
  doc["adjacency"] = text.substr(text.find('|') + 1);
  ordered_json metrics = ordered_json::object();
  for (std::size_t b = 0; b < kBudgets.size(); ++b) {
    ordered_json repeats = ordered_json::array();
    for (const RunMetrics& m : record.runs[b]) {
      repeats.push_back({{"val", m.validation_error},
                         {"test", m.test_error},
                         {"time", m.training_time}});
    }
    metrics[std::to_string(kBudgets[b])] = repeats;
  }
  doc["metrics"] = metrics;
  return doc.dump();
}

// Longest path from the input to each node, in edges; 0 when unreachable.
std::vector<int> node_depths(const Architecture& cell) {
  std::vector<int> depth(cell.num_nodes(), 0);
  for (int to = 1; to < cell.num_nodes(); ++to) {
    for (int from = 0; from < to; ++from) {
      if (cell.has_edge(from, to)) depth[to] = std::max(depth[to], depth[from] + 1);
    }
  }
  return depth;
}

}  // namespace

BenchTable::BenchTable(std::vector<BenchRecord> records, Provenance provenance,
                       std::uint64_t seed)
    : records_(std::move(records)), provenance_(provenance), seed_(seed) {
  std::sort(records_.begin(), records_.end(),
            [](const BenchRecord& a, const BenchRecord& b) {
              return a.key < b.key;
            });
  means_.resize(records_.size());
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].key, i).second) {
      fail(ErrorCode::kInvalidArgument,
           "duplicate key " + key_to_hex(records_[i].key));
    }
    for (std::size_t b = 0; b < kBudgets.size(); ++b) {
      RunMetrics sum;
      for (const RunMetrics& m : records_[i].runs[b]) {
        sum.validation_error += m.validation_error;
        sum.test_error += m.test_error;
        sum.training_time += m.training_time;
      }
      means_[i][b] = {sum.validation_error / kRepeats,
                      sum.test_error / kRepeats, sum.training_time / kRepeats};
    }
  }
}

BenchTable BenchTable::from_jsonl(const std::string& text) {
  std::vector<BenchRecord> records;
  std::unordered_map<CanonicalKey, std::size_t> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    BenchRecord record = parse_record(line, number);
    const auto [it, inserted] = seen.emplace(record.key, number);
    if (!inserted) {
      fail_line(number, ErrorCode::kInvalidArgument,
                "duplicate key " + key_to_hex(record.key) +
                    " (first seen on line " + std::to_string(it->second) + ")");
    }
    records.push_back(std::move(record));
  }
  return BenchTable(std::move(records), Provenance::kIngested);
}

BenchTable BenchTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open table '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_jsonl(buffer.str());
}

std::string BenchTable::to_jsonl() const {
  std::string out;
  for (const BenchRecord& record : records_) {
    out += format_record(record);
    out += '\n';
  }
  return out;
}

void BenchTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write table '" + path + "'");
  out << to_jsonl();
  if (!out) fail(ErrorCode::kIo, "failed writing table '" + path + "'");
}

std::size_t BenchTable::index_of(CanonicalKey key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) {
    fail(ErrorCode::kNotFound,
         "architecture not in benchmark (key " + key_to_hex(key) + ")");
  }
  return it->second;
}

bool BenchTable::contains(CanonicalKey key) const {
  return index_.count(key) != 0;
}

RunMetrics BenchTable::mean(CanonicalKey key, int budget) const {
  const int b = checked_budget_index(budget);
  return means_[index_of(key)][b];
}

double BenchTable::validation_error(CanonicalKey key, int budget) const {
  return mean(key, budget).validation_error;
}

double BenchTable::test_error(CanonicalKey key, int budget) const {
  return mean(key, budget).test_error;
}

double BenchTable::training_time(CanonicalKey key, int budget) const {
  return mean(key, budget).training_time;
}

const BenchRecord& BenchTable::record(CanonicalKey key) const {
  return records_[index_of(key)];
}

RunMetrics query(const BenchTable& table, const Architecture& arch,
                 int budget) {
  checked_budget_index(budget);
  return table.mean(lookup_key(arch), budget);
}

const std::vector<CanonicalKey>& cached_space_keys(
    const SearchSpaceSpec& spec) {
  static std::mutex mutex;
  static std::map<int, std::vector<CanonicalKey>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(spec.number());
  if (it == cache.end()) {
    it = cache.emplace(spec.number(), space_keys(spec)).first;
  }
  return it->second;
}

void check_coverage(const MetricSource& source, const SearchSpaceSpec& spec) {
  for (CanonicalKey key : cached_space_keys(spec)) {
    if (!source.contains(key)) {
      fail(ErrorCode::kNotFound,
           "table is missing space member " + key_to_hex(key));
    }
  }
}

BestEntry best_in_space(const MetricSource& source, const SearchSpaceSpec& spec,
                        int budget, Metric metric) {
  checked_budget_index(budget);
  check_coverage(source, spec);
  BestEntry best;
  bool first = true;
  // Keys are ascending, so a strict comparison keeps the smallest key on ties.
  for (CanonicalKey key : cached_space_keys(spec)) {
    const double value = metric == Metric::kValidation
                             ? source.validation_error(key, budget)
                             : source.test_error(key, budget);
    if (first || value < best.value) {
      best = {key, value};
      first = false;
    }
  }
  return best;
}

BenchTable generate_surrogate_table(const SearchSpaceSpec& spec,
                                    std::uint64_t seed) {
  // Per-seed landscape: quality of each op and the weight of cell depth.
  const std::uint64_t seed_hash = mix64(seed ^ 0x5eedc0ffee123457ULL);
  auto seed_unit = [&](std::uint64_t stream) {
    return unit_from_bits(mix64(seed_hash + stream));
  };
  const std::array<double, kNumOps> op_quality = {seed_unit(1), seed_unit(2),
                                                  seed_unit(3)};
  const bool deep_is_better = seed_unit(4) < 0.5;
  // Quality of each op at each node depth.
  std::array<std::array<double, kMaxNodes>, kNumOps> placed_quality{};
  for (int o = 0; o < kNumOps; ++o) {
    for (int d = 0; d < kMaxNodes; ++d) {
      placed_quality[o][d] = seed_unit(16 + kMaxNodes * o + d);
    }
  }

  // Fraction of the low-budget gap left at each budget.
  constexpr std::array<double, 4> kGapFraction = {1.0, 0.55, 0.2, 0.0};
  constexpr double kArchJitter = 0.05;
  constexpr double kRepeatNoise = 0.01;

  std::vector<BenchRecord> records;
  std::unordered_map<CanonicalKey, bool> done;
  for (const PrunedCell& entry : loose_end_free_cells(spec)) {
    if (!done.emplace(entry.key, true).second) continue;
    const Architecture& cell = entry.cell;
    const std::uint64_t h = mix64(entry.key ^ seed_hash);
    auto unit = [&](std::uint64_t stream) {
      return unit_from_bits(mix64(h + stream));
    };
    auto symmetric = [&](std::uint64_t stream) {
      return 2.0 * unit(stream) - 1.0;
    };

    double op_score = 0.0;
    int conv3 = 0;
    int conv1 = 0;
    for (Op op : cell.ops()) {
      op_score += op_quality[static_cast<int>(op)];
      conv3 += op == Op::kConv3x3;
      conv1 += op == Op::kConv1x1;
    }
    op_score /= std::max(cell.num_interior(), 1);
    const std::vector<int> depths = node_depths(cell);
    double placed_score = 0.0;
    for (int node = 1; node <= cell.num_interior(); ++node) {
      placed_score += placed_quality[static_cast<int>(cell.op_of(node))][depths[node]];
    }
    placed_score /= std::max(cell.num_interior(), 1);
    const double depth_term =
        static_cast<double>(std::max(depths.back(), 1) - 1) / (kMaxNodes - 2);
    const double shape_score = deep_is_better ? 1.0 - depth_term : depth_term;
    const double capacity = static_cast<double>(cell.num_interior()) /
                            spec.num_choice_blocks();
    const double structure = 0.3 * (1.0 - capacity) + 0.25 * op_score +
                             0.25 * placed_score + 0.2 * shape_score;
    const double base = 0.05 + 0.55 * (0.8 * structure + 0.2 * unit(0));
    const double gap = 0.06 + 0.2 * unit(1);
    const double test_offset = 0.01 * symmetric(2);
    const double epoch_seconds = 8.0 + 6.0 * conv3 + 3.0 * conv1 +
                                 cell.num_interior() + 4.0 * unit(3);

    BenchRecord record;
    record.key = entry.key;
    record.cell = cell;
    for (std::size_t b = 0; b < kBudgets.size(); ++b) {
      const double level = base + gap * kGapFraction[b] +
                           kArchJitter * kGapFraction[b] * symmetric(10 + b);
      for (int r = 0; r < kRepeats; ++r) {
        const std::uint64_t stream = 100 + 10 * b + r;
        RunMetrics& m = record.runs[b][r];
        m.validation_error = level + kRepeatNoise * symmetric(stream);
        m.test_error = level + test_offset + kRepeatNoise * symmetric(stream + 50);
        m.training_time = epoch_seconds * kBudgets[b] *
                          (1.0 + 0.02 * symmetric(stream + 500));
      }
    }
    records.push_back(std::move(record));
  }
  return BenchTable(std::move(records), Provenance::kSurrogate, seed);
}

}  // namespace shotbench
