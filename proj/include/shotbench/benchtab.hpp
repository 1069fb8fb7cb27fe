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

#ifndef SHOTBENCH_BENCHTAB_HPP_
#define SHOTBENCH_BENCHTAB_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "shotbench/enumeration.hpp"

namespace shotbench {

struct RunMetrics {
  double validation_error = 0.0;
  double test_error = 0.0;
  double training_time = 0.0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

// Metrics of one architecture: kRepeats runs at each of the four budgets.
struct BenchRecord {
  CanonicalKey key = 0;
  Architecture cell;
  std::array<std::array<RunMetrics, kRepeats>, kBudgets.size()> runs{};

  const RunMetrics& run(int budget, int repeat) const {
    return runs[checked_budget_index(budget)].at(repeat);
  }
};

// Read-only access to averaged metrics by key. Optimizers only see this
// interface so that access can be audited.
class MetricSource {
 public:
  virtual ~MetricSource() = default;

  virtual bool contains(CanonicalKey key) const = 0;
  // Mean over repeats. Throw kNotFound for absent keys.
  virtual double validation_error(CanonicalKey key, int budget) const = 0;
  virtual double test_error(CanonicalKey key, int budget) const = 0;
  virtual double training_time(CanonicalKey key, int budget) const = 0;
};

enum class Provenance { kIngested, kSurrogate };

class BenchTable final : public MetricSource {
 public:
  BenchTable() = default;
  BenchTable(std::vector<BenchRecord> records, Provenance provenance,
             std::uint64_t seed = 0);

  // Line-delimited JSON; see README for the schema.
  static BenchTable load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_jsonl() const;
  static BenchTable from_jsonl(const std::string& text);

  bool contains(CanonicalKey key) const override;
  double validation_error(CanonicalKey key, int budget) const override;
  double test_error(CanonicalKey key, int budget) const override;
  double training_time(CanonicalKey key, int budget) const override;

  RunMetrics mean(CanonicalKey key, int budget) const;
  const BenchRecord& record(CanonicalKey key) const;

  std::size_t size() const noexcept { return records_.size(); }
  // Records in ascending key order.
  const std::vector<BenchRecord>& records() const noexcept { return records_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t index_of(CanonicalKey key) const;

  std::vector<BenchRecord> records_;
  std::vector<std::array<RunMetrics, kBudgets.size()>> means_;
  std::unordered_map<CanonicalKey, std::size_t> index_;
  Provenance provenance_ = Provenance::kIngested;
  std::uint64_t seed_ = 0;
};

// Mean metrics of `arch` at `budget`, looked up by lookup_key(arch).
RunMetrics query(const BenchTable& table, const Architecture& arch, int budget);

enum class Metric { kValidation, kTest };

struct BestEntry {
  CanonicalKey key = 0;
  double value = 0.0;
};

// Minimum mean metric over all keys of the space; ties go to the smallest
// key. Throws kNotFound naming the first key the source lacks.
BestEntry best_in_space(const MetricSource& source, const SearchSpaceSpec& spec,
                        int budget, Metric metric);

// Throws kNotFound naming the first key of the space the source lacks.
void check_coverage(const MetricSource& source, const SearchSpaceSpec& spec);

// Deterministic stand-in table covering every key of the space.
BenchTable generate_surrogate_table(const SearchSpaceSpec& spec,
                                    std::uint64_t seed);

// Forwards to another source and counts reads of test errors.
class AuditedSource final : public MetricSource {
 public:
  explicit AuditedSource(const MetricSource& inner) : inner_(inner) {}

  bool contains(CanonicalKey key) const override {
    return inner_.contains(key);
  }
  double validation_error(CanonicalKey key, int budget) const override {
    validation_reads_.fetch_add(1, std::memory_order_relaxed);
    return inner_.validation_error(key, budget);
  }
  double test_error(CanonicalKey key, int budget) const override {
    test_reads_.fetch_add(1, std::memory_order_relaxed);
    return inner_.test_error(key, budget);
  }
  double training_time(CanonicalKey key, int budget) const override {
    return inner_.training_time(key, budget);
  }

  std::uint64_t test_reads() const noexcept { return test_reads_.load(); }
  std::uint64_t validation_reads() const noexcept {
    return validation_reads_.load();
  }

 private:
  const MetricSource& inner_;
  mutable std::atomic<std::uint64_t> test_reads_{0};
  mutable std::atomic<std::uint64_t> validation_reads_{0};
};

// Cached space_keys(); safe to call concurrently.
const std::vector<CanonicalKey>& cached_space_keys(const SearchSpaceSpec& spec);

}  // namespace shotbench

#endif  // SHOTBENCH_BENCHTAB_HPP_
