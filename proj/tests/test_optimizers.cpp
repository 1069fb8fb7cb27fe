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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "shotbench/benchtab.hpp"
#include "shotbench/enumeration.hpp"
#include "shotbench/optimizers.hpp"

namespace shotbench {
namespace {

const SearchSpaceSpec& s1() {
  static const SearchSpaceSpec spec = build_space(1);
  return spec;
}

const BenchTable& table() {
  static const BenchTable t = generate_surrogate_table(s1(), 1);
  return t;
}

// Every stored error set to the same value.
const BenchTable& constant_table() {
  static const BenchTable t = [] {
    std::vector<BenchRecord> records = table().records();
    for (BenchRecord& r : records) {
      for (auto& budget : r.runs) {
        for (RunMetrics& m : budget) {
          m.validation_error = 0.3;
          m.test_error = 0.3;
        }
      }
    }
    return BenchTable(records, Provenance::kIngested);
  }();
  return t;
}

OptimizerConfig config(OptimizerKind kind, int epochs = 10, std::uint64_t seed = 0) {
  OptimizerConfig c;
  c.kind = kind;
  c.epochs = epochs;
  c.seed = seed;
  return c;
}

// Sum over every choice of probability times table error.
double brute_expectation(const ArchWeights& w, int budget) {
  double total = 0.0;
  ChoiceEnumerator cursor(s1());
  CellChoice c;
  while (cursor.next(c)) {
    total += choice_probability(w, c) *
             table().validation_error(lookup_key(to_architecture(s1(), c)), budget);
  }
  return total;
}

TEST(ExactExpectation, MatchesBruteForceSum) {
  const ChoiceValues values(s1(), table(), 12);
  EXPECT_EQ(values.size(), raw_choice_count(s1()));
  for (std::uint64_t seed : {1, 2}) {
    const ArchWeights w = init_weights(s1(), InitScheme::gaussian(0.9), seed);
    EXPECT_NEAR(exact_expected_error(w, values), brute_expectation(w, 12), 1e-12);
    EXPECT_NEAR(total_probability(w), 1.0, 1e-12);
  }
  EXPECT_THROW(ChoiceValues(build_space(3), table(), 12), Error);
}

TEST(ExactGradient, MatchesFiniteDifferences) {
  const ChoiceValues values(s1(), table(), 12);
  const ArchWeights w = init_weights(s1(), InitScheme::gaussian(0.6), 4);
  const std::vector<double> g = exact_gradient(w, values).flat();
  std::vector<double> x = w.flat();
  const double h = 1e-5;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ArchWeights plus(s1()), minus(s1());
    x[i] += h;
    plus.assign_flat(x);
    x[i] -= 2 * h;
    minus.assign_flat(x);
    x[i] += h;
    const double fd = (exact_expected_error(plus, values) -
                       exact_expected_error(minus, values)) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-8) << "coordinate " << i;
  }
}

TEST(ScoreFunction, ConstantErrorsGiveZeroGradient) {
  const ArchWeights w = init_weights(s1(), InitScheme::gaussian(1.0), 2);
  Rng rng(1);
  const ScoreEstimate est = score_function_gradient(
      w, [](const CellChoice&) { return 0.25; }, 6, rng);
  for (double g : est.gradient.flat()) EXPECT_EQ(g, 0.0);
  EXPECT_DOUBLE_EQ(est.objective, 0.25);
  EXPECT_THROW(score_function_gradient(w, table(), 12, 1, rng), Error);
}

TEST(Optimizers, TrajectoryShapeAndDeterminism) {
  for (OptimizerKind kind : all_optimizers()) {
    const Trajectory a = run_search(s1(), table(), config(kind, 8, 3));
    const Trajectory b = run_search(s1(), table(), config(kind, 8, 3));
    const Trajectory c = run_search(s1(), table(), config(kind, 8, 4));
    ASSERT_EQ(a.epochs.size(), 8U) << optimizer_name(kind);
    EXPECT_EQ(a.kind, kind);
    EXPECT_EQ(a.selection.epoch, 8);
    double last_t = 0.0;
    for (std::size_t e = 0; e < a.epochs.size(); ++e) {
      const TrajectoryEntry& x = a.epochs[e];
      EXPECT_EQ(x.epoch, static_cast<int>(e));
      EXPECT_EQ(x.key, lookup_key(x.arch));
      EXPECT_TRUE(validate_architecture(x.arch).valid);
      EXPECT_EQ(x.arch.edge_count(), kMaxEdges);
      EXPECT_GE(x.t_search, last_t);
      last_t = x.t_search;
      EXPECT_DOUBLE_EQ(x.val_full, table().validation_error(x.key, 108));
      ASSERT_TRUE(x.test_full.has_value());
      EXPECT_EQ(x.key, b.epochs[e].key);
      EXPECT_EQ(x.objective, b.epochs[e].objective);
    }
    EXPECT_GT(a.selection.t_search, 0.0);
    EXPECT_GT(a.selection_train_time, 0.0);
    EXPECT_GT(a.evaluations, 0U);
    bool differs = false;
    for (std::size_t e = 0; e < a.epochs.size(); ++e) differs |= a.epochs[e].objective != c.epochs[e].objective;
    EXPECT_TRUE(differs) << optimizer_name(kind);
  }
}

TEST(Optimizers, NamesRoundTrip) {
  for (OptimizerKind kind : all_optimizers()) {
    EXPECT_EQ(parse_optimizer(optimizer_name(kind)), kind);
  }
  EXPECT_THROW(parse_optimizer("bohb"), Error);
}

TEST(Optimizers, ConfigValidation) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tau_end = 20.0;
  EXPECT_THROW(c.validate(), Error);
  c = OptimizerConfig{};
  c.tournament = 60;
  EXPECT_THROW(c.validate(), Error);
  c = OptimizerConfig{};
  c.fidelity_budget = 50;
  EXPECT_THROW(c.validate(), Error);
  c = OptimizerConfig{};
  c.epochs = 0;
  EXPECT_THROW(c.validate(), Error);
  c = OptimizerConfig{};
  c.baseline_decay = 1.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Darts, ZeroLearningRateKeepsTheDiscretization) {
  OptimizerConfig c = config(OptimizerKind::kDartsSf, 15, 7);
  c.arch_lr = 0.0;
  c.init_sigma = 0.5;
  const Trajectory t = run_darts_sf(s1(), table(), c);
  for (const TrajectoryEntry& e : t.epochs) {
    EXPECT_EQ(e.key, t.epochs.front().key);
    EXPECT_EQ(e.weights, t.epochs.front().weights);
  }
}

TEST(Darts, LargeL2ShrinksLogitsTowardZero) {
  OptimizerConfig c = config(OptimizerKind::kDartsSf, 20, 2);
  c.logit_l2 = 1e3;
  c.init_sigma = 0.5;
  const Trajectory t = run_darts_sf(s1(), table(), c);
  double largest = 0.0;
  for (double v : t.epochs.back().weights) largest = std::max(largest, std::abs(v));
  EXPECT_LT(largest, 1e-3);
  EXPECT_TRUE(std::all_of(t.epochs.back().weights.begin(), t.epochs.back().weights.end(),
                          [](double v) { return std::isfinite(v); }));
}

TEST(Darts, LargeL2WithFlatObjectiveEndsOnAllTiesArchitecture) {
  OptimizerConfig c = config(OptimizerKind::kDartsSf, 10, 2);
  c.logit_l2 = 1e3;
  c.init_sigma = 0.0;
  const Trajectory t = run_darts_sf(s1(), constant_table(), c);
  EXPECT_EQ(t.selection.arch, discretize(ArchWeights(s1())));
}

TEST(Darts, ExactGradientDescendsTheExpectation) {
  OptimizerConfig c = config(OptimizerKind::kDartsSf, 30, 1);
  c.exact_gradient = true;
  c.arch_lr = 20.0;
  const Trajectory t = run_darts_sf(s1(), table(), c);
  const ChoiceValues values(s1(), table(), 12);
  ArchWeights first(s1()), last(s1());
  first.assign_flat(t.epochs.front().weights);
  last.assign_flat(t.epochs.back().weights);
  EXPECT_LT(exact_expected_error(last, values), exact_expected_error(first, values));
}

TEST(Gdas, TemperatureScheduleIsLinear) {
  OptimizerConfig c = config(OptimizerKind::kGdas, 11);
  c.tau_start = 10.0;
  c.tau_end = 0.1;
  EXPECT_DOUBLE_EQ(gdas_temperature(c, 0), 10.0);
  EXPECT_NEAR(gdas_temperature(c, 10), 0.1, 1e-12);
  EXPECT_NEAR(gdas_temperature(c, 5), 5.05, 1e-12);
  for (int e = 1; e < 11; ++e) EXPECT_LT(gdas_temperature(c, e), gdas_temperature(c, e - 1));
}

TEST(Enas, ConstantRewardLeavesThePolicyUnchanged) {
  OptimizerConfig c = config(OptimizerKind::kEnasPg, 5, 3);
  c.init_sigma = 0.3;
  const Trajectory t = run_enas_pg(s1(), constant_table(), c);
  const ArchWeights start = init_weights(s1(), InitScheme::gaussian(0.3), split_seed(3, 1));
  for (const TrajectoryEntry& e : t.epochs) EXPECT_EQ(e.weights, start.flat());
  EXPECT_EQ(t.candidate_pool.size(), static_cast<std::size_t>(kEnasFinalSamples));
}

TEST(Enas, SelectionIsTheBestScoredSample) {
  const Trajectory t = run_enas_pg(s1(), table(), config(OptimizerKind::kEnasPg, 5, 1));
  const auto best = std::min_element(t.candidate_scores.begin(), t.candidate_scores.end());
  EXPECT_EQ(t.selection.key, t.candidate_pool[best - t.candidate_scores.begin()]);
}

TEST(RandomWs, NoiselessRankingShortlistsTheTrueTopFive) {
  OptimizerConfig c = config(OptimizerKind::kRandomWs, 3, 5);
  c.selection_noise = 0.0;
  const Trajectory t = run_random_ws(s1(), table(), c);
  ASSERT_EQ(t.candidate_pool.size(), static_cast<std::size_t>(kRandomWsPool));
  std::vector<double> truth;
  for (CanonicalKey k : t.candidate_pool) truth.push_back(table().validation_error(k, 12));
  EXPECT_EQ(truth, t.candidate_scores);
  std::vector<int> order(truth.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return truth[a] < truth[b]; });
  ASSERT_EQ(t.shortlist.size(), static_cast<std::size_t>(kRandomWsShortlist));
  for (int i = 0; i < kRandomWsShortlist; ++i) {
    EXPECT_EQ(t.shortlist[i], t.candidate_pool[order[i]]);
  }
  double best = 1.0;
  for (CanonicalKey k : t.shortlist) best = std::min(best, table().validation_error(k, 108));
  EXPECT_EQ(t.selection.val_full, best);
}

TEST(RandomSearch, IncumbentIsTheRunningMinimum) {
  const Trajectory t = run_random_search(s1(), table(), config(OptimizerKind::kRandomSearch, 20, 2));
  for (std::size_t e = 1; e < t.epochs.size(); ++e) {
    EXPECT_LE(t.epochs[e].val_full, t.epochs[e - 1].val_full);
  }
  EXPECT_EQ(t.evaluations, 20U * 8U);
}

TEST(Evolution, MutantsDifferInExactlyOneDecision) {
  Rng rng(6);
  for (int id = 1; id <= 3; ++id) {
    const SearchSpaceSpec spec = build_space(id);
    for (int trial = 0; trial < 500; ++trial) {
      const CellChoice parent = sample_uniform_choice(spec, rng);
      const CellChoice child = mutate_choice(spec, parent, rng);
      int changed = 0;
      for (std::size_t i = 0; i < parent.ops.size(); ++i) changed += parent.ops[i] != child.ops[i];
      for (std::size_t i = 0; i < parent.parent_sets.size(); ++i) {
        changed += parent.parent_sets[i] != child.parent_sets[i];
      }
      EXPECT_EQ(changed, 1);
      EXPECT_NO_THROW(check_choice(spec, child));
    }
  }
}

TEST(Evolution, IncumbentMonotoneAndBudgetMatchesRandomSearch) {
  const Trajectory re = run_regularized_evolution(s1(), table(), config(OptimizerKind::kRegEvolution, 20, 2));
  const Trajectory rs = run_random_search(s1(), table(), config(OptimizerKind::kRandomSearch, 20, 2));
  EXPECT_EQ(re.evaluations, rs.evaluations);
  for (std::size_t e = 1; e < re.epochs.size(); ++e) {
    EXPECT_LE(re.epochs[e].val_full, re.epochs[e - 1].val_full);
  }
}

TEST(Optimizers, SearchWithoutTestRecordingNeverReadsTestErrors) {
  for (OptimizerKind kind : all_optimizers()) {
    AuditedSource audited(table());
    OptimizerConfig c = config(kind, 6, 1);
    c.record_test = false;
    const Trajectory t = run_search(s1(), audited, c);
    EXPECT_EQ(audited.test_reads(), 0U) << optimizer_name(kind);
    EXPECT_GT(audited.validation_reads(), 0U);
    EXPECT_FALSE(t.selection.test_full.has_value());
  }
}

TEST(Optimizers, FidelityNoiseOnlyActsWhenEnabled) {
  OptimizerConfig c = config(OptimizerKind::kRandomWs, 5, 9);
  const Trajectory clean = run_random_ws(s1(), table(), c);
  for (const TrajectoryEntry& e : clean.epochs) {
    EXPECT_DOUBLE_EQ(e.objective, table().validation_error(e.key, 12));
  }
  c.noise_prob = 1.0;
  c.selection_noise = 0.05;
  const Trajectory noisy = run_random_ws(s1(), table(), c);
  int perturbed = 0;
  for (const TrajectoryEntry& e : noisy.epochs) {
    perturbed += e.objective != table().validation_error(e.key, 12);
  }
  EXPECT_GT(perturbed, 0);
}

TEST(Optimizers, ParallelSeedsMatchSequentialRuns) {
  const OptimizerConfig c = config(OptimizerKind::kGdas, 6);
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
  const auto parallel = run_seeds(s1(), table(), c, seeds, 3);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    OptimizerConfig one = c;
    one.seed = seeds[i];
    const Trajectory t = run_search(s1(), table(), one);
    EXPECT_EQ(parallel[i].seed, seeds[i]);
    EXPECT_EQ(parallel[i].selection.key, t.selection.key);
    EXPECT_EQ(parallel[i].epochs.back().weights, t.epochs.back().weights);
  }
}

TEST(Optimizers, MissingKeyIsReported) {
  std::vector<BenchRecord> few(table().records().begin(), table().records().begin() + 10);
  const BenchTable partial(few, Provenance::kIngested);
  try {
    run_search(s1(), partial, config(OptimizerKind::kRandomSearch, 3));
    FAIL() << "expected a missing-key error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

}  // namespace
}  // namespace shotbench
