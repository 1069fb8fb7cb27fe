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

#ifndef SHOTBENCH_OPTIMIZERS_HPP_
#define SHOTBENCH_OPTIMIZERS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shotbench/benchtab.hpp"
#include "shotbench/relax.hpp"

namespace shotbench {

enum class OptimizerKind {
  kDartsSf,
  kGdas,
  kEnasPg,
  kRandomWs,
  kRandomSearch,
  kRegEvolution,
};

// CLI names: darts, gdas, enas, randomws, rs, re.
std::string_view optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);
std::vector<OptimizerKind> all_optimizers();

// Candidate pool and shortlist of the Random WS final phase, and the number
// of controller samples ranked by ENAS at the end of search.
inline constexpr int kRandomWsPool = 1000;
inline constexpr int kRandomWsShortlist = 5;
inline constexpr int kEnasFinalSamples = 100;

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kDartsSf;
  int epochs = 50;
  double arch_lr = 3.0;
  double logit_l2 = 0.0;
  int samples_per_step = 8;
  double tau_start = 10.0;
  double tau_end = 0.1;
  double baseline_decay = 0.9;
  int population = 50;
  int tournament = 10;
  int fidelity_budget = 12;
  // Probability that a fidelity query is perturbed by N(0, selection_noise).
  double noise_prob = 0.0;
  // Ranking noise of the Random WS final phase, and magnitude of the
  // perturbation above.
  double selection_noise = 0.01;
  // Global-norm gradient clip; 0 disables.
  double grad_clip = 0.0;
  double init_sigma = 1e-3;
  // DARTS only: follow the exact gradient instead of the estimator.
  bool exact_gradient = false;
  // Off during tuning, so search never reads test errors.
  bool record_test = true;
  bool record_weights = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrajectoryEntry {
  int epoch = 0;
  Architecture arch;
  CanonicalKey key = 0;
  double objective = 0.0;
  double val_full = 0.0;
  std::optional<double> test_full;
  double t_search = 0.0;
  std::vector<double> weights;  // flat logits, empty unless recorded
};

struct Trajectory {
  OptimizerKind kind = OptimizerKind::kDartsSf;
  int space = 1;
  std::uint64_t seed = 0;
  std::vector<TrajectoryEntry> epochs;
  TrajectoryEntry selection;       // final selected architecture
  double selection_train_time = 0;  // training time of the selection at 108
  std::uint64_t evaluations = 0;    // benchmark queries issued by the search

  // Final-phase bookkeeping (Random WS and ENAS).
  std::vector<CanonicalKey> candidate_pool;
  std::vector<double> candidate_scores;
  std::vector<CanonicalKey> shortlist;
};

// Per-choice metric values of an enumerable space, indexed by choice_index.
class ChoiceValues {
 public:
  static constexpr std::uint64_t kMaxChoices = 100000;

  ChoiceValues(const SearchSpaceSpec& spec, const MetricSource& source,
               int budget);

  const SearchSpaceSpec& spec() const noexcept { return spec_; }
  double value(std::uint64_t index) const { return values_.at(index); }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  SearchSpaceSpec spec_;
  std::vector<double> values_;
};

// Sum over all choices of P(choice) * validation error; throws kOutOfRange
// when the space has more than ChoiceValues::kMaxChoices tuples.
double exact_expected_error(const ArchWeights& weights,
                            const ChoiceValues& values);
double exact_expected_error(const ArchWeights& weights,
                            const MetricSource& source, int budget);
// Total probability mass over the space (1 up to rounding).
double total_probability(const ArchWeights& weights);

// Exact gradient of exact_expected_error, by enumeration.
ArchWeights exact_gradient(const ArchWeights& weights,
                           const ChoiceValues& values);

struct ScoreEstimate {
  ArchWeights gradient;
  double objective = 0.0;  // mean sampled error
};

using ErrorFn = std::function<double(const CellChoice&)>;

// Score-function estimate with a leave-one-out baseline:
// (1/n) sum_s (err_s - mean_{t != s} err_t) grad log P(a_s).
ScoreEstimate score_function_gradient(const ArchWeights& weights,
                                      const ErrorFn& error, int n_samples,
                                      Rng& rng);
ScoreEstimate score_function_gradient(const ArchWeights& weights,
                                      const MetricSource& source, int budget,
                                      int n_samples, Rng& rng);

Trajectory run_darts_sf(const SearchSpaceSpec& spec, const MetricSource& source,
                        const OptimizerConfig& config);
Trajectory run_gdas(const SearchSpaceSpec& spec, const MetricSource& source,
                    const OptimizerConfig& config);
Trajectory run_enas_pg(const SearchSpaceSpec& spec, const MetricSource& source,
                       const OptimizerConfig& config);
Trajectory run_random_ws(const SearchSpaceSpec& spec,
                         const MetricSource& source,
                         const OptimizerConfig& config);
Trajectory run_random_search(const SearchSpaceSpec& spec,
                             const MetricSource& source,
                             const OptimizerConfig& config);
Trajectory run_regularized_evolution(const SearchSpaceSpec& spec,
                                     const MetricSource& source,
                                     const OptimizerConfig& config);

// Dispatches on config.kind.
Trajectory run_search(const SearchSpaceSpec& spec, const MetricSource& source,
                      const OptimizerConfig& config);

// One run per seed, `workers` at a time; results are in seed order.
std::vector<Trajectory> run_seeds(const SearchSpaceSpec& spec,
                                  const MetricSource& source,
                                  const OptimizerConfig& config,
                                  const std::vector<std::uint64_t>& seeds,
                                  int workers);

// GDAS temperature at `epoch` of `epochs`: linear from tau_start to tau_end.
double gdas_temperature(const OptimizerConfig& config, int epoch);

// Regularized-evolution mutation: with probability 1/2 one block's op is
// redrawn among the other two ops, otherwise one node's parent set is
// redrawn among its other valid subsets.
CellChoice mutate_choice(const SearchSpaceSpec& spec, const CellChoice& parent,
                         Rng& rng);

}  // namespace shotbench

#endif  // SHOTBENCH_OPTIMIZERS_HPP_
