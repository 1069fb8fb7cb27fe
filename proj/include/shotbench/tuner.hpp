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

#ifndef SHOTBENCH_TUNER_HPP_
#define SHOTBENCH_TUNER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shotbench/benchtab.hpp"
#include "shotbench/optimizers.hpp"
#include "shotbench/rng.hpp"
#include "shotbench/space.hpp"

namespace shotbench {

enum class DimensionKind { kContinuous, kInteger, kCategorical };

struct Dimension {
  std::string name;
  DimensionKind kind = DimensionKind::kContinuous;
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
  std::vector<double> values;  // categorical only

  // Number of discrete levels; 0 for continuous.
  int levels() const;
  // Maps a value to [0, 1] and back. Discrete levels sit at bin centres.
  double to_unit(double value) const;
  double from_unit(double unit) const;
  bool contains(double value) const;
};

// Configurations hold one value per dimension, in dimension order.
using Config = std::vector<double>;

class ConfigSpace {
 public:
  ConfigSpace& add_continuous(std::string name, double lo, double hi,
                              bool log_scale = false);
  ConfigSpace& add_integer(std::string name, int lo, int hi);
  ConfigSpace& add_categorical(std::string name, std::vector<double> values);

  const std::vector<Dimension>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return dims_.size(); }
  int index_of(std::string_view name) const;  // -1 when absent

  Config sample(Rng& rng) const;
  bool contains(const Config& config) const;

 private:
  std::vector<Dimension> dims_;
};

// Presets 1, 2, 3 over optimizer hyperparameters.
ConfigSpace config_space_preset(int number);

// Overrides the fields of `base` named by the space's dimensions.
OptimizerConfig apply_config(const OptimizerConfig& base,
                             const ConfigSpace& space, const Config& config);

enum class SamplerKind { kRandom, kKde };

std::string_view sampler_name(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

struct TunerConfig {
  int min_budget = 25;
  int max_budget = 100;
  int eta = 2;
  // Stop once the spent budget reaches this many max-budget evaluations.
  double total_evaluations = 280.0;
  int configs_per_iteration = 8;
  SamplerKind sampler = SamplerKind::kKde;
  double kde_gamma = 0.15;
  int kde_candidates = 64;
  double kde_min_bandwidth = 0.05;
  bool hyperband = false;  // rotate brackets over the ladder's starting rungs
  int workers = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<int> budget_ladder(int min_budget, int max_budget, int eta);

// Number of configurations promoted out of a rung of n.
int promoted_count(int n, int eta);

struct ObjectiveResult {
  double loss = 0.0;
  double cost = 0.0;       // simulated seconds
  std::uint64_t tag = 0;   // caller payload, e.g. the selected key
};

using TunerObjective =
    std::function<ObjectiveResult(const Config& config, int budget)>;

struct TunerEvaluation {
  int config_id = 0;
  int iteration = 0;
  int rung = 0;
  int budget = 0;
  Config config;
  ObjectiveResult result;
  double t_sim = 0.0;  // cumulative cost after this evaluation
};

struct TunerIncumbent {
  double t_sim = 0.0;
  double loss = 0.0;
  int evaluation = 0;  // index into TunerTrace::evaluations
};

struct TunerTrace {
  std::vector<TunerEvaluation> evaluations;
  std::vector<TunerIncumbent> incumbents;
  std::vector<std::vector<int>> rung_populations;  // per iteration
  double spent_evaluations = 0.0;  // in units of max-budget evaluations
  int iterations = 0;
};

struct Observation {
  Config config;
  double loss = 0.0;
};

// TPE-style proposal; falls back to space.sample() below size() + 2 points.
Config kde_propose(const std::vector<Observation>& history,
                   const ConfigSpace& space, Rng& rng, double gamma = 0.15,
                   int candidates = 64, double min_bandwidth = 0.05);

// One SuccessiveHalving iteration over `configs_per_iteration` sampled
// configurations, starting at the lowest rung.
TunerTrace successive_halving(const TunerObjective& objective,
                              const ConfigSpace& space,
                              const TunerConfig& config, Rng& rng);

// Repeated SuccessiveHalving until the evaluation budget is spent.
TunerTrace tune(const TunerObjective& objective, const ConfigSpace& space,
                const TunerConfig& config);

struct TunedPoint {
  double t_sim = 0.0;
  double val_regret = 0.0;
  double test_regret = 0.0;
  CanonicalKey key = 0;
  Config config;
};

struct TuneResult {
  TunerTrace trace;
  std::vector<TunedPoint> incumbents;
  std::uint64_t test_reads_during_tuning = 0;
  std::uint64_t validation_reads_during_tuning = 0;
};

// Tunes `base` over `space`; budgets are search epochs and the loss is the
// full-budget validation error of the selected architecture.
TuneResult run_tuner(OptimizerKind kind, const SearchSpaceSpec& spec,
                     const MetricSource& table, const ConfigSpace& space,
                     const TunerConfig& tuner,
                     const OptimizerConfig& base = {});

}  // namespace shotbench

#endif  // SHOTBENCH_TUNER_HPP_
