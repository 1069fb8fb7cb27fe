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

#ifndef SHOTBENCH_ANALYSIS_HPP_
#define SHOTBENCH_ANALYSIS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "shotbench/benchtab.hpp"
#include "shotbench/common.hpp"
#include "shotbench/optimizers.hpp"
#include "shotbench/space.hpp"

namespace shotbench {

struct RegretPoint {
  double t_sim = 0.0;
  int epoch = 0;
  double val_regret = 0.0;
  double test_regret = 0.0;
  CanonicalKey key = 0;  // incumbent
};

struct RegretCurve {
  OptimizerKind algorithm = OptimizerKind::kDartsSf;
  std::uint64_t seed = 0;
  std::vector<RegretPoint> points;
};

// One point per epoch for the incumbent by full-budget validation error,
// plus a closing point that adds the selection's training time.
RegretCurve regret_trajectory(const Trajectory& traj, const MetricSource& table,
                              const SearchSpaceSpec& spec);

struct AggregatePoint {
  int epoch = 0;
  double t_sim_mean = 0.0;
  double val_mean = 0.0;
  double val_std = 0.0;
  double test_mean = 0.0;
  double test_std = 0.0;
};

// Pointwise mean and population standard deviation over curves sharing an
// epoch grid.
std::vector<AggregatePoint> aggregate_runs(const std::vector<RegretCurve>& curves);

// Average ranks, 1-based; ties share the mean of their positions.
std::vector<double> mid_ranks(const std::vector<double>& values);

// Pearson correlation of mid-ranks; nullopt when either side has no rank
// variance.
std::optional<double> spearman(const std::vector<double>& xs,
                               const std::vector<double>& ys);

// (snapshot, key) -> surrogate error
using SurrogateFn = std::function<double(std::size_t snapshot, CanonicalKey key)>;

struct CorrelationMatrix {
  std::vector<int> snapshots;  // epoch labels
  std::vector<std::size_t> population_sizes;
  std::vector<std::array<std::optional<double>, kBudgets.size()>> rho;
};

// Spearman coefficient per snapshot and budget between the surrogate error and
// the table's `metric` over each snapshot's population.
CorrelationMatrix correlation_sweep(
    const std::vector<int>& snapshots,
    const std::vector<std::vector<CanonicalKey>>& populations,
    const SurrogateFn& surrogate, const MetricSource& table,
    Metric metric = Metric::kValidation);

// Keys of every loose-end-free cell, one per distinct cell.
std::vector<CanonicalKey> loose_end_free_keys(const SearchSpaceSpec& spec);

struct SweepOptions {
  int every = 10;                // snapshot every n-th epoch
  int fidelity_budget = 12;
  double noise = 0.0;            // std of the per-snapshot surrogate noise
  std::uint64_t seed = 0;
  Metric metric = Metric::kValidation;
};

// Snapshots of a recorded trajectory. Policy-based runs (enas) score 100
// samples of the snapshot policy; the others score every loose-end-free cell.
CorrelationMatrix correlate_trajectory(const Trajectory& traj,
                                       const MetricSource& table,
                                       const SearchSpaceSpec& spec,
                                       const SweepOptions& options = {});

}  // namespace shotbench

#endif  // SHOTBENCH_ANALYSIS_HPP_
