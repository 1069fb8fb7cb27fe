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

#include "shotbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "shotbench/enumeration.hpp"
#include "shotbench/relax.hpp"
#include "shotbench/rng.hpp"

namespace shotbench {

RegretCurve regret_trajectory(const Trajectory& traj, const MetricSource& table,
                              const SearchSpaceSpec& spec) {
  const double best_val =
      best_in_space(table, spec, kFullBudget, Metric::kValidation).value;
  const double best_test =
      best_in_space(table, spec, kFullBudget, Metric::kTest).value;
  RegretCurve curve;
  curve.algorithm = traj.kind;
  curve.seed = traj.seed;

  std::optional<CanonicalKey> incumbent;
  double incumbent_val = 0.0;
  auto consider = [&](CanonicalKey key) {
    if (!table.contains(key)) {
      fail(ErrorCode::kNotFound, "table is missing key " + key_to_hex(key));
    }
    const double val = table.validation_error(key, kFullBudget);
    if (!incumbent || val < incumbent_val) {
      incumbent = key;
      incumbent_val = val;
    }
  };
  auto point = [&](double t_sim, int epoch) {
    return RegretPoint{t_sim, epoch, incumbent_val - best_val,
                       table.test_error(*incumbent, kFullBudget) - best_test,
                       *incumbent};
  };
  for (const TrajectoryEntry& e : traj.epochs) {
    consider(e.key);
    curve.points.push_back(point(e.t_search, e.epoch));
  }
  consider(traj.selection.key);
  curve.points.push_back(point(
      traj.selection.t_search + traj.selection_train_time, traj.selection.epoch));
  return curve;
}

std::vector<AggregatePoint> aggregate_runs(const std::vector<RegretCurve>& curves) {
  if (curves.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "aggregation needs at least two curves");
  }
  const auto& grid = curves.front().points;
  for (const RegretCurve& c : curves) {
    bool same = c.points.size() == grid.size();
    for (std::size_t i = 0; same && i < grid.size(); ++i) {
      same = c.points[i].epoch == grid[i].epoch;
    }
    if (!same) fail(ErrorCode::kInvalidArgument, "curves have different epoch grids");
  }
  const double n = static_cast<double>(curves.size());
  auto mean_std = [&](std::size_t i, auto field) {
    double mean = 0.0;
    for (const RegretCurve& c : curves) mean += field(c.points[i]);
    mean /= n;
    double var = 0.0;
    for (const RegretCurve& c : curves) {
      const double d = field(c.points[i]) - mean;
      var += d * d;
    }
    return std::pair{mean, std::sqrt(var / n)};
  };
  std::vector<AggregatePoint> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    AggregatePoint p;
    p.epoch = grid[i].epoch;
    p.t_sim_mean = mean_std(i, [](const RegretPoint& q) { return q.t_sim; }).first;
    std::tie(p.val_mean, p.val_std) =
        mean_std(i, [](const RegretPoint& q) { return q.val_regret; });
    std::tie(p.test_mean, p.test_std) =
        mean_std(i, [](const RegretPoint& q) { return q.test_regret; });
    out.push_back(p);
  }
  return out;
}

std::vector<double> mid_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    fail(ErrorCode::kInvalidArgument, "spearman: length mismatch");
  }
  if (xs.size() < 2) fail(ErrorCode::kInvalidArgument, "spearman: need >= 2 values");
  const std::vector<double> rx = mid_ranks(xs);
  const std::vector<double> ry = mid_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mean = (n + 1.0) / 2.0;  // mid-ranks always average to this
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_sweep(
    const std::vector<int>& snapshots,
    const std::vector<std::vector<CanonicalKey>>& populations,
    const SurrogateFn& surrogate, const MetricSource& table, Metric metric) {
  if (snapshots.size() != populations.size()) {
    fail(ErrorCode::kInvalidArgument, "one population per snapshot expected");
  }
  CorrelationMatrix out;
  out.snapshots = snapshots;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const auto& keys = populations[s];
    std::vector<double> scores;
    for (CanonicalKey key : keys) {
      if (!table.contains(key)) {
        fail(ErrorCode::kNotFound, "table is missing key " + key_to_hex(key));
      }
      scores.push_back(surrogate(s, key));
    }
    std::array<std::optional<double>, kBudgets.size()> row;
    for (std::size_t b = 0; b < kBudgets.size(); ++b) {
      std::vector<double> truth;
      for (CanonicalKey key : keys) {
        truth.push_back(metric == Metric::kValidation
                            ? table.validation_error(key, kBudgets[b])
                            : table.test_error(key, kBudgets[b]));
      }
      row[b] = spearman(scores, truth);
    }
    out.population_sizes.push_back(keys.size());
    out.rho.push_back(row);
  }
  return out;
}

std::vector<CanonicalKey> loose_end_free_keys(const SearchSpaceSpec& spec) {
  std::vector<CanonicalKey> keys;
  for (const PrunedCell& cell : loose_end_free_cells(spec)) keys.push_back(cell.key);
  return keys;
}

CorrelationMatrix correlate_trajectory(const Trajectory& traj,
                                       const MetricSource& table,
                                       const SearchSpaceSpec& spec,
                                       const SweepOptions& options) {
  if (options.every < 1) fail(ErrorCode::kInvalidArgument, "snapshot interval must be >= 1");
  checked_budget_index(options.fidelity_budget);
  if (traj.space != spec.number()) {
    fail(ErrorCode::kInvalidArgument, "trajectory belongs to another space");
  }
  const bool policy = traj.kind == OptimizerKind::kEnasPg;
  std::vector<int> snapshots;
  std::vector<std::vector<CanonicalKey>> populations;
  const std::vector<CanonicalKey> all_keys =
      policy ? std::vector<CanonicalKey>{} : loose_end_free_keys(spec);
  for (const TrajectoryEntry& e : traj.epochs) {
    if ((e.epoch + 1) % options.every != 0) continue;
    snapshots.push_back(e.epoch + 1);
    if (!policy) {
      populations.push_back(all_keys);
      continue;
    }
    ArchWeights weights(spec);
    if (e.weights.size() != weights.size()) {
      fail(ErrorCode::kInvalidArgument,
           "policy snapshot at epoch " + std::to_string(e.epoch) + " has no weights");
    }
    weights.assign_flat(e.weights);
    Rng rng(split_seed(options.seed, static_cast<std::uint64_t>(e.epoch)));
    std::vector<CanonicalKey> keys;
    for (int i = 0; i < kEnasFinalSamples; ++i) {
      keys.push_back(lookup_key(sample_architecture(weights, rng)));
    }
    populations.push_back(std::move(keys));
  }
  const SurrogateFn surrogate = [&](std::size_t s, CanonicalKey key) {
    double value = table.validation_error(key, options.fidelity_budget);
    if (options.noise > 0.0) {
      const std::uint64_t h = mix64(split_seed(options.seed, snapshots[s]) ^ key);
      const double u1 = unit_from_bits(h);
      const double u2 = unit_from_bits(mix64(h));
      value += options.noise * std::sqrt(-2.0 * std::log(1.0 - u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
    return value;
  };
  return correlation_sweep(snapshots, populations, surrogate, table, options.metric);
}

}  // namespace shotbench
