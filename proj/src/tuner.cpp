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

#include "shotbench/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "shotbench/common.hpp"

namespace shotbench {

int Dimension::levels() const {
  switch (kind) {
    case DimensionKind::kContinuous:
      return 0;
    case DimensionKind::kInteger:
      return static_cast<int>(hi - lo) + 1;
    case DimensionKind::kCategorical:
      return static_cast<int>(values.size());
  }
  return 0;
}

double Dimension::to_unit(double value) const {
  switch (kind) {
    case DimensionKind::kContinuous:
      if (log_scale) return (std::log(value) - std::log(lo)) / (std::log(hi) - std::log(lo));
      return (value - lo) / (hi - lo);
    case DimensionKind::kInteger:
      return (value - lo + 0.5) / levels();
    case DimensionKind::kCategorical: {
      const auto it = std::find(values.begin(), values.end(), value);
      return (static_cast<double>(it - values.begin()) + 0.5) / levels();
    }
  }
  return 0.0;
}

double Dimension::from_unit(double unit) const {
  unit = std::clamp(unit, 0.0, 1.0);
  switch (kind) {
    case DimensionKind::kContinuous:
      if (log_scale) {
        return std::clamp(std::exp(std::log(lo) + unit * (std::log(hi) - std::log(lo))), lo, hi);
      }
      return lo + unit * (hi - lo);
    case DimensionKind::kInteger:
      return lo + std::min(static_cast<int>(unit * levels()), levels() - 1);
    case DimensionKind::kCategorical:
      return values[std::min(static_cast<int>(unit * levels()), levels() - 1)];
  }
  return 0.0;
}

bool Dimension::contains(double value) const {
  switch (kind) {
    case DimensionKind::kContinuous:
      return value >= lo && value <= hi;
    case DimensionKind::kInteger:
      return value >= lo && value <= hi && value == std::floor(value);
    case DimensionKind::kCategorical:
      return std::find(values.begin(), values.end(), value) != values.end();
  }
  return false;
}

ConfigSpace& ConfigSpace::add_continuous(std::string name, double lo, double hi,
                                         bool log_scale) {
  if (!(lo < hi)) fail(ErrorCode::kInvalidArgument, name + ": need lo < hi");
  if (log_scale && !(lo > 0.0)) {
    fail(ErrorCode::kInvalidArgument, name + ": log scale needs lo > 0");
  }
  dims_.push_back({std::move(name), DimensionKind::kContinuous, lo, hi, log_scale, {}});
  return *this;
}

ConfigSpace& ConfigSpace::add_integer(std::string name, int lo, int hi) {
  if (!(lo < hi)) fail(ErrorCode::kInvalidArgument, name + ": need lo < hi");
  dims_.push_back({std::move(name), DimensionKind::kInteger, static_cast<double>(lo),
                   static_cast<double>(hi), false, {}});
  return *this;
}

ConfigSpace& ConfigSpace::add_categorical(std::string name,
                                          std::vector<double> values) {
  if (values.size() < 2) {
    fail(ErrorCode::kInvalidArgument, name + ": need at least two values");
  }
  dims_.push_back({std::move(name), DimensionKind::kCategorical, 0.0,
                   static_cast<double>(values.size() - 1), false, std::move(values)});
  return *this;
}

int ConfigSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

Config ConfigSpace::sample(Rng& rng) const {
  Config config;
  for (const Dimension& dim : dims_) config.push_back(dim.from_unit(rng.uniform()));
  return config;
}

bool ConfigSpace::contains(const Config& config) const {
  if (config.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!dims_[i].contains(config[i])) return false;
  }
  return true;
}

ConfigSpace config_space_preset(int number) {
  if (number < 1 || number > 3) {
    fail(ErrorCode::kInvalidArgument,
         "unknown config space " + std::to_string(number));
  }
  ConfigSpace space;
  space.add_continuous("logit_l2", 1e-5, 1e-1, true)
      .add_continuous("noise_prob", 0.0, 1.0);
  if (number >= 2) space.add_continuous("arch_lr", 1e-2, 30.0, true);
  if (number >= 3) {
    space.add_continuous("baseline_decay", 0.0, 0.99)
        .add_integer("samples_per_step", 2, 16)
        .add_continuous("tau_start", 1.0, 20.0, true)
        .add_continuous("tau_end", 0.05, 1.0, true)
        .add_categorical("fidelity_budget", {4, 12, 36, 108})
        .add_continuous("selection_noise", 0.0, 0.05);
  }
  return space;
}

OptimizerConfig apply_config(const OptimizerConfig& base,
                             const ConfigSpace& space, const Config& config) {
  if (!space.contains(config)) {
    fail(ErrorCode::kInvalidArgument, "configuration outside its space");
  }
  OptimizerConfig out = base;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const std::string& name = space.dims()[i].name;
    const double v = config[i];
    if (name == "logit_l2") out.logit_l2 = v;
    else if (name == "noise_prob") out.noise_prob = v;
    else if (name == "arch_lr") out.arch_lr = v;
    else if (name == "baseline_decay") out.baseline_decay = v;
    else if (name == "samples_per_step") out.samples_per_step = static_cast<int>(v);
    else if (name == "tau_start") out.tau_start = v;
    else if (name == "tau_end") out.tau_end = v;
    else if (name == "fidelity_budget") out.fidelity_budget = static_cast<int>(v);
    else if (name == "selection_noise") out.selection_noise = v;
    else if (name == "grad_clip") out.grad_clip = v;
    else if (name == "init_sigma") out.init_sigma = v;
    else fail(ErrorCode::kInvalidArgument, "no optimizer field named '" + name + "'");
  }
  return out;
}

std::string_view sampler_name(SamplerKind kind) {
  return kind == SamplerKind::kKde ? "kde" : "random";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "kde") return SamplerKind::kKde;
  if (name == "random") return SamplerKind::kRandom;
  fail(ErrorCode::kInvalidArgument, "unknown sampler '" + std::string(name) + "'");
}

void TunerConfig::validate() const {
  auto reject = [](const std::string& what) {
    fail(ErrorCode::kInvalidArgument, "invalid tuner config: " + what);
  };
  if (min_budget < 1 || !(min_budget < max_budget)) reject("need 1 <= min_budget < max_budget");
  if (eta < 2) reject("eta must be >= 2");
  if (!(total_evaluations > 0.0)) reject("total_evaluations must be > 0");
  if (configs_per_iteration < 1) reject("configs_per_iteration must be >= 1");
  if (!(kde_gamma > 0.0 && kde_gamma < 1.0)) reject("kde_gamma must be in (0, 1)");
  if (kde_candidates < 1) reject("kde_candidates must be >= 1");
  if (!(kde_min_bandwidth > 0.0)) reject("kde_min_bandwidth must be > 0");
  if (workers < 1) reject("workers must be >= 1");
}

std::vector<int> budget_ladder(int min_budget, int max_budget, int eta) {
  if (min_budget < 1 || min_budget > max_budget || eta < 2) {
    fail(ErrorCode::kInvalidArgument,
         "invalid budget ladder (" + std::to_string(min_budget) + ", " +
             std::to_string(max_budget) + ", " + std::to_string(eta) + ")");
  }
  std::vector<int> ladder;
  long long budget = min_budget;
  while (budget < max_budget) {
    ladder.push_back(static_cast<int>(budget));
    budget *= eta;
  }
  ladder.push_back(max_budget);
  return ladder;
}

int promoted_count(int n, int eta) { return (n + eta - 1) / eta; }

namespace {

std::string describe(const ConfigSpace& space, const Config& config) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < config.size() && i < space.size(); ++i) {
    if (i > 0) out << ", ";
    out << space.dims()[i].name << '=' << config[i];
  }
  out << '}';
  return out.str();
}

// Evaluates every config at `budget`; results come back in input order.
std::vector<ObjectiveResult> evaluate_rung(const TunerObjective& objective,
                                           const ConfigSpace& space,
                                           const std::vector<Config>& configs,
                                           int budget, int workers) {
  std::vector<ObjectiveResult> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = objective(configs[i], budget);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp<int>(workers, 1, static_cast<int>(configs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = "objective failed for config " +
                              describe(space, configs[i]) + " at budget " +
                              std::to_string(budget) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      fail(e.code(), where + e.what());
    } catch (const std::exception& e) {
      fail(ErrorCode::kInvalidArgument, where + e.what());
    }
  }
  return results;
}

struct Scheduler {
  const TunerObjective& objective;
  const ConfigSpace& space;
  const TunerConfig& config;
  TunerTrace trace;
  double t_sim = 0.0;
  int next_config_id = 0;

  std::vector<Observation> history() const {
    // Observations at the largest budget with enough points for a model.
    const std::size_t needed = space.size() + 2;
    std::vector<int> budgets;
    for (const auto& e : trace.evaluations) budgets.push_back(e.budget);
    std::sort(budgets.begin(), budgets.end());
    budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
    for (auto b = budgets.rbegin(); b != budgets.rend(); ++b) {
      std::vector<Observation> out;
      for (const auto& e : trace.evaluations) {
        if (e.budget == *b) out.push_back({e.config, e.result.loss});
      }
      if (out.size() >= needed) return out;
    }
    return {};
  }

  Config propose(Rng& rng, const std::vector<Observation>& model) const {
    if (config.sampler == SamplerKind::kRandom) return space.sample(rng);
    return kde_propose(model, space, rng, config.kde_gamma,
                       config.kde_candidates, config.kde_min_bandwidth);
  }

  void iteration(Rng& rng, int start_rung) {
    const std::vector<int> ladder =
        budget_ladder(config.min_budget, config.max_budget, config.eta);
    int n = config.configs_per_iteration;
    for (int r = 0; r < start_rung; ++r) n = promoted_count(n, config.eta);

    const std::vector<Observation> model = history();
    std::vector<Config> configs;
    std::vector<int> ids;
    for (int i = 0; i < n; ++i) {
      configs.push_back(propose(rng, model));
      ids.push_back(next_config_id++);
    }

    std::vector<int> populations;
    for (std::size_t rung = start_rung; rung < ladder.size() && !configs.empty(); ++rung) {
      const int budget = ladder[rung];
      populations.push_back(static_cast<int>(configs.size()));
      const auto results =
          evaluate_rung(objective, space, configs, budget, config.workers);
      for (std::size_t i = 0; i < configs.size(); ++i) {
        t_sim += results[i].cost;
        trace.spent_evaluations += static_cast<double>(budget) / config.max_budget;
        trace.evaluations.push_back({ids[i], trace.iterations, static_cast<int>(rung),
                                     budget, configs[i], results[i], t_sim});
        const double loss = results[i].loss;
        if (trace.incumbents.empty() || loss < trace.incumbents.back().loss) {
          trace.incumbents.push_back(
              {t_sim, loss, static_cast<int>(trace.evaluations.size()) - 1});
        }
      }
      if (rung + 1 == ladder.size()) break;
      std::vector<int> order(configs.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return results[a].loss < results[b].loss;
      });
      order.resize(promoted_count(static_cast<int>(configs.size()), config.eta));
      std::sort(order.begin(), order.end());
      std::vector<Config> kept;
      std::vector<int> kept_ids;
      for (int i : order) {
        kept.push_back(configs[i]);
        kept_ids.push_back(ids[i]);
      }
      configs = std::move(kept);
      ids = std::move(kept_ids);
    }
    trace.rung_populations.push_back(std::move(populations));
    ++trace.iterations;
  }
};

double gaussian_density(double x, double mean, double bandwidth) {
  const double z = (x - mean) / bandwidth;
  return std::exp(-0.5 * z * z) / bandwidth;
}

struct UnitKde {
  std::vector<std::vector<double>> points;  // unit coordinates
  std::vector<double> bandwidth;            // per dimension

  UnitKde(std::vector<std::vector<double>> pts, std::size_t dims, double floor)
      : points(std::move(pts)), bandwidth(dims, floor) {
    const double n = static_cast<double>(points.size());
    for (std::size_t d = 0; d < dims; ++d) {
      double mean = 0.0;
      for (const auto& p : points) mean += p[d];
      mean /= n;
      double var = 0.0;
      for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
      const double sigma = std::sqrt(var / n);
      bandwidth[d] = std::max(floor, sigma * std::pow(n, -0.2));
    }
  }

  double density(const std::vector<double>& x) const {
    double total = 0.0;
    for (const auto& p : points) {
      double k = 1.0;
      for (std::size_t d = 0; d < x.size(); ++d) {
        k *= gaussian_density(x[d], p[d], bandwidth[d]);
      }
      total += k;
    }
    return total / static_cast<double>(points.size());
  }

  std::vector<double> sample(Rng& rng) const {
    const auto& centre = points[rng.below(points.size())];
    std::vector<double> x(centre.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
      do {
        x[d] = centre[d] + bandwidth[d] * rng.normal();
      } while (x[d] < 0.0 || x[d] > 1.0);
    }
    return x;
  }
};

}  // namespace

Config kde_propose(const std::vector<Observation>& history,
                   const ConfigSpace& space, Rng& rng, double gamma,
                   int candidates, double min_bandwidth) {
  const std::size_t dims = space.size();
  if (history.size() < dims + 2) return space.sample(rng);

  std::vector<int> order(history.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return history[a].loss < history[b].loss;
  });
  const std::size_t n_good = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(gamma * history.size())), 1,
      history.size() - 1);
  auto to_unit = [&](const Config& c) {
    std::vector<double> u(dims);
    for (std::size_t d = 0; d < dims; ++d) u[d] = space.dims()[d].to_unit(c[d]);
    return u;
  };
  std::vector<std::vector<double>> good, bad;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_good ? good : bad).push_back(to_unit(history[order[i]].config));
  }
  const UnitKde good_kde(std::move(good), dims, min_bandwidth);
  const UnitKde bad_kde(std::move(bad), dims, min_bandwidth);

  std::vector<double> best;
  double best_ratio = -1.0;
  for (int c = 0; c < candidates; ++c) {
    std::vector<double> x = good_kde.sample(rng);
    const double ratio = good_kde.density(x) / std::max(bad_kde.density(x), 1e-300);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = std::move(x);
    }
  }
  Config out(dims);
  for (std::size_t d = 0; d < dims; ++d) out[d] = space.dims()[d].from_unit(best[d]);
  return out;
}

TunerTrace successive_halving(const TunerObjective& objective,
                              const ConfigSpace& space,
                              const TunerConfig& config, Rng& rng) {
  config.validate();
  Scheduler scheduler{objective, space, config, {}};
  scheduler.iteration(rng, 0);
  return std::move(scheduler.trace);
}

TunerTrace tune(const TunerObjective& objective, const ConfigSpace& space,
                const TunerConfig& config) {
  config.validate();
  const int rungs = static_cast<int>(
      budget_ladder(config.min_budget, config.max_budget, config.eta).size());
  Rng rng(config.seed);
  Scheduler scheduler{objective, space, config, {}};
  while (scheduler.trace.spent_evaluations < config.total_evaluations) {
    const int start = config.hyperband ? scheduler.trace.iterations % rungs : 0;
    scheduler.iteration(rng, start);
  }
  return std::move(scheduler.trace);
}

TuneResult run_tuner(OptimizerKind kind, const SearchSpaceSpec& spec,
                     const MetricSource& table, const ConfigSpace& space,
                     const TunerConfig& tuner, const OptimizerConfig& base) {
  check_coverage(table, spec);
  AuditedSource audited(table);
  TuneResult out;
  // Each configuration seeds its own run from its values, so reruns at larger
  // budgets and parallel evaluation stay deterministic.
  const TunerObjective objective = [&](const Config& config, int budget) {
    std::uint64_t stream = 0;
    for (double v : config) stream = mix64(stream ^ std::bit_cast<std::uint64_t>(v));
    OptimizerConfig run = apply_config(base, space, config);
    run.kind = kind;
    run.epochs = budget;
    run.seed = split_seed(tuner.seed, stream);
    run.record_test = false;
    run.record_weights = false;
    const Trajectory traj = run_search(spec, audited, run);
    return ObjectiveResult{traj.selection.val_full,
                           traj.selection.t_search + traj.selection_train_time,
                           traj.selection.key};
  };
  out.trace = tune(objective, space, tuner);
  out.test_reads_during_tuning = audited.test_reads();
  out.validation_reads_during_tuning = audited.validation_reads();

  const double best_val = best_in_space(table, spec, kFullBudget, Metric::kValidation).value;
  const double best_test = best_in_space(table, spec, kFullBudget, Metric::kTest).value;
  for (const TunerIncumbent& inc : out.trace.incumbents) {
    const TunerEvaluation& e = out.trace.evaluations[inc.evaluation];
    const CanonicalKey key = e.result.tag;
    out.incumbents.push_back({inc.t_sim, e.result.loss - best_val,
                              table.test_error(key, kFullBudget) - best_test, key,
                              e.config});
  }
  return out;
}

}  // namespace shotbench
