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

#include "shotbench/optimizers.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "shotbench/enumeration.hpp"

namespace shotbench {

namespace {

// Sub-seed streams of a run.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kSampleStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kSelectStream = 4;

// Share of an epoch charged for scoring a cell with shared weights
// (a forward pass instead of a training epoch).
constexpr double kEvalPassFraction = 0.1;

std::uint64_t pack_choice(const CellChoice& choice) {
  std::uint64_t code = 0;
  for (std::uint32_t mask : choice.parent_sets) code = (code << 7) | mask;
  for (Op op : choice.ops) code = (code << 2) | static_cast<std::uint64_t>(op);
  return code;
}

// Benchmark access shared by all optimizers: memoized lookup keys, fidelity
// noise, and simulated search-time accounting.
class Evaluator {
 public:
  Evaluator(const SearchSpaceSpec& spec, const MetricSource& source,
            const OptimizerConfig& config)
      : spec_(spec),
        source_(source),
        config_(config),
        noise_rng_(split_seed(config.seed, kNoiseStream)) {}

  CanonicalKey key(const CellChoice& choice) {
    const std::uint64_t packed = pack_choice(choice);
    const auto it = keys_.find(packed);
    if (it != keys_.end()) return it->second;
    const CanonicalKey key = lookup_key(to_architecture(spec_, choice));
    if (!source_.contains(key)) {
      fail(ErrorCode::kNotFound,
           "table is missing key " + key_to_hex(key) + " for " +
               to_architecture(spec_, choice).to_text());
    }
    keys_.emplace(packed, key);
    return key;
  }

  // Stand-in for the one-shot validation error. Charges `epochs` epochs of
  // training at the fidelity budget.
  double fidelity(const CellChoice& choice, double epochs = 1.0) {
    const CanonicalKey k = key(choice);
    const int budget = config_.fidelity_budget;
    double value = source_.validation_error(k, budget);
    if (config_.noise_prob > 0.0 && noise_rng_.uniform() < config_.noise_prob) {
      value += config_.selection_noise * noise_rng_.normal();
    }
    t_search_ += epochs * source_.training_time(k, budget) / budget;
    ++evaluations_;
    return value;
  }

  // Full-budget validation error; `train` charges the full training run.
  double full_validation(const CellChoice& choice, bool train) {
    const CanonicalKey k = key(choice);
    if (train) {
      t_search_ += source_.training_time(k, kFullBudget);
      ++evaluations_;
    }
    return source_.validation_error(k, kFullBudget);
  }

  void charge(double seconds) { t_search_ += seconds; }
  double t_search() const noexcept { return t_search_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }
  Rng& noise_rng() { return noise_rng_; }

  TrajectoryEntry entry(int epoch, const CellChoice& choice, double objective,
                        const ArchWeights* weights) {
    TrajectoryEntry e;
    e.epoch = epoch;
    e.arch = to_architecture(spec_, choice);
    e.key = key(choice);
    e.objective = objective;
    e.val_full = source_.validation_error(e.key, kFullBudget);
    if (config_.record_test) e.test_full = source_.test_error(e.key, kFullBudget);
    e.t_search = t_search_;
    if (weights != nullptr && config_.record_weights) e.weights = weights->flat();
    return e;
  }

  void finish(Trajectory& traj, const TrajectoryEntry& selected) {
    traj.selection = selected;
    traj.selection.epoch = static_cast<int>(traj.epochs.size());
    traj.selection.t_search = t_search_;
    traj.selection_train_time = source_.training_time(selected.key, kFullBudget);
    traj.evaluations = evaluations_;
  }

 private:
  const SearchSpaceSpec& spec_;
  const MetricSource& source_;
  const OptimizerConfig& config_;
  Rng noise_rng_;
  std::unordered_map<std::uint64_t, CanonicalKey> keys_;
  double t_search_ = 0.0;
  std::uint64_t evaluations_ = 0;
};

Trajectory new_trajectory(const SearchSpaceSpec& spec,
                          const OptimizerConfig& config) {
  config.validate();
  Trajectory traj;
  traj.kind = config.kind;
  traj.space = spec.number();
  traj.seed = config.seed;
  return traj;
}

ArchWeights initial_weights(const SearchSpaceSpec& spec,
                            const OptimizerConfig& config) {
  if (config.init_sigma == 0.0) return ArchWeights(spec);
  return init_weights(spec, InitScheme::gaussian(config.init_sigma),
                      split_seed(config.seed, kInitStream));
}

void clip_gradient(ArchWeights& grad, double threshold) {
  if (threshold <= 0.0) return;
  double norm = 0.0;
  for (double g : grad.flat()) norm += g * g;
  norm = std::sqrt(norm);
  if (norm > threshold) grad.scale(threshold / norm);
}

// w <- (w - lr * g) / (1 + 2 * lr * l2): the gradient step followed by the
// exact proximal step of the L2 penalty l2 * |w|^2.
void descend(ArchWeights& weights, ArchWeights grad,
             const OptimizerConfig& config) {
  clip_gradient(grad, config.grad_clip);
  weights.add_scaled(grad, -config.arch_lr);
  if (config.logit_l2 > 0.0) {
    weights.scale(1.0 / (1.0 + 2.0 * config.arch_lr * config.logit_l2));
  }
}

// Per-decision probabilities of every option, in enumeration order.
struct FactorTable {
  std::vector<std::vector<double>> parent_probs;  // per node 1..B+1
  std::vector<std::vector<double>> op_probs;      // per block
};

FactorTable factor_table(const ArchWeights& weights) {
  const SearchSpaceSpec& spec = weights.spec();
  FactorTable table;
  for (int node = 1; node <= spec.output_node(); ++node) {
    const std::size_t d = node == spec.output_node()
                              ? weights.num_decisions() - 1
                              : static_cast<std::size_t>(2 * (node - 1));
    const std::vector<double> probs = softmax(weights.logits(d));
    std::vector<double> per_option;
    for (std::uint32_t mask : parent_set_options(spec, node)) {
      per_option.push_back(subset_probability(probs, mask));
    }
    table.parent_probs.push_back(std::move(per_option));
  }
  for (int block = 1; block <= spec.num_choice_blocks(); ++block) {
    table.op_probs.push_back(softmax(weights.beta(block)));
  }
  return table;
}

// Calls visit(index, probability) for every choice tuple.
template <typename Visit>
void for_each_choice_probability(const ArchWeights& weights, Visit&& visit) {
  const FactorTable table = factor_table(weights);
  const std::size_t nodes = table.parent_probs.size();
  const std::size_t blocks = table.op_probs.size();
  std::vector<int> digits(nodes + blocks, 0);
  std::vector<std::size_t> radix;
  for (const auto& p : table.parent_probs) radix.push_back(p.size());
  for (std::size_t b = 0; b < blocks; ++b) radix.push_back(kNumOps);
  std::uint64_t index = 0;
  while (true) {
    double p = 1.0;
    for (std::size_t i = 0; i < nodes; ++i) p *= table.parent_probs[i][digits[i]];
    for (std::size_t b = 0; b < blocks; ++b) p *= table.op_probs[b][digits[nodes + b]];
    visit(index, p);
    ++index;
    int pos = static_cast<int>(digits.size()) - 1;
    while (pos >= 0 && ++digits[pos] == static_cast<int>(radix[pos])) {
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

void require_enumerable(const SearchSpaceSpec& spec) {
  if (raw_choice_count(spec) > ChoiceValues::kMaxChoices) {
    fail(ErrorCode::kOutOfRange,
         "space too large for exact expectation; use the estimator");
  }
}

}  // namespace

std::string_view optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kDartsSf:
      return "darts";
    case OptimizerKind::kGdas:
      return "gdas";
    case OptimizerKind::kEnasPg:
      return "enas";
    case OptimizerKind::kRandomWs:
      return "randomws";
    case OptimizerKind::kRandomSearch:
      return "rs";
    case OptimizerKind::kRegEvolution:
      return "re";
  }
  return "unknown";
}

std::vector<OptimizerKind> all_optimizers() {
  return {OptimizerKind::kDartsSf,  OptimizerKind::kGdas,
          OptimizerKind::kEnasPg,   OptimizerKind::kRandomWs,
          OptimizerKind::kRandomSearch, OptimizerKind::kRegEvolution};
}

OptimizerKind parse_optimizer(std::string_view name) {
  for (OptimizerKind kind : all_optimizers()) {
    if (optimizer_name(kind) == name) return kind;
  }
  fail(ErrorCode::kInvalidArgument,
       "unknown optimizer '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
  auto reject = [](const std::string& what) {
    fail(ErrorCode::kInvalidArgument, "invalid optimizer config: " + what);
  };
  if (epochs < 1) reject("epochs must be >= 1");
  if (!(arch_lr >= 0.0) || !std::isfinite(arch_lr)) reject("arch_lr must be >= 0");
  if (!(logit_l2 >= 0.0)) reject("logit_l2 must be >= 0");
  if (samples_per_step < 1) reject("samples_per_step must be >= 1");
  if (kind == OptimizerKind::kDartsSf && !exact_gradient && samples_per_step < 2) {
    reject("the score-function estimator needs samples_per_step >= 2");
  }
  if (!(tau_end > 0.0) || !(tau_start >= tau_end)) {
    reject("need tau_start >= tau_end > 0");
  }
  if (!(baseline_decay >= 0.0 && baseline_decay < 1.0)) {
    reject("baseline_decay must be in [0, 1)");
  }
  if (population < 1 || tournament < 1 || tournament > population) {
    reject("need 1 <= tournament <= population");
  }
  if (budget_index(fidelity_budget) < 0) reject("fidelity_budget must be 4, 12, 36 or 108");
  if (!(noise_prob >= 0.0 && noise_prob <= 1.0)) reject("noise_prob must be in [0, 1]");
  if (!(selection_noise >= 0.0)) reject("selection_noise must be >= 0");
  if (!(grad_clip >= 0.0)) reject("grad_clip must be >= 0");
  if (!(init_sigma >= 0.0)) reject("init_sigma must be >= 0");
}

ChoiceValues::ChoiceValues(const SearchSpaceSpec& spec,
                           const MetricSource& source, int budget)
    : spec_(spec) {
  require_enumerable(spec);
  checked_budget_index(budget);
  values_.reserve(raw_choice_count(spec));
  ChoiceEnumerator cursor(spec);
  CellChoice choice;
  std::unordered_map<CanonicalKey, double> cache;
  while (cursor.next(choice)) {
    const CanonicalKey key = lookup_key(to_architecture(spec, choice));
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, source.validation_error(key, budget)).first;
    }
    values_.push_back(it->second);
  }
}

double exact_expected_error(const ArchWeights& weights,
                            const ChoiceValues& values) {
  if (!(weights.spec() == values.spec())) {
    fail(ErrorCode::kInvalidArgument, "weights and values differ in space");
  }
  double total = 0.0;
  for_each_choice_probability(weights, [&](std::uint64_t index, double p) {
    total += p * values.value(index);
  });
  return total;
}

double exact_expected_error(const ArchWeights& weights,
                            const MetricSource& source, int budget) {
  require_enumerable(weights.spec());
  return exact_expected_error(weights,
                              ChoiceValues(weights.spec(), source, budget));
}

double total_probability(const ArchWeights& weights) {
  require_enumerable(weights.spec());
  double total = 0.0;
  for_each_choice_probability(weights,
                              [&](std::uint64_t, double p) { total += p; });
  return total;
}

ArchWeights exact_gradient(const ArchWeights& weights,
                           const ChoiceValues& values) {
  const SearchSpaceSpec& spec = weights.spec();
  ArchWeights grad(spec);
  std::vector<double> probs(values.size());
  for_each_choice_probability(weights, [&](std::uint64_t index, double p) {
    probs[index] = p;
  });
  for (std::uint64_t index = 0; index < probs.size(); ++index) {
    if (probs[index] == 0.0) continue;
    const CellChoice choice = choice_from_index(spec, index);
    grad.add_scaled(grad_log_probability(weights, choice),
                    probs[index] * values.value(index));
  }
  return grad;
}

ScoreEstimate score_function_gradient(const ArchWeights& weights,
                                      const ErrorFn& error, int n_samples,
                                      Rng& rng) {
  if (n_samples < 2) {
    fail(ErrorCode::kInvalidArgument,
         "score-function estimate needs at least 2 samples");
  }
  std::vector<CellChoice> samples;
  std::vector<double> errors;
  for (int s = 0; s < n_samples; ++s) {
    samples.push_back(sample_choice(weights, rng));
    errors.push_back(error(samples.back()));
  }
  const double sum = std::accumulate(errors.begin(), errors.end(), 0.0);
  ScoreEstimate est{ArchWeights(weights.spec()), sum / n_samples};
  for (int s = 0; s < n_samples; ++s) {
    const double baseline = (sum - errors[s]) / (n_samples - 1);
    const double advantage = errors[s] - baseline;
    if (advantage == 0.0) continue;
    est.gradient.add_scaled(grad_log_probability(weights, samples[s]),
                            advantage / n_samples);
  }
  return est;
}

ScoreEstimate score_function_gradient(const ArchWeights& weights,
                                      const MetricSource& source, int budget,
                                      int n_samples, Rng& rng) {
  checked_budget_index(budget);
  const SearchSpaceSpec& spec = weights.spec();
  return score_function_gradient(
      weights,
      [&](const CellChoice& choice) {
        return source.validation_error(lookup_key(to_architecture(spec, choice)),
                                       budget);
      },
      n_samples, rng);
}

double gdas_temperature(const OptimizerConfig& config, int epoch) {
  if (config.epochs <= 1) return config.tau_start;
  const double t = static_cast<double>(epoch) / (config.epochs - 1);
  return config.tau_start + (config.tau_end - config.tau_start) * t;
}

Trajectory run_darts_sf(const SearchSpaceSpec& spec, const MetricSource& source,
                        const OptimizerConfig& config) {
  Trajectory traj = new_trajectory(spec, config);
  Evaluator eval(spec, source, config);
  ArchWeights weights = initial_weights(spec, config);
  Rng rng(split_seed(config.seed, kSampleStream));
  std::optional<ChoiceValues> exact;
  if (config.exact_gradient) {
    exact.emplace(spec, source, config.fidelity_budget);
  }
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double objective = 0.0;
    if (exact) {
      ArchWeights grad = exact_gradient(weights, *exact);
      // The relaxed model trains every path; charge one epoch of the
      // current discretization.
      eval.fidelity(discretize_choice(weights));
      descend(weights, std::move(grad), config);
      objective = exact_expected_error(weights, *exact);
    } else {
      ScoreEstimate est = score_function_gradient(
          weights, [&](const CellChoice& c) { return eval.fidelity(c); },
          config.samples_per_step, rng);
      descend(weights, std::move(est.gradient), config);
      objective = est.objective;
    }
    traj.epochs.push_back(
        eval.entry(epoch, discretize_choice(weights), objective, &weights));
  }
  eval.finish(traj, traj.epochs.back());
  return traj;
}

Trajectory run_gdas(const SearchSpaceSpec& spec, const MetricSource& source,
                    const OptimizerConfig& config) {
  Trajectory traj = new_trajectory(spec, config);
  Evaluator eval(spec, source, config);
  ArchWeights weights = initial_weights(spec, config);
  Rng rng(split_seed(config.seed, kSampleStream));
  std::optional<double> baseline;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double tau = gdas_temperature(config, epoch);
    double total = 0.0;
    for (int step = 0; step < config.samples_per_step; ++step) {
      // Single path drawn from the tempered distribution softmax(logits/tau).
      ArchWeights tempered = weights;
      tempered.scale(1.0 / tau);
      const GumbelSample sample = gumbel_softmax(tempered, tau, rng);
      const CellChoice path = choice_from_selection(spec, sample.hard);
      const double err = eval.fidelity(path);
      total += err;
      if (!baseline) baseline = err;
      const double advantage = err - *baseline;
      *baseline = config.baseline_decay * *baseline +
                  (1.0 - config.baseline_decay) * err;
      ArchWeights grad = grad_log_probability(tempered, path);
      grad.scale(advantage / tau);
      descend(weights, std::move(grad), config);
    }
    traj.epochs.push_back(eval.entry(epoch, discretize_choice(weights),
                                     total / config.samples_per_step,
                                     &weights));
  }
  eval.finish(traj, traj.epochs.back());
  return traj;
}

Trajectory run_enas_pg(const SearchSpaceSpec& spec, const MetricSource& source,
                       const OptimizerConfig& config) {
  Trajectory traj = new_trajectory(spec, config);
  Evaluator eval(spec, source, config);
  ArchWeights policy = initial_weights(spec, config);
  Rng rng(split_seed(config.seed, kSampleStream));
  std::optional<double> baseline;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double total = 0.0;
    for (int step = 0; step < config.samples_per_step; ++step) {
      const CellChoice arch = sample_choice(policy, rng);
      const double err = eval.fidelity(arch);
      total += err;
      const double reward = -err;
      if (!baseline) baseline = reward;
      const double advantage = reward - *baseline;
      *baseline = config.baseline_decay * *baseline +
                  (1.0 - config.baseline_decay) * reward;
      // Ascent on expected reward.
      ArchWeights grad = grad_log_probability(policy, arch);
      grad.scale(-advantage);
      descend(policy, std::move(grad), config);
    }
    traj.epochs.push_back(eval.entry(epoch, discretize_choice(policy),
                                     total / config.samples_per_step, &policy));
  }

  // Rank controller samples by their fidelity error.
  std::optional<CellChoice> best;
  double best_score = 0.0;
  for (int i = 0; i < kEnasFinalSamples; ++i) {
    const CellChoice candidate = sample_choice(policy, rng);
    const double score = eval.fidelity(candidate, kEvalPassFraction);
    traj.candidate_pool.push_back(eval.key(candidate));
    traj.candidate_scores.push_back(score);
    if (!best || score < best_score) {
      best = candidate;
      best_score = score;
    }
  }
  eval.finish(traj, eval.entry(config.epochs, *best, best_score, &policy));
  return traj;
}

Trajectory run_random_ws(const SearchSpaceSpec& spec,
                         const MetricSource& source,
                         const OptimizerConfig& config) {
  Trajectory traj = new_trajectory(spec, config);
  Evaluator eval(spec, source, config);
  Rng rng(split_seed(config.seed, kSampleStream));
  std::optional<CellChoice> incumbent;
  double incumbent_score = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int step = 0; step < config.samples_per_step; ++step) {
      const CellChoice arch = sample_uniform_choice(spec, rng);
      const double score = eval.fidelity(arch);
      if (!incumbent || score < incumbent_score) {
        incumbent = arch;
        incumbent_score = score;
      }
    }
    traj.epochs.push_back(eval.entry(epoch, *incumbent, incumbent_score, nullptr));
  }

  Rng select_rng(split_seed(config.seed, kSelectStream));
  std::vector<CellChoice> pool;
  for (int i = 0; i < kRandomWsPool; ++i) {
    pool.push_back(sample_uniform_choice(spec, rng));
    const CanonicalKey key = eval.key(pool.back());
    double score = source.validation_error(key, config.fidelity_budget);
    if (config.selection_noise > 0.0) {
      score += config.selection_noise * select_rng.normal();
    }
    eval.charge(kEvalPassFraction *
                source.training_time(key, config.fidelity_budget) /
                config.fidelity_budget);
    traj.candidate_pool.push_back(key);
    traj.candidate_scores.push_back(score);
  }
  std::vector<int> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return traj.candidate_scores[a] < traj.candidate_scores[b];
  });
  order.resize(kRandomWsShortlist);

  int best = -1;
  double best_val = 0.0;
  for (int i : order) {
    traj.shortlist.push_back(traj.candidate_pool[i]);
    const double val = eval.full_validation(pool[i], true);
    if (best < 0 || val < best_val) {
      best = i;
      best_val = val;
    }
  }
  eval.finish(traj, eval.entry(config.epochs, pool[best],
                               traj.candidate_scores[best], nullptr));
  return traj;
}

Trajectory run_random_search(const SearchSpaceSpec& spec,
                             const MetricSource& source,
                             const OptimizerConfig& config) {
  Trajectory traj = new_trajectory(spec, config);
  Evaluator eval(spec, source, config);
  Rng rng(split_seed(config.seed, kSampleStream));
  std::optional<CellChoice> incumbent;
  double incumbent_val = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int step = 0; step < config.samples_per_step; ++step) {
      const CellChoice arch = sample_uniform_choice(spec, rng);
      const double val = eval.full_validation(arch, true);
      if (!incumbent || val < incumbent_val) {
        incumbent = arch;
        incumbent_val = val;
      }
    }
    traj.epochs.push_back(eval.entry(epoch, *incumbent, incumbent_val, nullptr));
  }
  eval.finish(traj, traj.epochs.back());
  return traj;
}

CellChoice mutate_choice(const SearchSpaceSpec& spec, const CellChoice& parent,
                         Rng& rng) {
  CellChoice child = parent;
  std::vector<int> mutable_nodes;
  for (int node = 1; node <= spec.output_node(); ++node) {
    if (parent_set_options(spec, node).size() > 1) mutable_nodes.push_back(node);
  }
  const bool mutate_op = rng.uniform() < 0.5 || mutable_nodes.empty();
  if (mutate_op) {
    const auto block = rng.below(spec.num_choice_blocks());
    const int current = static_cast<int>(child.ops[block]);
    const int shift = 1 + static_cast<int>(rng.below(kNumOps - 1));
    child.ops[block] = static_cast<Op>((current + shift) % kNumOps);
  } else {
    const int node = mutable_nodes[rng.below(mutable_nodes.size())];
    std::vector<std::uint32_t> options = parent_set_options(spec, node);
    std::erase(options, parent.parent_sets[node - 1]);
    child.parent_sets[node - 1] = options[rng.below(options.size())];
  }
  return child;
}

Trajectory run_regularized_evolution(const SearchSpaceSpec& spec,
                                     const MetricSource& source,
                                     const OptimizerConfig& config) {
  Trajectory traj = new_trajectory(spec, config);
  Evaluator eval(spec, source, config);
  Rng rng(split_seed(config.seed, kSampleStream));
  struct Member {
    CellChoice choice;
    double val;
  };
  std::deque<Member> population;
  std::optional<Member> incumbent;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int step = 0; step < config.samples_per_step; ++step) {
      CellChoice child;
      if (static_cast<int>(population.size()) < config.population) {
        child = sample_uniform_choice(spec, rng);
      } else {
        // Tournament among distinct random members.
        std::vector<int> idx(population.size());
        std::iota(idx.begin(), idx.end(), 0);
        const Member* parent = nullptr;
        for (int t = 0; t < config.tournament; ++t) {
          const auto pick = t + rng.below(idx.size() - t);
          std::swap(idx[t], idx[pick]);
          const Member& m = population[idx[t]];
          if (parent == nullptr || m.val < parent->val) parent = &m;
        }
        child = mutate_choice(spec, parent->choice, rng);
      }
      const double val = eval.full_validation(child, true);
      population.push_back({child, val});
      if (static_cast<int>(population.size()) > config.population) {
        population.pop_front();
      }
      if (!incumbent || val < incumbent->val) incumbent = Member{child, val};
    }
    traj.epochs.push_back(
        eval.entry(epoch, incumbent->choice, incumbent->val, nullptr));
  }
  eval.finish(traj, traj.epochs.back());
  return traj;
}

Trajectory run_search(const SearchSpaceSpec& spec, const MetricSource& source,
                      const OptimizerConfig& config) {
  switch (config.kind) {
    case OptimizerKind::kDartsSf:
      return run_darts_sf(spec, source, config);
    case OptimizerKind::kGdas:
      return run_gdas(spec, source, config);
    case OptimizerKind::kEnasPg:
      return run_enas_pg(spec, source, config);
    case OptimizerKind::kRandomWs:
      return run_random_ws(spec, source, config);
    case OptimizerKind::kRandomSearch:
      return run_random_search(spec, source, config);
    case OptimizerKind::kRegEvolution:
      return run_regularized_evolution(spec, source, config);
  }
  fail(ErrorCode::kInvalidArgument, "unknown optimizer kind");
}

std::vector<Trajectory> run_seeds(const SearchSpaceSpec& spec,
                                  const MetricSource& source,
                                  const OptimizerConfig& config,
                                  const std::vector<std::uint64_t>& seeds,
                                  int workers) {
  std::vector<Trajectory> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        OptimizerConfig run = config;
        run.seed = seeds[i];
        out[i] = run_search(spec, source, run);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads =
      std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(seeds.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace shotbench
