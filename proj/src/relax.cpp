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

#include "shotbench/relax.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace shotbench {

namespace {

std::vector<int> members_of(std::uint32_t mask) {
  std::vector<int> members;
  while (mask != 0) {
    members.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return members;
}

int categorical(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left u above the accumulated mass; take the last nonzero entry.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

// Sequential draw of `k` distinct indices, each proportional to the
// remaining mass.
std::uint32_t draw_subset(std::span<const double> probs, int k, Rng& rng) {
  std::vector<double> remaining(probs.begin(), probs.end());
  std::uint32_t mask = 0;
  for (int t = 0; t < k; ++t) {
    const double total =
        std::accumulate(remaining.begin(), remaining.end(), 0.0);
    int picked = -1;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        acc += remaining[i];
        if (remaining[i] > 0.0 && u < acc) {
          picked = static_cast<int>(i);
          break;
        }
      }
    }
    if (picked < 0) {
      // Remaining mass underflowed: take the lowest unpicked index.
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (((mask >> i) & 1U) == 0) {
          picked = static_cast<int>(i);
          break;
        }
      }
    }
    mask |= 1U << picked;
    remaining[picked] = 0.0;
  }
  return mask;
}

// d log P(subset) / d p_i for every candidate i, plus P itself.
double subset_log_grad_probs(std::span<const double> probs, std::uint32_t mask,
                             std::vector<double>& grad) {
  std::vector<int> order = members_of(mask);
  grad.assign(probs.size(), 0.0);
  double total = 0.0;
  std::vector<double> d_total(probs.size(), 0.0);
  do {
    // term = prod_t p[order[t]] / D_t, D_t = 1 - sum_{s<t} p[order[s]].
    const std::size_t k = order.size();
    std::vector<double> denom(k, 1.0);
    for (std::size_t t = 1; t < k; ++t) {
      denom[t] = denom[t - 1] - probs[order[t - 1]];
    }
    double term = 1.0;
    for (std::size_t t = 0; t < k; ++t) term *= probs[order[t]] / denom[t];
    total += term;
    for (std::size_t t = 0; t < k; ++t) {
      // Numerator derivative without dividing by a possibly zero p.
      double without = 1.0;
      for (std::size_t s = 0; s < k; ++s) {
        without *= s == t ? 1.0 / denom[s] : probs[order[s]] / denom[s];
      }
      d_total[order[t]] += without;
      // Each later denominator contains -p[order[t]].
      double tail = 0.0;
      for (std::size_t s = t + 1; s < k; ++s) tail += 1.0 / denom[s];
      d_total[order[t]] += term * tail;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  if (total > 0.0) {
    for (std::size_t i = 0; i < probs.size(); ++i) grad[i] = d_total[i] / total;
  }
  return total;
}

}  // namespace

std::string Decision::name() const {
  switch (kind) {
    case DecisionKind::kParents:
      return "alpha_" + std::to_string(node);
    case DecisionKind::kOp:
      return "beta_" + std::to_string(node);
    case DecisionKind::kOutput:
      return "gamma";
  }
  return "unknown";
}

std::vector<Decision> decisions_of(const SearchSpaceSpec& spec) {
  std::vector<Decision> out;
  for (int block = 1; block <= spec.num_choice_blocks(); ++block) {
    out.push_back({DecisionKind::kParents, block, spec.parents_of(block),
                   spec.num_candidates(block)});
    out.push_back({DecisionKind::kOp, block, 1, kNumOps});
  }
  const int output = spec.output_node();
  out.push_back({DecisionKind::kOutput, output, spec.parents_of(output),
                 spec.num_candidates(output)});
  return out;
}

ArchWeights::ArchWeights(const SearchSpaceSpec& spec)
    : spec_(spec), decisions_(decisions_of(spec)) {
  for (const Decision& d : decisions_) {
    logits_.emplace_back(d.num_candidates, 0.0);
  }
}

std::size_t ArchWeights::size() const noexcept {
  std::size_t n = 0;
  for (const auto& v : logits_) n += v.size();
  return n;
}

std::vector<double> ArchWeights::flat() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& v : logits_) out.insert(out.end(), v.begin(), v.end());
  return out;
}

void ArchWeights::assign_flat(std::span<const double> values) {
  if (values.size() != size()) {
    fail(ErrorCode::kInvalidArgument, "flat logit vector has wrong length");
  }
  std::size_t pos = 0;
  for (auto& v : logits_) {
    for (double& x : v) x = values[pos++];
  }
}

void ArchWeights::add_scaled(const ArchWeights& other, double scale) {
  if (!(other.spec_ == spec_)) {
    fail(ErrorCode::kInvalidArgument, "weights belong to different spaces");
  }
  for (std::size_t d = 0; d < logits_.size(); ++d) {
    for (std::size_t i = 0; i < logits_[d].size(); ++i) {
      logits_[d][i] += scale * other.logits_[d][i];
    }
  }
}

void ArchWeights::scale(double factor) {
  for (auto& v : logits_) {
    for (double& x : v) x *= factor;
  }
}

bool ArchWeights::all_finite() const {
  for (const auto& v : logits_) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

ArchWeights init_weights(const SearchSpaceSpec& spec, InitScheme scheme,
                         std::uint64_t seed) {
  ArchWeights weights(spec);
  if (scheme.kind == InitScheme::Kind::kZeros) return weights;
  if (!(scheme.sigma > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "gaussian init needs sigma > 0");
  }
  Rng rng(seed);
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    for (double& x : weights.logits(d)) x = scheme.sigma * rng.normal();
  }
  return weights;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

DecisionDistributions mixture_probs(const ArchWeights& weights) {
  DecisionDistributions out;
  out.reserve(weights.num_decisions());
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    out.push_back(softmax(weights.logits(d)));
  }
  return out;
}

std::vector<int> top_k(std::span<const double> values, int k) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return values[a] > values[b];
  });
  idx.resize(std::min<std::size_t>(k, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

GumbelSample gumbel_softmax(const ArchWeights& weights, double temperature,
                            Rng& rng) {
  if (!(temperature > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
  GumbelSample sample;
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    const auto logits = weights.logits(d);
    std::vector<double> perturbed(logits.size());
    std::vector<double> scaled(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
      perturbed[i] = logits[i] + rng.gumbel();
      scaled[i] = perturbed[i] / temperature;
    }
    sample.soft.push_back(softmax(scaled));
    sample.hard.push_back(top_k(perturbed, weights.decisions()[d].choose));
  }
  return sample;
}

CellChoice choice_from_selection(const SearchSpaceSpec& spec,
                                 const std::vector<std::vector<int>>& hard) {
  const auto decisions = decisions_of(spec);
  if (hard.size() != decisions.size()) {
    fail(ErrorCode::kInvalidArgument, "selection has wrong arity");
  }
  CellChoice choice;
  choice.parent_sets.assign(spec.output_node(), 0);
  choice.ops.assign(spec.num_choice_blocks(), Op::kConv3x3);
  for (std::size_t d = 0; d < decisions.size(); ++d) {
    const Decision& dec = decisions[d];
    if (dec.kind == DecisionKind::kOp) {
      choice.ops[dec.node - 1] = static_cast<Op>(hard[d].at(0));
    } else {
      std::uint32_t mask = 0;
      for (int i : hard[d]) mask |= 1U << i;
      choice.parent_sets[dec.node - 1] = mask;
    }
  }
  check_choice(spec, choice);
  return choice;
}

CellChoice discretize_choice(const ArchWeights& weights) {
  std::vector<std::vector<int>> hard;
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    hard.push_back(top_k(weights.logits(d), weights.decisions()[d].choose));
  }
  return choice_from_selection(weights.spec(), hard);
}

Architecture discretize(const ArchWeights& weights) {
  return to_architecture(weights.spec(), discretize_choice(weights));
}

CellChoice sample_choice(const ArchWeights& weights, Rng& rng) {
  const SearchSpaceSpec& spec = weights.spec();
  CellChoice choice;
  choice.parent_sets.assign(spec.output_node(), 0);
  choice.ops.assign(spec.num_choice_blocks(), Op::kConv3x3);
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    const Decision& dec = weights.decisions()[d];
    const std::vector<double> probs = softmax(weights.logits(d));
    if (dec.kind == DecisionKind::kOp) {
      choice.ops[dec.node - 1] = static_cast<Op>(categorical(probs, rng));
    } else {
      choice.parent_sets[dec.node - 1] = draw_subset(probs, dec.choose, rng);
    }
  }
  return choice;
}

CellChoice sample_uniform_choice(const SearchSpaceSpec& spec, Rng& rng) {
  return sample_choice(ArchWeights(spec), rng);
}

Architecture sample_architecture(const ArchWeights& weights, Rng& rng) {
  return to_architecture(weights.spec(), sample_choice(weights, rng));
}

double subset_probability(std::span<const double> probs, std::uint32_t mask) {
  std::vector<double> unused;
  return subset_log_grad_probs(probs, mask, unused);
}

double choice_probability(const ArchWeights& weights, const CellChoice& choice) {
  check_choice(weights.spec(), choice);
  double p = 1.0;
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    const Decision& dec = weights.decisions()[d];
    const std::vector<double> probs = softmax(weights.logits(d));
    if (dec.kind == DecisionKind::kOp) {
      p *= probs[static_cast<int>(choice.ops[dec.node - 1])];
    } else {
      p *= subset_probability(probs, choice.parent_sets[dec.node - 1]);
    }
  }
  return p;
}

ArchWeights grad_log_probability(const ArchWeights& weights,
                                 const CellChoice& choice) {
  check_choice(weights.spec(), choice);
  ArchWeights grad(weights.spec());
  std::vector<double> dlogp_dprob;
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    const Decision& dec = weights.decisions()[d];
    const std::vector<double> probs = softmax(weights.logits(d));
    auto out = grad.logits(d);
    if (dec.kind == DecisionKind::kOp || dec.choose == 1) {
      const int picked =
          dec.kind == DecisionKind::kOp
              ? static_cast<int>(choice.ops[dec.node - 1])
              : std::countr_zero(choice.parent_sets[dec.node - 1]);
      for (std::size_t i = 0; i < probs.size(); ++i) {
        out[i] = (static_cast<int>(i) == picked ? 1.0 : 0.0) - probs[i];
      }
      continue;
    }
    subset_log_grad_probs(probs, choice.parent_sets[dec.node - 1],
                          dlogp_dprob);
    // Chain rule through the softmax Jacobian p_m (delta_im - p_i).
    double weighted = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      weighted += dlogp_dprob[i] * probs[i];
    }
    for (std::size_t m = 0; m < probs.size(); ++m) {
      out[m] = probs[m] * (dlogp_dprob[m] - weighted);
    }
  }
  return grad;
}

}  // namespace shotbench
