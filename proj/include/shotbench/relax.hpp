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

#ifndef SHOTBENCH_RELAX_HPP_
#define SHOTBENCH_RELAX_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shotbench/rng.hpp"
#include "shotbench/space.hpp"

namespace shotbench {

enum class DecisionKind {
  kParents,  // alpha: edges into a choice block
  kOp,       // beta: op of a choice block
  kOutput,   // gamma: edges into the output
};

// One categorical decision of the relaxation: pick `choose` of
// `num_candidates` candidates.
struct Decision {
  DecisionKind kind;
  int node;
  int choose;
  int num_candidates;

  // "alpha_<node>", "beta_<node>" or "gamma".
  std::string name() const;
};

// Decisions in fixed order: alpha_1, beta_1, ..., alpha_B, beta_B, gamma.
std::vector<Decision> decisions_of(const SearchSpaceSpec& spec);

// Architectural logits, one vector per decision.
class ArchWeights {
 public:
  explicit ArchWeights(const SearchSpaceSpec& spec);

  const SearchSpaceSpec& spec() const noexcept { return spec_; }
  const std::vector<Decision>& decisions() const noexcept { return decisions_; }
  std::size_t num_decisions() const noexcept { return logits_.size(); }

  std::span<double> logits(std::size_t decision) { return logits_.at(decision); }
  std::span<const double> logits(std::size_t decision) const {
    return logits_.at(decision);
  }

  // Named views. `block` is 1-based.
  std::span<double> alpha(int block) { return logits(2 * (block - 1)); }
  std::span<double> beta(int block) { return logits(2 * (block - 1) + 1); }
  std::span<double> gamma() { return logits(logits_.size() - 1); }
  std::span<const double> alpha(int block) const {
    return logits(2 * (block - 1));
  }
  std::span<const double> beta(int block) const {
    return logits(2 * (block - 1) + 1);
  }
  std::span<const double> gamma() const { return logits(logits_.size() - 1); }

  std::size_t size() const noexcept;
  std::vector<double> flat() const;
  void assign_flat(std::span<const double> values);

  // this += scale * other
  void add_scaled(const ArchWeights& other, double scale);
  void scale(double factor);
  bool all_finite() const;

  friend bool operator==(const ArchWeights& a, const ArchWeights& b) {
    return a.spec_ == b.spec_ && a.logits_ == b.logits_;
  }

 private:
  SearchSpaceSpec spec_;
  std::vector<Decision> decisions_;
  std::vector<std::vector<double>> logits_;
};

struct InitScheme {
  enum class Kind { kZeros, kGaussian } kind = Kind::kZeros;
  double sigma = 0.0;

  static InitScheme zeros() { return {}; }
  static InitScheme gaussian(double sigma) { return {Kind::kGaussian, sigma}; }
};

ArchWeights init_weights(const SearchSpaceSpec& spec, InitScheme scheme,
                         std::uint64_t seed);

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

using DecisionDistributions = std::vector<std::vector<double>>;

DecisionDistributions mixture_probs(const ArchWeights& weights);

struct GumbelSample {
  DecisionDistributions soft;
  // Per decision, the `choose` largest perturbed logits (ascending index
  // order). For single-choice decisions this is the argmax.
  std::vector<std::vector<int>> hard;
};

// softmax((logits + G) / tau) with i.i.d. standard Gumbel noise G.
GumbelSample gumbel_softmax(const ArchWeights& weights, double temperature,
                            Rng& rng);

// Converts per-decision selections (as in GumbelSample::hard) into a choice.
CellChoice choice_from_selection(const SearchSpaceSpec& spec,
                                 const std::vector<std::vector<int>>& hard);

// Indices of the k largest entries; ties go to the lowest index.
std::vector<int> top_k(std::span<const double> values, int k);

// Argmax op per block and top-k parents per node, ties to lower indices.
CellChoice discretize_choice(const ArchWeights& weights);
Architecture discretize(const ArchWeights& weights);

// Ops are categorical in softmax(beta); each parent set is k draws without
// replacement proportional to the remaining softmax mass.
CellChoice sample_choice(const ArchWeights& weights, Rng& rng);
CellChoice sample_uniform_choice(const SearchSpaceSpec& spec, Rng& rng);
Architecture sample_architecture(const ArchWeights& weights, Rng& rng);

// Probability that the sequential draw of sample_choice yields the unordered
// set `mask` from probabilities `probs`.
double subset_probability(std::span<const double> probs, std::uint32_t mask);

// Probability of a full choice under sample_choice, and the gradient of its
// logarithm with respect to every logit.
double choice_probability(const ArchWeights& weights, const CellChoice& choice);
ArchWeights grad_log_probability(const ArchWeights& weights,
                                 const CellChoice& choice);

}  // namespace shotbench

#endif  // SHOTBENCH_RELAX_HPP_
