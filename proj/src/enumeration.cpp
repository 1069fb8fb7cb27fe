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

#include "shotbench/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <numeric>
#include <unordered_set>

namespace shotbench {

namespace {

constexpr std::uint32_t kBlankOp = 3;

std::uint64_t ipow3(int exponent) {
  std::uint64_t value = 1;
  for (int i = 0; i < exponent; ++i) value *= 3;
  return value;
}

// Upper-triangle adjacency bits of nodes in `keep`, row-major.
std::uint64_t adjacency_code(const Architecture& arch, std::uint32_t keep) {
  std::uint64_t code = 0;
  for (int i = 0; i < arch.num_nodes(); ++i) {
    for (int j = i + 1; j < arch.num_nodes(); ++j) {
      code <<= 1;
      if (((keep >> i) & 1U) && ((keep >> j) & 1U) && arch.has_edge(i, j)) {
        code |= 1;
      }
    }
  }
  return code;
}

std::uint64_t full_code(const Architecture& arch) {
  std::uint64_t ops = 0;
  for (Op op : arch.ops()) ops = (ops << 2) | static_cast<std::uint64_t>(op);
  return (static_cast<std::uint64_t>(arch.num_nodes()) << 56) |
         (adjacency_code(arch, ~0U) << 16) | ops;
}

void for_each_topology(
    const SearchSpaceSpec& spec,
    const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::vector<std::uint32_t>> options;
  for (int node = 1; node <= spec.output_node(); ++node) {
    options.push_back(parent_set_options(spec, node));
  }
  std::vector<int> digits(options.size(), 0);
  std::vector<std::uint32_t> sets(options.size());
  while (true) {
    for (std::size_t i = 0; i < options.size(); ++i) {
      sets[i] = options[i][digits[i]];
    }
    visit(sets);
    int pos = static_cast<int>(options.size()) - 1;
    while (pos >= 0 &&
           ++digits[pos] == static_cast<int>(options[pos].size())) {
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

// Shared pass over the space behind count_stats and loose_end_free_cells.
struct SpaceWalk {
  std::unordered_set<std::uint64_t> with_loose_ends;
  std::unordered_set<std::uint64_t> pruned_positional;
  std::unordered_set<std::uint64_t> pruned_compacted;
  std::unordered_set<CanonicalKey> keys;
  std::vector<PrunedCell> cells;
};

SpaceWalk walk_space(const SearchSpaceSpec& spec,
                     CountingConvention convention, bool collect_cells) {
  SpaceWalk walk;
  const int blocks = spec.num_choice_blocks();
  const bool implicit = convention == CountingConvention::kImplicitInputEdge;
  const bool collapse_dead = convention == CountingConvention::kDeadOpCollapse;
  const bool compacted = convention == CountingConvention::kCompactedPrune;
  const std::uint64_t op_tuples = ipow3(blocks);
  walk.with_loose_ends.reserve(raw_choice_count(spec));

  CellChoice choice;
  choice.ops.assign(blocks, Op::kConv3x3);
  for_each_topology(spec, [&](const std::vector<std::uint32_t>& sets) {
    choice.parent_sets = sets;
    choice.ops.assign(blocks, Op::kConv3x3);
    const Architecture topo = to_architecture(spec, choice, implicit);
    const std::uint32_t live = output_reachable_mask(topo);
    std::uint32_t has_child = 0;
    for (int node = 1; node <= spec.output_node(); ++node) {
      has_child |= topo.parent_mask(node);
    }
    const std::uint64_t full_adj = adjacency_code(topo, ~0U);
    const std::uint64_t pruned_adj = adjacency_code(topo, live);
    Architecture pruned = prune_loose_ends(topo);

    std::vector<Op> ops(blocks, Op::kConv3x3);
    for (std::uint64_t t = 0; t < op_tuples; ++t) {
      std::uint64_t rest = t;
      for (int b = blocks - 1; b >= 0; --b) {
        ops[b] = static_cast<Op>(rest % 3);
        rest /= 3;
      }
      std::uint64_t raw_ops = 0;
      std::uint64_t live_ops = 0;
      for (int b = 0; b < blocks; ++b) {
        const int node = b + 1;
        const auto op = static_cast<std::uint64_t>(ops[b]);
        const bool dead = collapse_dead && ((has_child >> node) & 1U) == 0;
        raw_ops = (raw_ops << 2) | (dead ? kBlankOp : op);
        live_ops = (live_ops << 2) | (((live >> node) & 1U) ? op : kBlankOp);
      }
      walk.with_loose_ends.insert((full_adj << 16) | raw_ops);
      if (!walk.pruned_positional.insert((pruned_adj << 16) | live_ops)
               .second) {
        continue;
      }
      int slot = 1;
      for (int node = 1; node <= blocks; ++node) {
        if ((live >> node) & 1U) pruned.set_op(slot++, ops[node - 1]);
      }
      const CanonicalKey key = canonical_key(pruned);
      walk.keys.insert(key);
      if (compacted) walk.pruned_compacted.insert(full_code(pruned));
      if (collect_cells) walk.cells.push_back({pruned, key});
    }
  });
  return walk;
}

}  // namespace

std::vector<std::uint32_t> parent_set_options(const SearchSpaceSpec& spec,
                                              int node) {
  const int n = spec.num_candidates(node);
  const int k = spec.parents_of(node);
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::uint32_t> out;
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= 1U << i;
    out.push_back(mask);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

std::uint64_t topology_count(const SearchSpaceSpec& spec) {
  std::uint64_t count = 1;
  for (int node = 1; node <= spec.output_node(); ++node) {
    count *= parent_set_options(spec, node).size();
  }
  return count;
}

std::uint64_t raw_choice_count(const SearchSpaceSpec& spec) {
  return topology_count(spec) * ipow3(spec.num_choice_blocks());
}

ChoiceEnumerator::ChoiceEnumerator(const SearchSpaceSpec& spec) {
  for (int node = 1; node <= spec.output_node(); ++node) {
    options_.push_back(parent_set_options(spec, node));
  }
  parent_digits_.assign(options_.size(), 0);
  op_digits_.assign(spec.num_choice_blocks(), 0);
}

bool ChoiceEnumerator::next(CellChoice& out) {
  if (done_) return false;
  if (started_) {
    // Odometer over (parent digits..., op digits...), last fastest.
    int pos = static_cast<int>(op_digits_.size()) - 1;
    while (pos >= 0 && ++op_digits_[pos] == kNumOps) {
      op_digits_[pos] = 0;
      --pos;
    }
    if (pos < 0) {
      int ppos = static_cast<int>(parent_digits_.size()) - 1;
      while (ppos >= 0 && ++parent_digits_[ppos] ==
                              static_cast<int>(options_[ppos].size())) {
        parent_digits_[ppos] = 0;
        --ppos;
      }
      if (ppos < 0) {
        done_ = true;
        return false;
      }
    }
  }
  started_ = true;
  out.parent_sets.resize(options_.size());
  for (std::size_t i = 0; i < options_.size(); ++i) {
    out.parent_sets[i] = options_[i][parent_digits_[i]];
  }
  out.ops.resize(op_digits_.size());
  for (std::size_t i = 0; i < op_digits_.size(); ++i) {
    out.ops[i] = static_cast<Op>(op_digits_[i]);
  }
  return true;
}

std::uint64_t choice_index(const SearchSpaceSpec& spec,
                           const CellChoice& choice) {
  check_choice(spec, choice);
  std::uint64_t index = 0;
  for (int node = 1; node <= spec.output_node(); ++node) {
    const auto options = parent_set_options(spec, node);
    const auto it = std::find(options.begin(), options.end(),
                              choice.parent_sets[node - 1]);
    index = index * options.size() +
            static_cast<std::uint64_t>(it - options.begin());
  }
  for (Op op : choice.ops) index = index * kNumOps + static_cast<int>(op);
  return index;
}

CellChoice choice_from_index(const SearchSpaceSpec& spec, std::uint64_t index) {
  if (index >= raw_choice_count(spec)) {
    fail(ErrorCode::kOutOfRange, "choice index out of range");
  }
  CellChoice choice;
  choice.ops.resize(spec.num_choice_blocks());
  for (int b = spec.num_choice_blocks() - 1; b >= 0; --b) {
    choice.ops[b] = static_cast<Op>(index % kNumOps);
    index /= kNumOps;
  }
  choice.parent_sets.resize(spec.output_node());
  for (int node = spec.output_node(); node >= 1; --node) {
    const auto options = parent_set_options(spec, node);
    choice.parent_sets[node - 1] = options[index % options.size()];
    index /= options.size();
  }
  return choice;
}

void enumerate_architectures(
    const SearchSpaceSpec& spec,
    const std::function<void(const Architecture&)>& visit,
    bool implicit_input_edge) {
  ChoiceEnumerator cursor(spec);
  CellChoice choice;
  while (cursor.next(choice)) {
    visit(to_architecture(spec, choice, implicit_input_edge));
  }
}

CanonicalKey canonical_key(const Architecture& arch) {
  const int n = arch.num_nodes();
  const int interior = n - 2;
  if (interior > kMaxInteriorForKeys) {
    fail(ErrorCode::kInvalidArgument,
         "canonical keys support at most 5 interior nodes, got " +
             std::to_string(interior));
  }
  std::vector<std::pair<int, int>> edges;
  for (int to = 1; to < n; ++to) {
    for (int from = 0; from < to; ++from) {
      if (arch.has_edge(from, to)) edges.emplace_back(from, to);
    }
  }
  std::array<int, 7> relabel{};
  std::array<int, 5> perm{};
  std::iota(perm.begin(), perm.begin() + interior, 0);
  relabel[0] = 0;
  relabel[n - 1] = n - 1;

  CanonicalKey best = ~CanonicalKey{0};
  do {
    for (int i = 0; i < interior; ++i) relabel[i + 1] = perm[i] + 1;
    std::uint64_t adj = 0;
    for (const auto& [from, to] : edges) {
      adj |= std::uint64_t{1} << (48 - (relabel[from] * 7 + relabel[to]));
    }
    std::uint64_t ops = 0;
    for (int i = 0; i < interior; ++i) {
      const int slot = relabel[i + 1] - 1;
      ops |= static_cast<std::uint64_t>(arch.ops()[i]) << (2 * (4 - slot));
    }
    const CanonicalKey value =
        (static_cast<std::uint64_t>(n) << 59) | (adj << 10) | ops;
    best = std::min(best, value);
  } while (std::next_permutation(perm.begin(), perm.begin() + interior));
  return best;
}

std::string key_to_hex(CanonicalKey key) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(key));
  return buf;
}

CanonicalKey key_from_hex(std::string_view hex) {
  if (hex.empty() || hex.size() > 16) {
    fail(ErrorCode::kParse, "malformed key '" + std::string(hex) + "'");
  }
  CanonicalKey key = 0;
  for (char c : hex) {
    int digit = 0;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      fail(ErrorCode::kParse, "malformed key '" + std::string(hex) + "'");
    }
    key = (key << 4) | static_cast<CanonicalKey>(digit);
  }
  return key;
}

CanonicalKey lookup_key(const Architecture& arch) {
  return canonical_key(prune_loose_ends(arch));
}

std::string_view convention_name(CountingConvention convention) {
  switch (convention) {
    case CountingConvention::kExactK:
      return "exact-k";
    case CountingConvention::kImplicitInputEdge:
      return "implicit-edge";
    case CountingConvention::kDeadOpCollapse:
      return "dead-op-collapse";
    case CountingConvention::kCompactedPrune:
      return "compacted";
  }
  return "unknown";
}

std::vector<CountingConvention> all_conventions() {
  return {CountingConvention::kExactK, CountingConvention::kImplicitInputEdge,
          CountingConvention::kDeadOpCollapse,
          CountingConvention::kCompactedPrune};
}

CountingConvention parse_convention(std::string_view name) {
  for (CountingConvention c : all_conventions()) {
    if (convention_name(c) == name) return c;
  }
  fail(ErrorCode::kInvalidArgument,
       "unknown counting convention '" + std::string(name) + "'");
}

SpaceStats count_stats(const SearchSpaceSpec& spec,
                       CountingConvention convention) {
  const SpaceWalk walk = walk_space(spec, convention, false);
  SpaceStats stats;
  stats.convention = convention;
  stats.raw_choice_count = raw_choice_count(spec);
  stats.with_loose_ends = walk.with_loose_ends.size();
  stats.without_loose_ends = convention == CountingConvention::kCompactedPrune
                                 ? walk.pruned_compacted.size()
                                 : walk.pruned_positional.size();
  stats.without_isomorphism = walk.keys.size();
  return stats;
}

std::vector<PrunedCell> loose_end_free_cells(const SearchSpaceSpec& spec) {
  return walk_space(spec, CountingConvention::kExactK, true).cells;
}

std::vector<CanonicalKey> space_keys(const SearchSpaceSpec& spec) {
  const SpaceWalk walk = walk_space(spec, CountingConvention::kExactK, false);
  std::vector<CanonicalKey> keys(walk.keys.begin(), walk.keys.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

ReferenceCounts reference_counts(SpaceId id) {
  switch (id) {
    case SpaceId::kS1:
      return {6240, 3702, 2685};
    case SpaceId::kS2:
      return {29160, 12510, 7773};
    case SpaceId::kS3:
      return {363648, 137406, 55854};
  }
  fail(ErrorCode::kInvalidArgument, "unknown search space");
}

std::vector<ConventionComparison> compare_conventions(
    const std::vector<SpaceId>& spaces) {
  std::vector<ConventionComparison> rows;
  for (SpaceId id : spaces) {
    const SearchSpaceSpec spec = build_space(id);
    const ReferenceCounts ref = reference_counts(id);
    for (CountingConvention convention : all_conventions()) {
      const SpaceStats stats = count_stats(spec, convention);
      const int number = static_cast<int>(id);
      rows.push_back({number, "with_loose_ends", convention,
                      stats.with_loose_ends, ref.with_loose_ends});
      rows.push_back({number, "without_loose_ends", convention,
                      stats.without_loose_ends, ref.without_loose_ends});
      rows.push_back({number, "without_isomorphism", convention,
                      stats.without_isomorphism, ref.without_isomorphism});
    }
  }
  return rows;
}

}  // namespace shotbench
