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

#ifndef SHOTBENCH_ENUMERATION_HPP_
#define SHOTBENCH_ENUMERATION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "shotbench/space.hpp"

namespace shotbench {

// All k-subsets of {0, ..., node-1} for `node`, as bitmasks, in lexicographic
// order of their sorted index tuples.
std::vector<std::uint32_t> parent_set_options(const SearchSpaceSpec& spec,
                                              int node);

// Number of parent-set assignments, ignoring ops.
std::uint64_t topology_count(const SearchSpaceSpec& spec);
// topology_count * 3^B.
std::uint64_t raw_choice_count(const SearchSpaceSpec& spec);

// Walks every choice tuple exactly once in lexicographic order: parent sets of
// blocks 1..B, then the output's parent set, then the ops of blocks 1..B,
// with the last component varying fastest.
class ChoiceEnumerator {
 public:
  explicit ChoiceEnumerator(const SearchSpaceSpec& spec);

  // Writes the next tuple into `out`; false once exhausted.
  bool next(CellChoice& out);

 private:
  std::vector<std::vector<std::uint32_t>> options_;
  std::vector<int> parent_digits_;
  std::vector<int> op_digits_;
  bool started_ = false;
  bool done_ = false;
};

// Dense index of a choice tuple in enumeration order, and its inverse.
std::uint64_t choice_index(const SearchSpaceSpec& spec,
                           const CellChoice& choice);
CellChoice choice_from_index(const SearchSpaceSpec& spec, std::uint64_t index);

// Streams every architecture of the space.
void enumerate_architectures(
    const SearchSpaceSpec& spec,
    const std::function<void(const Architecture&)>& visit,
    bool implicit_input_edge = false);

// Exact canonical form of a cell under permutations of its interior nodes.
// The value packs (node count, adjacency bits, op codes) of the
// lexicographically smallest relabeling, so equality is isomorphism.
using CanonicalKey = std::uint64_t;

CanonicalKey canonical_key(const Architecture& arch);
std::string key_to_hex(CanonicalKey key);
CanonicalKey key_from_hex(std::string_view hex);

// Lookup key used by the benchmark: canonical_key(prune_loose_ends(arch)).
CanonicalKey lookup_key(const Architecture& arch);

enum class CountingConvention {
  // Exactly k parents per node, no implicit output edge.
  kExactK,
  // As kExactK, with the input->output edge always present.
  kImplicitInputEdge,
  // As kExactK, but blocks with no outgoing edge carry no op choice when
  // counting the "with loose ends" row.
  kDeadOpCollapse,
  // As kExactK, but pruned cells are compared after compaction, so cells
  // that differ only in which block positions survived are merged.
  kCompactedPrune,
};

std::string_view convention_name(CountingConvention convention);
CountingConvention parse_convention(std::string_view name);
std::vector<CountingConvention> all_conventions();

struct SpaceStats {
  std::uint64_t raw_choice_count = 0;
  std::uint64_t with_loose_ends = 0;
  std::uint64_t without_loose_ends = 0;
  std::uint64_t without_isomorphism = 0;
  CountingConvention convention = CountingConvention::kExactK;
};

SpaceStats count_stats(const SearchSpaceSpec& spec,
                       CountingConvention convention);

// A pruned cell of the space. Distinct entries differ in the surviving block
// positions, their ops, or their edges; several may share a key.
struct PrunedCell {
  Architecture cell;  // compacted
  CanonicalKey key;
};

// Every loose-end-free cell of the space under the default convention.
std::vector<PrunedCell> loose_end_free_cells(const SearchSpaceSpec& spec);

// Sorted distinct lookup keys of the space.
std::vector<CanonicalKey> space_keys(const SearchSpaceSpec& spec);

// Reference counts of the three spaces, compared row by row with
// count_stats under every convention.
struct ReferenceCounts {
  std::uint64_t with_loose_ends;
  std::uint64_t without_loose_ends;
  std::uint64_t without_isomorphism;
};
ReferenceCounts reference_counts(SpaceId id);

struct ConventionComparison {
  int space = 0;
  std::string row;
  CountingConvention convention = CountingConvention::kExactK;
  std::uint64_t computed = 0;
  std::uint64_t reference = 0;
  bool match() const noexcept { return computed == reference; }
};

std::vector<ConventionComparison> compare_conventions(
    const std::vector<SpaceId>& spaces);

}  // namespace shotbench

#endif  // SHOTBENCH_ENUMERATION_HPP_
