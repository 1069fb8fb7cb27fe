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

#ifndef SHOTBENCH_SPACE_HPP_
#define SHOTBENCH_SPACE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shotbench/common.hpp"

namespace shotbench {

// Cell-level constraints of the tabular benchmark.
inline constexpr int kMaxNodes = 7;
inline constexpr int kMaxEdges = 9;
inline constexpr int kMaxInteriorForKeys = 5;

enum class Op : std::uint8_t {
  kConv3x3 = 0,
  kConv1x1 = 1,
  kMaxPool3x3 = 2,
};
inline constexpr int kNumOps = 3;
inline constexpr std::array<Op, kNumOps> kOpSet = {Op::kConv3x3, Op::kConv1x1,
                                                   Op::kMaxPool3x3};

std::string_view op_label(Op op);
Op parse_op(std::string_view label);

enum class SpaceId { kS1 = 1, kS2 = 2, kS3 = 3 };

// One of the three constrained search spaces.
//
// Nodes are indexed 0 = input, 1..B = choice blocks, B+1 = output. Node j
// picks its parents among {0, ..., j-1}, so node j has exactly j candidates
// (this holds for the output as well, which may take the input as a parent).
class SearchSpaceSpec {
 public:
  SearchSpaceSpec(SpaceId id, std::vector<int> parents_per_node);

  SpaceId id() const noexcept { return id_; }
  int number() const noexcept { return static_cast<int>(id_); }
  int num_choice_blocks() const noexcept {
    return static_cast<int>(parents_.size()) - 1;
  }
  int num_nodes() const noexcept { return num_choice_blocks() + 2; }
  int output_node() const noexcept { return num_choice_blocks() + 1; }

  // One count per choice block followed by the output's count.
  std::span<const int> parents_per_node() const noexcept { return parents_; }

  // Required number of parents of node 1..B+1.
  int parents_of(int node) const { return parents_.at(node - 1); }
  int num_candidates(int node) const noexcept { return node; }

  const std::array<Op, kNumOps>& op_set() const noexcept { return kOpSet; }

  friend bool operator==(const SearchSpaceSpec&,
                         const SearchSpaceSpec&) = default;

 private:
  SpaceId id_;
  std::vector<int> parents_;
};

SearchSpaceSpec build_space(SpaceId id);
SearchSpaceSpec build_space(int id);

// A discrete cell: upper-triangular DAG with op labels on interior nodes.
// Adjacency is stored as one parent bitmask per node.
class Architecture {
 public:
  Architecture() : Architecture(2) {}
  explicit Architecture(int num_nodes);
  Architecture(int num_nodes, std::vector<Op> ops);

  int num_nodes() const noexcept { return static_cast<int>(parents_.size()); }
  int num_interior() const noexcept { return num_nodes() - 2; }
  int output_node() const noexcept { return num_nodes() - 1; }

  bool has_edge(int from, int to) const;
  void set_edge(int from, int to, bool present = true);
  int edge_count() const noexcept;

  // Bitmask of the parents of `node`.
  std::uint32_t parent_mask(int node) const { return parents_.at(node); }

  const std::vector<Op>& ops() const noexcept { return ops_; }
  // Op of interior node `node` (1-based node index).
  Op op_of(int node) const { return ops_.at(node - 1); }
  void set_op(int node, Op op) { ops_.at(node - 1) = op; }

  // Text form: "OP,OP,...|bits" where bits is the row-major upper triangle
  // (i < j) of the adjacency matrix.
  std::string to_text() const;
  static Architecture parse(std::string_view text);

  friend bool operator==(const Architecture&, const Architecture&) = default;

 private:
  std::vector<std::uint32_t> parents_;
  std::vector<Op> ops_;
};

struct ValidityReport {
  bool valid = true;
  std::vector<std::string> violations;
};

ValidityReport validate_architecture(const Architecture& arch);

// Bitmask of nodes with a directed path to the output (output included).
std::uint32_t output_reachable_mask(const Architecture& arch);

// Induced subgraph on input, output and every interior node with a path to
// the output. Surviving nodes keep their relative order and op labels.
Architecture prune_loose_ends(const Architecture& arch);

// A choice tuple of a search space: one parent set per choice block plus the
// output's parent set (as bitmasks over node indices), and one op per block.
struct CellChoice {
  std::vector<std::uint32_t> parent_sets;
  std::vector<Op> ops;

  friend bool operator==(const CellChoice&, const CellChoice&) = default;
};

// Assembles the adjacency of a choice tuple. With `implicit_input_edge` the
// input->output edge is always present (merged if already chosen).
Architecture to_architecture(const SearchSpaceSpec& spec,
                             const CellChoice& choice,
                             bool implicit_input_edge = false);

// Throws unless every parent set has the size the spec requires and only
// names predecessors.
void check_choice(const SearchSpaceSpec& spec, const CellChoice& choice);

}  // namespace shotbench

#endif  // SHOTBENCH_SPACE_HPP_
