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

#include "shotbench/space.hpp"

#include <bit>
#include <numeric>

namespace shotbench {

namespace {

constexpr int kMaxRepresentableNodes = 32;

}  // namespace

std::string_view op_label(Op op) {
  switch (op) {
    case Op::kConv3x3:
      return "CONV3X3";
    case Op::kConv1x1:
      return "CONV1X1";
    case Op::kMaxPool3x3:
      return "MAXPOOL3X3";
  }
  return "INVALID";
}

Op parse_op(std::string_view label) {
  for (Op op : kOpSet) {
    if (op_label(op) == label) return op;
  }
  fail(ErrorCode::kParse, "unknown op label '" + std::string(label) + "'");
}

SearchSpaceSpec::SearchSpaceSpec(SpaceId id, std::vector<int> parents_per_node)
    : id_(id), parents_(std::move(parents_per_node)) {
  if (parents_.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "search space needs at least one block");
  }
  if (num_nodes() > kMaxNodes) {
    fail(ErrorCode::kInvalidArgument, "search space exceeds the node budget");
  }
  const int total = std::accumulate(parents_.begin(), parents_.end(), 0);
  if (total != kMaxEdges) {
    fail(ErrorCode::kInvalidArgument,
         "parent counts must sum to 9, got " + std::to_string(total));
  }
  for (int node = 1; node <= output_node(); ++node) {
    const int k = parents_of(node);
    if (k < 1 || k > num_candidates(node)) {
      fail(ErrorCode::kInvalidArgument,
           "node " + std::to_string(node) + " cannot have " +
               std::to_string(k) + " parents");
    }
  }
}

SearchSpaceSpec build_space(SpaceId id) {
  switch (id) {
    case SpaceId::kS1:
      return SearchSpaceSpec(id, {1, 2, 2, 2, 2});
    case SpaceId::kS2:
      return SearchSpaceSpec(id, {1, 1, 2, 2, 3});
    case SpaceId::kS3:
      return SearchSpaceSpec(id, {1, 1, 1, 2, 2, 2});
  }
  fail(ErrorCode::kInvalidArgument, "unknown search space");
}

SearchSpaceSpec build_space(int id) {
  if (id < 1 || id > 3) {
    fail(ErrorCode::kInvalidArgument,
         "unknown search space " + std::to_string(id));
  }
  return build_space(static_cast<SpaceId>(id));
}

Architecture::Architecture(int num_nodes)
    : Architecture(num_nodes,
                   std::vector<Op>(num_nodes >= 2 ? num_nodes - 2 : 0,
                                   Op::kConv3x3)) {}

Architecture::Architecture(int num_nodes, std::vector<Op> ops)
    : ops_(std::move(ops)) {
  if (num_nodes < 2 || num_nodes > kMaxRepresentableNodes) {
    fail(ErrorCode::kInvalidArgument,
         "architecture node count out of range: " + std::to_string(num_nodes));
  }
  if (static_cast<int>(ops_.size()) != num_nodes - 2) {
    fail(ErrorCode::kInvalidArgument,
         "expected " + std::to_string(num_nodes - 2) + " op labels, got " +
             std::to_string(ops_.size()));
  }
  parents_.assign(num_nodes, 0);
}

bool Architecture::has_edge(int from, int to) const {
  if (to < 0 || to >= num_nodes() || from < 0 || from >= num_nodes()) {
    return false;
  }
  return (parents_[to] >> from) & 1U;
}

void Architecture::set_edge(int from, int to, bool present) {
  if (from < 0 || to >= num_nodes() || from >= to) {
    fail(ErrorCode::kInvalidArgument,
         "edge " + std::to_string(from) + "->" + std::to_string(to) +
             " is not upper-triangular");
  }
  if (present) {
    parents_[to] |= 1U << from;
  } else {
    parents_[to] &= ~(1U << from);
  }
}

int Architecture::edge_count() const noexcept {
  int count = 0;
  for (std::uint32_t mask : parents_) count += std::popcount(mask);
  return count;
}

std::string Architecture::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (i > 0) out += ',';
    out += op_label(ops_[i]);
  }
  out += '|';
  for (int i = 0; i < num_nodes(); ++i) {
    for (int j = i + 1; j < num_nodes(); ++j) {
      out += has_edge(i, j) ? '1' : '0';
    }
  }
  return out;
}

Architecture Architecture::parse(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) {
    fail(ErrorCode::kParse, "architecture text lacks '|' separator");
  }
  const std::string_view ops_part = text.substr(0, bar);
  const std::string_view bits = text.substr(bar + 1);

  std::vector<Op> ops;
  if (!ops_part.empty()) {
    std::size_t start = 0;
    while (true) {
      const auto comma = ops_part.find(',', start);
      ops.push_back(parse_op(ops_part.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }

  int n = 2;
  while (n * (n - 1) / 2 < static_cast<int>(bits.size())) ++n;
  if (n * (n - 1) / 2 != static_cast<int>(bits.size())) {
    fail(ErrorCode::kParse, "adjacency bitstring length " +
                                std::to_string(bits.size()) +
                                " is not a triangular number");
  }
  if (n - 2 != static_cast<int>(ops.size())) {
    fail(ErrorCode::kParse, "adjacency describes " + std::to_string(n) +
                                " nodes but " + std::to_string(ops.size()) +
                                " op labels were given");
  }
  Architecture arch(n, std::move(ops));
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++pos) {
      const char c = bits[pos];
      if (c != '0' && c != '1') {
        fail(ErrorCode::kParse, "adjacency bitstring contains '" +
                                    std::string(1, c) + "'");
      }
      if (c == '1') arch.set_edge(i, j);
    }
  }
  return arch;
}

std::uint32_t output_reachable_mask(const Architecture& arch) {
  const int out = arch.output_node();
  std::uint32_t live = 1U << out;
  // Parents always precede children, so one reverse sweep suffices.
  for (int node = out; node >= 0; --node) {
    if ((live >> node) & 1U) live |= arch.parent_mask(node);
  }
  return live;
}

ValidityReport validate_architecture(const Architecture& arch) {
  ValidityReport report;
  auto reject = [&](std::string why) {
    report.valid = false;
    report.violations.push_back(std::move(why));
  };
  if (arch.num_nodes() > kMaxNodes) reject("node budget exceeded");
  if (arch.edge_count() > kMaxEdges) reject("edge budget exceeded");
  for (Op op : arch.ops()) {
    if (static_cast<int>(op) >= kNumOps) {
      reject("op not in op set");
      break;
    }
  }
  if ((output_reachable_mask(arch) & 1U) == 0) reject("disconnected");
  return report;
}

Architecture prune_loose_ends(const Architecture& arch) {
  const std::uint32_t live = output_reachable_mask(arch);
  std::vector<int> remap(arch.num_nodes(), -1);
  std::vector<Op> ops;
  int next = 0;
  for (int node = 0; node < arch.num_nodes(); ++node) {
    const bool keep =
        node == 0 || node == arch.output_node() || ((live >> node) & 1U);
    if (!keep) continue;
    remap[node] = next++;
    if (node != 0 && node != arch.output_node()) {
      ops.push_back(arch.op_of(node));
    }
  }
  Architecture pruned(next, std::move(ops));
  for (int to = 0; to < arch.num_nodes(); ++to) {
    if (remap[to] < 0) continue;
    for (int from = 0; from < to; ++from) {
      if (remap[from] >= 0 && arch.has_edge(from, to)) {
        pruned.set_edge(remap[from], remap[to]);
      }
    }
  }
  return pruned;
}

void check_choice(const SearchSpaceSpec& spec, const CellChoice& choice) {
  const int blocks = spec.num_choice_blocks();
  if (static_cast<int>(choice.parent_sets.size()) != blocks + 1 ||
      static_cast<int>(choice.ops.size()) != blocks) {
    fail(ErrorCode::kInvalidArgument, "choice tuple has wrong arity");
  }
  for (int node = 1; node <= spec.output_node(); ++node) {
    const std::uint32_t mask = choice.parent_sets[node - 1];
    if (std::popcount(mask) != spec.parents_of(node) || (mask >> node) != 0) {
      fail(ErrorCode::kInvalidArgument,
           "invalid parent set for node " + std::to_string(node));
    }
  }
  for (Op op : choice.ops) {
    if (static_cast<int>(op) >= kNumOps) {
      fail(ErrorCode::kInvalidArgument, "op not in op set");
    }
  }
}

Architecture to_architecture(const SearchSpaceSpec& spec,
                             const CellChoice& choice,
                             bool implicit_input_edge) {
  check_choice(spec, choice);
  Architecture arch(spec.num_nodes(), choice.ops);
  for (int node = 1; node <= spec.output_node(); ++node) {
    std::uint32_t mask = choice.parent_sets[node - 1];
    while (mask != 0) {
      const int from = std::countr_zero(mask);
      arch.set_edge(from, node);
      mask &= mask - 1;
    }
  }
  if (implicit_input_edge) arch.set_edge(0, spec.output_node());
  return arch;
}

}  // namespace shotbench
