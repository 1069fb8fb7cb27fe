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

#ifndef SHOTBENCH_COMMON_HPP_
#define SHOTBENCH_COMMON_HPP_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace shotbench {

enum class ErrorCode {
  kInvalidArgument = 1,
  kNotFound = 2,
  kParse = 3,
  kIo = 4,
  kOutOfRange = 5,
};

// Every failure raised by the core library. The C API maps `code()` onto
// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// Epoch budgets stored in the tabular benchmark.
inline constexpr std::array<int, 4> kBudgets = {4, 12, 36, 108};
inline constexpr int kFullBudget = 108;
inline constexpr int kRepeats = 3;

// Index into kBudgets, or -1.
constexpr int budget_index(int budget) noexcept {
  for (int i = 0; i < static_cast<int>(kBudgets.size()); ++i) {
    if (kBudgets[i] == budget) return i;
  }
  return -1;
}

inline int checked_budget_index(int budget) {
  const int idx = budget_index(budget);
  if (idx < 0) {
    fail(ErrorCode::kInvalidArgument,
         "invalid epoch budget " + std::to_string(budget) +
             " (expected one of 4, 12, 36, 108)");
  }
  return idx;
}

}  // namespace shotbench

#endif  // SHOTBENCH_COMMON_HPP_
