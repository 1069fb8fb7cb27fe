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

#ifndef SHOTBENCH_TOOLS_FILEIO_HPP_
#define SHOTBENCH_TOOLS_FILEIO_HPP_

#include <filesystem>
#include <string>

namespace shotbench::cli {

std::string read_file(const std::filesystem::path& path);

// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& data);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

// UTC, ISO 8601, second resolution.
std::string utc_timestamp();

}  // namespace shotbench::cli

#endif  // SHOTBENCH_TOOLS_FILEIO_HPP_
