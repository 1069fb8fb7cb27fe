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

#ifndef SHOTBENCH_SERIALIZE_HPP_
#define SHOTBENCH_SERIALIZE_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "shotbench/analysis.hpp"
#include "shotbench/enumeration.hpp"
#include "shotbench/optimizers.hpp"
#include "shotbench/relax.hpp"
#include "shotbench/tuner.hpp"

namespace shotbench {

using Json = nlohmann::ordered_json;

Json to_json(const SpaceStats& stats, const SearchSpaceSpec& spec);
Json to_json(const std::vector<ConventionComparison>& rows);
Json to_json(const ArchWeights& weights);
ArchWeights weights_from_json(const SearchSpaceSpec& spec, const Json& j);

Json to_json(const OptimizerConfig& config);
// Missing fields keep their defaults; unknown fields are rejected.
OptimizerConfig optimizer_config_from_json(const Json& j);

Json to_json(const TunerConfig& config);
TunerConfig tuner_config_from_json(const Json& j);
Json config_to_json(const ConfigSpace& space, const Config& config);

Json to_json(const TrajectoryEntry& entry);
Json to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const Json& j);

Json to_json(const CorrelationMatrix& matrix);

std::string regret_csv(const std::vector<RegretCurve>& curves);
std::string aggregate_csv(const std::vector<AggregatePoint>& points);
std::string correlation_csv(const CorrelationMatrix& matrix);
std::string tune_csv(const TuneResult& result, const ConfigSpace& space);

// Parses text, mapping parse failures to kParse.
Json parse_json(const std::string& text);

}  // namespace shotbench

#endif  // SHOTBENCH_SERIALIZE_HPP_
