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

#include "shotbench/shotbench.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <unordered_set>

#include "shotbench/analysis.hpp"
#include "shotbench/benchtab.hpp"
#include "shotbench/enumeration.hpp"
#include "shotbench/optimizers.hpp"
#include "shotbench/relax.hpp"
#include "shotbench/serialize.hpp"
#include "shotbench/tuner.hpp"

struct sb_table {
  shotbench::BenchTable table;
};

namespace {

using namespace shotbench;

thread_local std::string last_error;

template <typename F>
sb_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return SB_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<sb_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return SB_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SB_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SB_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  require(out, "output pointer");
  *out = dup(s);
}

Json parse_or_empty(const char* text) {
  if (text == nullptr || *text == '\0') return Json::object();
  return parse_json(text);
}

std::vector<Trajectory> trajectories(const char* text) {
  require(text, "trajectories");
  const Json j = parse_json(text);
  std::vector<Trajectory> out;
  if (j.is_array()) {
    for (const auto& t : j) out.push_back(trajectory_from_json(t));
  } else {
    out.push_back(trajectory_from_json(j));
  }
  return out;
}

std::vector<RegretCurve> curves(const sb_table* table, int space,
                                const char* text) {
  require(table, "table");
  const SearchSpaceSpec spec = build_space(space);
  std::vector<RegretCurve> out;
  for (const Trajectory& t : trajectories(text)) {
    if (t.space != space) fail(ErrorCode::kInvalidArgument, "trajectory belongs to another space");
    out.push_back(regret_trajectory(t, table->table, spec));
  }
  return out;
}

}  // namespace

extern "C" {

const char* sb_version(void) { return "0.1.0"; }

const char* sb_last_error(void) { return last_error.c_str(); }

void sb_string_free(char* s) { std::free(s); }

sb_status sb_optimizer_config_resolve(const char* json_in, char** json_out) {
  return guard([&] {
    put(json_out, to_json(optimizer_config_from_json(parse_or_empty(json_in))).dump());
  });
}

sb_status sb_tuner_config_resolve(const char* json_in, char** json_out) {
  return guard([&] {
    put(json_out, to_json(tuner_config_from_json(parse_or_empty(json_in))).dump());
  });
}

sb_status sb_space_stats(int space, const char* convention, char** json_out) {
  return guard([&] {
    const SearchSpaceSpec spec = build_space(space);
    const CountingConvention conv =
        convention == nullptr ? CountingConvention::kExactK : parse_convention(convention);
    put(json_out, to_json(count_stats(spec, conv), spec).dump(2));
  });
}

sb_status sb_convention_report(char** json_out) {
  return guard([&] {
    put(json_out, to_json(compare_conventions({SpaceId::kS1, SpaceId::kS2, SpaceId::kS3})).dump(2));
  });
}

sb_status sb_enumerate(int space, const char* which, sb_arch_visitor visit,
                       void* user) {
  return guard([&] {
    require(which, "which");
    require(reinterpret_cast<const void*>(visit), "visitor");
    const SearchSpaceSpec spec = build_space(space);
    const std::string mode = which;
    if (mode == "raw") {
      ChoiceEnumerator cursor(spec);
      CellChoice choice;
      while (cursor.next(choice)) {
        const Architecture arch = to_architecture(spec, choice);
        if (visit(arch.to_text().c_str(), key_to_hex(lookup_key(arch)).c_str(), user) != 0) return;
      }
    } else if (mode == "pruned" || mode == "keys") {
      std::unordered_set<CanonicalKey> seen;
      for (const PrunedCell& cell : loose_end_free_cells(spec)) {
        if (mode == "keys" && !seen.insert(cell.key).second) continue;
        if (visit(cell.cell.to_text().c_str(), key_to_hex(cell.key).c_str(), user) != 0) return;
      }
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown enumeration '" + mode + "'");
    }
  });
}

sb_status sb_canonical_key(const char* arch_text, char** hex_out) {
  return guard([&] {
    require(arch_text, "architecture");
    put(hex_out, key_to_hex(canonical_key(Architecture::parse(arch_text))));
  });
}

sb_status sb_lookup_key(const char* arch_text, char** hex_out) {
  return guard([&] {
    require(arch_text, "architecture");
    put(hex_out, key_to_hex(lookup_key(Architecture::parse(arch_text))));
  });
}

sb_status sb_validate_arch(const char* arch_text, char** json_out) {
  return guard([&] {
    require(arch_text, "architecture");
    const ValidityReport report = validate_architecture(Architecture::parse(arch_text));
    put(json_out, Json{{"valid", report.valid}, {"violations", report.violations}}.dump());
  });
}

sb_status sb_prune(const char* arch_text, char** arch_out) {
  return guard([&] {
    require(arch_text, "architecture");
    put(arch_out, prune_loose_ends(Architecture::parse(arch_text)).to_text());
  });
}

sb_status sb_table_generate(int space, uint64_t seed, sb_table** out) {
  return guard([&] {
    require(out, "output pointer");
    *out = new sb_table{generate_surrogate_table(build_space(space), seed)};
  });
}

sb_status sb_table_load(const char* path, sb_table** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = new sb_table{BenchTable::load(path)};
  });
}

sb_status sb_table_save(const sb_table* table, const char* path) {
  return guard([&] {
    require(table, "table");
    require(path, "path");
    table->table.save(path);
  });
}

void sb_table_free(sb_table* table) { delete table; }

sb_status sb_table_size(const sb_table* table, size_t* out) {
  return guard([&] {
    require(table, "table");
    require(out, "output pointer");
    *out = table->table.size();
  });
}

sb_status sb_table_check(const sb_table* table, int space, char** json_out) {
  return guard([&] {
    require(table, "table");
    const SearchSpaceSpec spec = build_space(space);
    check_coverage(table->table, spec);
    const BestEntry val = best_in_space(table->table, spec, kFullBudget, Metric::kValidation);
    const BestEntry test = best_in_space(table->table, spec, kFullBudget, Metric::kTest);
    Json out{{"space", space},
             {"records", table->table.size()},
             {"space_keys", cached_space_keys(spec).size()},
             {"provenance", table->table.provenance() == Provenance::kSurrogate
                                ? "surrogate" : "ingested"},
             {"covered", true},
             {"best_validation", {{"key", key_to_hex(val.key)}, {"value", val.value}}},
             {"best_test", {{"key", key_to_hex(test.key)}, {"value", test.value}}}};
    put(json_out, out.dump(2));
  });
}

sb_status sb_table_query(const sb_table* table, const char* arch_text,
                         int budget, double* val, double* test, double* time) {
  return guard([&] {
    require(table, "table");
    require(arch_text, "architecture");
    const RunMetrics m = query(table->table, Architecture::parse(arch_text), budget);
    if (val) *val = m.validation_error;
    if (test) *test = m.test_error;
    if (time) *time = m.training_time;
  });
}

sb_status sb_discretize(int space, const char* weights_json, char** arch_out) {
  return guard([&] {
    require(weights_json, "weights");
    const SearchSpaceSpec spec = build_space(space);
    put(arch_out, discretize(weights_from_json(spec, parse_json(weights_json))).to_text());
  });
}

sb_status sb_search(const sb_table* table, int space, const char* config_json,
                    char** trajectory_out) {
  return guard([&] {
    require(table, "table");
    const SearchSpaceSpec spec = build_space(space);
    const OptimizerConfig config = optimizer_config_from_json(parse_or_empty(config_json));
    put(trajectory_out, to_json(run_search(spec, table->table, config)).dump());
  });
}

sb_status sb_search_seeds(const sb_table* table, int space,
                          const char* config_json, const uint64_t* seeds,
                          size_t n_seeds, int workers, char** json_out) {
  return guard([&] {
    require(table, "table");
    if (n_seeds > 0) require(seeds, "seeds");
    const SearchSpaceSpec spec = build_space(space);
    const OptimizerConfig config = optimizer_config_from_json(parse_or_empty(config_json));
    const std::vector<std::uint64_t> list(seeds, seeds + n_seeds);
    Json out = Json::array();
    for (const Trajectory& t : run_seeds(spec, table->table, config, list, workers)) {
      out.push_back(to_json(t));
    }
    put(json_out, out.dump());
  });
}

sb_status sb_regret_csv(const sb_table* table, int space,
                        const char* trajectories_json, char** csv_out) {
  return guard([&] { put(csv_out, regret_csv(curves(table, space, trajectories_json))); });
}

sb_status sb_aggregate_csv(const sb_table* table, int space,
                           const char* trajectories_json, char** csv_out) {
  return guard([&] {
    put(csv_out, aggregate_csv(aggregate_runs(curves(table, space, trajectories_json))));
  });
}

sb_status sb_tune(const sb_table* table, int space, const char* algorithm,
                  int config_space, const char* tuner_json,
                  const char* base_json, char** json_out) {
  return guard([&] {
    require(table, "table");
    require(algorithm, "algorithm");
    const SearchSpaceSpec spec = build_space(space);
    const OptimizerKind kind = parse_optimizer(algorithm);
    const ConfigSpace cs = config_space_preset(config_space);
    const TunerConfig tuner = tuner_config_from_json(parse_or_empty(tuner_json));
    const OptimizerConfig base = optimizer_config_from_json(parse_or_empty(base_json));
    const TuneResult result = run_tuner(kind, spec, table->table, cs, tuner, base);
    Json incumbents = Json::array();
    for (const TunedPoint& p : result.incumbents) {
      incumbents.push_back({{"t_sim", p.t_sim},
                            {"val_regret", p.val_regret},
                            {"test_regret", p.test_regret},
                            {"key", key_to_hex(p.key)},
                            {"config", config_to_json(cs, p.config)}});
    }
    Json out{{"algorithm", std::string(optimizer_name(kind))},
             {"space", space},
             {"config_space", config_space},
             {"iterations", result.trace.iterations},
             {"evaluations", result.trace.evaluations.size()},
             {"spent_evaluations", result.trace.spent_evaluations},
             {"test_reads_during_tuning", result.test_reads_during_tuning},
             {"incumbents", incumbents},
             {"csv", tune_csv(result, cs)}};
    put(json_out, out.dump(2));
  });
}

sb_status sb_correlate(const sb_table* table, int space,
                       const char* trajectory_json, const char* options_json,
                       char** json_out) {
  return guard([&] {
    require(table, "table");
    require(trajectory_json, "trajectory");
    const SearchSpaceSpec spec = build_space(space);
    const Trajectory traj = trajectory_from_json(parse_json(trajectory_json));
    SweepOptions options;
    const Json given = parse_or_empty(options_json);
    for (const auto& [name, value] : given.items()) {
      if (name == "every") options.every = value.get<int>();
      else if (name == "fidelity_budget") options.fidelity_budget = value.get<int>();
      else if (name == "noise") options.noise = value.get<double>();
      else if (name == "seed") options.seed = value.get<std::uint64_t>();
      else if (name == "metric") {
        const std::string m = value.get<std::string>();
        if (m == "validation") options.metric = Metric::kValidation;
        else if (m == "test") options.metric = Metric::kTest;
        else fail(ErrorCode::kInvalidArgument, "unknown metric '" + m + "'");
      } else {
        fail(ErrorCode::kParse, "unknown correlation option '" + name + "'");
      }
    }
    const CorrelationMatrix m = correlate_trajectory(traj, table->table, spec, options);
    Json out{{"algorithm", std::string(optimizer_name(traj.kind))},
             {"space", space},
             {"seed", traj.seed},
             {"snapshots", to_json(m)},
             {"csv", correlation_csv(m)}};
    put(json_out, out.dump(2));
  });
}

sb_status sb_spearman(const double* xs, const double* ys, size_t n, double* out,
                      int* defined) {
  return guard([&] {
    require(xs, "xs");
    require(ys, "ys");
    require(out, "output pointer");
    const auto rho = spearman(std::vector<double>(xs, xs + n), std::vector<double>(ys, ys + n));
    *out = rho.value_or(0.0);
    if (defined) *defined = rho.has_value() ? 1 : 0;
  });
}

}  // extern "C"
