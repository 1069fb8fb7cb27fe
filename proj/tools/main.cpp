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

// Command-line front end over the C API.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fileio.hpp"
#include "json.hpp"
#include "shotbench/shotbench.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace shotbench::cli;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sb_status status) {
  if (status != SB_OK) throw std::runtime_error(sb_last_error());
}

std::string take(char* s) {
  std::string out(s);
  sb_string_free(s);
  return out;
}

class Table {
 public:
  explicit Table(const std::string& path) { check(sb_table_load(path.c_str(), &table_)); }
  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;
  ~Table() { sb_table_free(table_); }
  const sb_table* get() const { return table_; }

 private:
  sb_table* table_ = nullptr;
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw UsageError("bad seed list '" + text + "'");
    return static_cast<std::uint64_t>(v);
  };
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const auto lo = number(text.substr(0, range));
    const auto hi = number(text.substr(range + 2));
    if (hi < lo || hi - lo >= 10000) throw UsageError("bad seed range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) seeds.push_back(number(item));
  if (seeds.empty()) throw UsageError("empty seed list");
  return seeds;
}

Json file_ref(const std::string& path) {
  return Json{{"path", fs::absolute(path).lexically_normal().string()},
              {"sha256", sha256_file(path)}};
}

// Checks a recorded file reference before a replay uses it.
std::string verified_path(const Json& ref) {
  const std::string path = ref.at("path").get<std::string>();
  if (sha256_file(path) != ref.at("sha256").get<std::string>()) {
    throw std::runtime_error("digest mismatch for " + path);
  }
  return path;
}

// Result files of one run plus their manifest.
class Outputs {
 public:
  Outputs(const fs::path& dir, const std::string& command, const Json& config)
      : dir_(dir) {
    fs::create_directories(dir_);
    manifest_ = Json{{"tool", "shotbench"},
                     {"version", sb_version()},
                     {"command", command},
                     {"config", config},
                     {"seeds", config.contains("seeds") ? config["seeds"] : Json::array()},
                     {"table", config.contains("table") ? config["table"] : Json(nullptr)},
                     {"started", utc_timestamp()},
                     {"finished", nullptr},
                     {"outputs", Json::object()}};
    write_atomic(dir_ / "manifest.json", manifest_.dump(2) + "\n");
  }

  void write(const std::string& name, const std::string& data) {
    write_atomic(dir_ / name, data);
    manifest_["outputs"][name] = sha256_hex(data);
  }

  void finish() {
    manifest_["finished"] = utc_timestamp();
    write_atomic(dir_ / "manifest.json", manifest_.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  Json manifest_;
};

// Writes to --out when given, else prints the primary result.
void emit(const std::optional<fs::path>& out, const std::string& command,
          const Json& config, const std::string& name, const std::string& data) {
  if (!out) {
    std::cout << data;
    return;
  }
  Outputs outputs(*out, command, config);
  outputs.write(name, data);
  outputs.finish();
}

fs::path require_out(const std::optional<fs::path>& out, const std::string& command) {
  if (!out) throw UsageError(command + " requires --out DIR");
  return *out;
}

void cmd_stats(const Json& c, const std::optional<fs::path>& out) {
  char* text = nullptr;
  if (c.at("report").get<bool>()) {
    check(sb_convention_report(&text));
  } else {
    check(sb_space_stats(c.at("space").get<int>(),
                         c.at("convention").get<std::string>().c_str(), &text));
  }
  emit(out, "stats", c, "stats.json", take(text) + "\n");
}

int collect_line(const char* arch, const char* key, void* user) {
  auto* lines = static_cast<std::string*>(user);
  lines->append(key).append(" ").append(arch).append("\n");
  return 0;
}

void cmd_enumerate(const Json& c, const std::optional<fs::path>& out) {
  std::string lines;
  check(sb_enumerate(c.at("space").get<int>(), c.at("which").get<std::string>().c_str(),
                     collect_line, &lines));
  emit(out, "enumerate", c, "architectures.txt", lines);
}

void cmd_gen_table(const Json& c, const std::optional<fs::path>& out) {
  const fs::path dir = require_out(out, "gen-table");
  sb_table* table = nullptr;
  check(sb_table_generate(c.at("space").get<int>(), c.at("seed").get<std::uint64_t>(), &table));
  Outputs outputs(dir, "gen-table", c);
  const fs::path scratch = dir / ".table.jsonl.partial";
  const sb_status status = sb_table_save(table, scratch.c_str());
  sb_table_free(table);
  check(status);
  const std::string data = read_file(scratch);
  fs::remove(scratch);
  outputs.write("table.jsonl", data);
  outputs.finish();
}

void cmd_ingest_check(const Json& c, const std::optional<fs::path>& out) {
  const Table table(c.at("table").at("path").get<std::string>());
  char* text = nullptr;
  check(sb_table_check(table.get(), c.at("space").get<int>(), &text));
  emit(out, "ingest-check", c, "check.json", take(text) + "\n");
}

void cmd_discretize(const Json& c, const std::optional<fs::path>& out) {
  const std::string weights = c.at("weights").dump();
  char* arch = nullptr;
  check(sb_discretize(c.at("space").get<int>(), weights.c_str(), &arch));
  const std::string text = take(arch);
  char* key = nullptr;
  check(sb_lookup_key(text.c_str(), &key));
  const Json result{{"arch", text}, {"key", take(key)}};
  emit(out, "discretize", c, "discretized.json", result.dump(2) + "\n");
}

void cmd_search(const Json& c, const std::optional<fs::path>& out) {
  const fs::path dir = require_out(out, "search");
  const Table table(c.at("table").at("path").get<std::string>());
  const int space = c.at("space").get<int>();
  const auto seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
  const std::string optimizer = c.at("optimizer").dump();
  Outputs outputs(dir, "search", c);
  char* text = nullptr;
  check(sb_search_seeds(table.get(), space, optimizer.c_str(), seeds.data(), seeds.size(),
                        c.at("workers").get<int>(), &text));
  const std::string all = take(text);
  for (const Json& traj : Json::parse(all)) {
    outputs.write("trajectory_seed" + std::to_string(traj.at("seed").get<std::uint64_t>()) +
                      ".json",
                  traj.dump(1) + "\n");
  }
  check(sb_regret_csv(table.get(), space, all.c_str(), &text));
  outputs.write("regret.csv", take(text));
  if (seeds.size() >= 2) {
    check(sb_aggregate_csv(table.get(), space, all.c_str(), &text));
    outputs.write("aggregate.csv", take(text));
  }
  outputs.finish();
}

void cmd_tune(const Json& c, const std::optional<fs::path>& out) {
  const fs::path dir = require_out(out, "tune");
  const Table table(c.at("table").at("path").get<std::string>());
  Outputs outputs(dir, "tune", c);
  const std::string tuner = c.at("tuner").dump();
  const std::string base = c.at("optimizer").dump();
  char* text = nullptr;
  check(sb_tune(table.get(), c.at("space").get<int>(),
                c.at("algorithm").get<std::string>().c_str(), c.at("cs").get<int>(),
                tuner.c_str(), base.c_str(), &text));
  Json result = Json::parse(take(text));
  outputs.write("incumbents.csv", result.at("csv").get<std::string>());
  result.erase("csv");
  outputs.write("tune.json", result.dump(2) + "\n");
  outputs.finish();
}

void cmd_correlate(const Json& c, const std::optional<fs::path>& out) {
  const fs::path dir = require_out(out, "correlate");
  const Table table(c.at("table").at("path").get<std::string>());
  const std::string traj = read_file(verified_path(c.at("trajectory")));
  const std::string options = c.at("options").dump();
  Outputs outputs(dir, "correlate", c);
  char* text = nullptr;
  check(sb_correlate(table.get(), c.at("space").get<int>(), traj.c_str(), options.c_str(),
                     &text));
  Json result = Json::parse(take(text));
  outputs.write("correlation.csv", result.at("csv").get<std::string>());
  result.erase("csv");
  outputs.write("correlation.json", result.dump(2) + "\n");
  outputs.finish();
}

void run_command(const std::string& command, const Json& config,
                 const std::optional<fs::path>& out) {
  if (command == "stats") return cmd_stats(config, out);
  if (command == "enumerate") return cmd_enumerate(config, out);
  if (command == "gen-table") return cmd_gen_table(config, out);
  if (command == "ingest-check") return cmd_ingest_check(config, out);
  if (command == "discretize") return cmd_discretize(config, out);
  if (command == "search") return cmd_search(config, out);
  if (command == "tune") return cmd_tune(config, out);
  if (command == "correlate") return cmd_correlate(config, out);
  throw std::runtime_error("manifest names unknown command '" + command + "'");
}

// Reruns a manifest into `out` and compares every output digest.
int replay(const fs::path& manifest_path, const fs::path& out) {
  const Json manifest = Json::parse(read_file(manifest_path));
  const Json& config = manifest.at("config");
  if (config.contains("table")) verified_path(config.at("table"));
  if (fs::exists(out) && fs::equivalent(out, manifest_path.parent_path())) {
    throw UsageError("replay output directory must differ from the original");
  }
  run_command(manifest.at("command").get<std::string>(), config, out);
  const Json rerun = Json::parse(read_file(out / "manifest.json"));
  int mismatches = 0;
  for (const auto& [name, digest] : manifest.at("outputs").items()) {
    const Json& other = rerun.at("outputs");
    if (!other.contains(name) || other.at(name) != digest) {
      std::cerr << "replay: " << name << " differs\n";
      ++mismatches;
    }
  }
  if (rerun.at("outputs").size() != manifest.at("outputs").size()) ++mismatches;
  if (mismatches > 0) return 1;
  std::cout << "replay: " << manifest.at("outputs").size() << " outputs identical\n";
  return 0;
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Json resolve_optimizer(Json config) {
  const std::string in = config.dump();
  char* text = nullptr;
  check(sb_optimizer_config_resolve(in.c_str(), &text));
  return Json::parse(take(text));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular one-shot architecture search benchmark tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sb_version()));

  std::string out_dir;
  auto add_out = [&](CLI::App* sub, const char* help) {
    sub->add_option("--out", out_dir, help);
  };
  int space = 1;
  auto add_space = [&](CLI::App* sub) {
    sub->add_option("--space", space, "Search space (1, 2 or 3)")
        ->required()
        ->check(CLI::Range(1, 3));
  };
  std::string table_path;
  auto add_table = [&](CLI::App* sub) {
    sub->add_option("--table", table_path, "Benchmark table (JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
  };

  auto* stats = app.add_subcommand("stats", "Architecture counts of a search space");
  std::string convention = "exact-k";
  bool report = false;
  stats->add_option("--space", space, "Search space (1, 2 or 3)")->check(CLI::Range(1, 3));
  stats->add_option("--convention", convention,
                    "exact-k, implicit-edge, dead-op-collapse or compacted");
  stats->add_flag("--report", report, "Compare every convention with the reference counts");
  add_out(stats, "Write stats.json and a manifest here");

  auto* enumerate = app.add_subcommand("enumerate", "List architectures of a space");
  std::string which = "pruned";
  add_space(enumerate);
  enumerate->add_option("--which", which, "raw, pruned or keys")
      ->check(CLI::IsMember({"raw", "pruned", "keys"}));
  add_out(enumerate, "Write architectures.txt and a manifest here");

  auto* gen = app.add_subcommand("gen-table", "Generate a deterministic surrogate table");
  std::uint64_t seed = 0;
  add_space(gen);
  gen->add_option("--seed", seed, "Table seed");
  add_out(gen, "Output directory");

  auto* ingest = app.add_subcommand("ingest-check", "Validate a table against a space");
  add_space(ingest);
  add_table(ingest);
  add_out(ingest, "Write check.json and a manifest here");

  auto* disc = app.add_subcommand("discretize", "Discretize architecture weights");
  std::string weights_path;
  add_space(disc);
  disc->add_option("--weights", weights_path, "Weights JSON")
      ->required()
      ->check(CLI::ExistingFile);
  add_out(disc, "Write discretized.json and a manifest here");

  auto* search = app.add_subcommand("search", "Run an optimizer over several seeds");
  std::string algo;
  std::string seeds_text = "0..5";
  std::string config_path;
  int epochs = 0;
  int workers = 1;
  const std::vector<std::string> algos = {"darts", "gdas", "enas", "randomws", "rs", "re"};
  search->add_option("--algo", algo, "darts, gdas, enas, randomws, rs or re")
      ->required()
      ->check(CLI::IsMember(algos));
  add_space(search);
  add_table(search);
  search->add_option("--seeds", seeds_text, "Seed list, e.g. 0..5 or 1,4,9");
  search->add_option("--config", config_path, "Optimizer config JSON")
      ->check(CLI::ExistingFile);
  search->add_option("--epochs", epochs, "Override the epoch count")->check(CLI::PositiveNumber);
  search->add_option("--workers", workers, "Parallel seeds")->check(CLI::PositiveNumber);
  add_out(search, "Output directory");

  auto* tune = app.add_subcommand("tune", "Tune optimizer hyperparameters");
  int cs = 1;
  std::string tuner_path;
  std::string sampler;
  double total_evaluations = 0.0;
  bool hyperband = false;
  tune->add_option("--algo", algo, "Optimizer to tune")->required()->check(CLI::IsMember(algos));
  add_space(tune);
  add_table(tune);
  tune->add_option("--cs", cs, "Configuration space preset")->check(CLI::Range(1, 3));
  tune->add_option("--tuner-config", tuner_path, "Tuner config JSON")
      ->check(CLI::ExistingFile);
  tune->add_option("--config", config_path, "Base optimizer config JSON")
      ->check(CLI::ExistingFile);
  tune->add_option("--sampler", sampler, "random or kde")->check(CLI::IsMember({"random", "kde"}));
  tune->add_option("--total-evaluations", total_evaluations,
                   "Budget in max-budget evaluations")
      ->check(CLI::PositiveNumber);
  tune->add_flag("--hyperband", hyperband, "Rotate brackets");
  tune->add_option("--seed", seed, "Tuner seed");
  tune->add_option("--workers", workers, "Parallel evaluations per rung")
      ->check(CLI::PositiveNumber);
  add_out(tune, "Output directory");

  auto* corr = app.add_subcommand("correlate", "Rank correlation over trajectory snapshots");
  std::string traj_path;
  int every = 10;
  double noise = 0.0;
  std::string metric = "validation";
  add_space(corr);
  add_table(corr);
  corr->add_option("--trajectory", traj_path, "Trajectory JSON from search")
      ->required()
      ->check(CLI::ExistingFile);
  corr->add_option("--every", every, "Snapshot interval in epochs")->check(CLI::PositiveNumber);
  corr->add_option("--noise", noise, "Std of the surrogate error noise")
      ->check(CLI::NonNegativeNumber);
  corr->add_option("--seed", seed, "Noise seed");
  corr->add_option("--metric", metric, "validation or test")
      ->check(CLI::IsMember({"validation", "test"}));
  add_out(corr, "Output directory");

  auto* rep = app.add_subcommand("replay", "Regenerate a run from its manifest");
  std::string manifest_path;
  rep->add_option("--manifest", manifest_path, "manifest.json of an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--out", out_dir, "Output directory for the rerun")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::optional<fs::path> out =
      out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir);
  try {
    if (rep->parsed()) return replay(manifest_path, out_dir);

    Json c;
    std::string command;
    if (stats->parsed()) {
      command = "stats";
      c = {{"space", space}, {"convention", convention}, {"report", report}};
    } else if (enumerate->parsed()) {
      command = "enumerate";
      c = {{"space", space}, {"which", which}};
    } else if (gen->parsed()) {
      command = "gen-table";
      c = {{"space", space}, {"seed", seed}};
    } else if (ingest->parsed()) {
      command = "ingest-check";
      c = {{"space", space}, {"table", file_ref(table_path)}};
    } else if (disc->parsed()) {
      command = "discretize";
      c = {{"space", space}, {"weights", read_json_file(weights_path)}};
    } else if (search->parsed()) {
      command = "search";
      Json opt = config_path.empty() ? Json::object() : read_json_file(config_path);
      opt["algorithm"] = algo;
      if (epochs > 0) opt["epochs"] = epochs;
      c = {{"algorithm", algo},
           {"space", space},
           {"table", file_ref(table_path)},
           {"seeds", parse_seeds(seeds_text)},
           {"workers", workers},
           {"optimizer", resolve_optimizer(opt)}};
    } else if (tune->parsed()) {
      command = "tune";
      Json tuner = tuner_path.empty() ? Json::object() : read_json_file(tuner_path);
      if (!sampler.empty()) tuner["sampler"] = sampler;
      if (total_evaluations > 0) tuner["total_evaluations"] = total_evaluations;
      if (hyperband) tuner["hyperband"] = true;
      if (tune->count("--seed") > 0) tuner["seed"] = seed;
      tuner["workers"] = workers;
      const std::string tuner_in = tuner.dump();
      char* text = nullptr;
      check(sb_tuner_config_resolve(tuner_in.c_str(), &text));
      Json opt = config_path.empty() ? Json::object() : read_json_file(config_path);
      opt["algorithm"] = algo;
      c = {{"algorithm", algo},
           {"space", space},
           {"cs", cs},
           {"table", file_ref(table_path)},
           {"tuner", Json::parse(take(text))},
           {"optimizer", resolve_optimizer(opt)}};
    } else if (corr->parsed()) {
      command = "correlate";
      c = {{"space", space},
           {"table", file_ref(table_path)},
           {"trajectory", file_ref(traj_path)},
           {"options", {{"every", every}, {"noise", noise}, {"seed", seed}, {"metric", metric}}}};
    }
    run_command(command, c, out);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "shotbench: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "shotbench: error: " << e.what() << "\n";
    return 1;
  }
}
