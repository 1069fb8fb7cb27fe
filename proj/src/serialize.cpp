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

#include "shotbench/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace shotbench {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T field(const Json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("field '") + name + "': " + e.what());
  }
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const SpaceStats& stats, const SearchSpaceSpec& spec) {
  Json parents = Json::array();
  for (int k : spec.parents_per_node()) parents.push_back(k);
  return Json{{"space", spec.number()},
              {"convention", std::string(convention_name(stats.convention))},
              {"parents", parents},
              {"output_parents", spec.parents_of(spec.output_node())},
              {"raw_choices", stats.raw_choice_count},
              {"with_loose_ends", stats.with_loose_ends},
              {"without_loose_ends", stats.without_loose_ends},
              {"without_isomorphism", stats.without_isomorphism}};
}

Json to_json(const std::vector<ConventionComparison>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"space", r.space},
                   {"row", r.row},
                   {"convention", std::string(convention_name(r.convention))},
                   {"computed", r.computed},
                   {"reference", r.reference},
                   {"match", r.match()}});
  }
  return out;
}

Json to_json(const ArchWeights& weights) {
  Json out;
  out["space"] = weights.spec().number();
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    const auto logits = weights.logits(d);
    out[weights.decisions()[d].name()] = std::vector<double>(logits.begin(), logits.end());
  }
  return out;
}

ArchWeights weights_from_json(const SearchSpaceSpec& spec, const Json& j) {
  ArchWeights weights(spec);
  for (std::size_t d = 0; d < weights.num_decisions(); ++d) {
    const std::string name = weights.decisions()[d].name();
    const auto values = field<std::vector<double>>(j, name.c_str());
    auto logits = weights.logits(d);
    if (values.size() != logits.size()) {
      fail(ErrorCode::kParse, name + ": expected " + std::to_string(logits.size()) +
                                  " logits, got " + std::to_string(values.size()));
    }
    std::copy(values.begin(), values.end(), logits.begin());
  }
  if (!weights.all_finite()) fail(ErrorCode::kParse, "non-finite logit");
  return weights;
}

Json to_json(const OptimizerConfig& c) {
  return Json{{"algorithm", std::string(optimizer_name(c.kind))},
              {"epochs", c.epochs},
              {"arch_lr", c.arch_lr},
              {"logit_l2", c.logit_l2},
              {"samples_per_step", c.samples_per_step},
              {"tau_start", c.tau_start},
              {"tau_end", c.tau_end},
              {"baseline_decay", c.baseline_decay},
              {"population", c.population},
              {"tournament", c.tournament},
              {"fidelity_budget", c.fidelity_budget},
              {"noise_prob", c.noise_prob},
              {"selection_noise", c.selection_noise},
              {"grad_clip", c.grad_clip},
              {"init_sigma", c.init_sigma},
              {"exact_gradient", c.exact_gradient},
              {"record_test", c.record_test},
              {"record_weights", c.record_weights},
              {"seed", c.seed}};
}

OptimizerConfig optimizer_config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kParse, "optimizer config must be an object");
  OptimizerConfig c;
  for (const auto& [name, value] : j.items()) {
    try {
      if (name == "algorithm") c.kind = parse_optimizer(value.get<std::string>());
      else if (name == "epochs") c.epochs = value.get<int>();
      else if (name == "arch_lr") c.arch_lr = value.get<double>();
      else if (name == "logit_l2") c.logit_l2 = value.get<double>();
      else if (name == "samples_per_step") c.samples_per_step = value.get<int>();
      else if (name == "tau_start") c.tau_start = value.get<double>();
      else if (name == "tau_end") c.tau_end = value.get<double>();
      else if (name == "baseline_decay") c.baseline_decay = value.get<double>();
      else if (name == "population") c.population = value.get<int>();
      else if (name == "tournament") c.tournament = value.get<int>();
      else if (name == "fidelity_budget") c.fidelity_budget = value.get<int>();
      else if (name == "noise_prob") c.noise_prob = value.get<double>();
      else if (name == "selection_noise") c.selection_noise = value.get<double>();
      else if (name == "grad_clip") c.grad_clip = value.get<double>();
      else if (name == "init_sigma") c.init_sigma = value.get<double>();
      else if (name == "exact_gradient") c.exact_gradient = value.get<bool>();
      else if (name == "record_test") c.record_test = value.get<bool>();
      else if (name == "record_weights") c.record_weights = value.get<bool>();
      else if (name == "seed") c.seed = value.get<std::uint64_t>();
      else fail(ErrorCode::kParse, "unknown optimizer field '" + name + "'");
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse, "field '" + name + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

Json to_json(const TunerConfig& c) {
  return Json{{"min_budget", c.min_budget},
              {"max_budget", c.max_budget},
              {"eta", c.eta},
              {"total_evaluations", c.total_evaluations},
              {"configs_per_iteration", c.configs_per_iteration},
              {"sampler", std::string(sampler_name(c.sampler))},
              {"kde_gamma", c.kde_gamma},
              {"kde_candidates", c.kde_candidates},
              {"kde_min_bandwidth", c.kde_min_bandwidth},
              {"hyperband", c.hyperband},
              {"workers", c.workers},
              {"seed", c.seed}};
}

TunerConfig tuner_config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kParse, "tuner config must be an object");
  TunerConfig c;
  for (const auto& [name, value] : j.items()) {
    try {
      if (name == "min_budget") c.min_budget = value.get<int>();
      else if (name == "max_budget") c.max_budget = value.get<int>();
      else if (name == "eta") c.eta = value.get<int>();
      else if (name == "total_evaluations") c.total_evaluations = value.get<double>();
      else if (name == "configs_per_iteration") c.configs_per_iteration = value.get<int>();
      else if (name == "sampler") c.sampler = parse_sampler(value.get<std::string>());
      else if (name == "kde_gamma") c.kde_gamma = value.get<double>();
      else if (name == "kde_candidates") c.kde_candidates = value.get<int>();
      else if (name == "kde_min_bandwidth") c.kde_min_bandwidth = value.get<double>();
      else if (name == "hyperband") c.hyperband = value.get<bool>();
      else if (name == "workers") c.workers = value.get<int>();
      else if (name == "seed") c.seed = value.get<std::uint64_t>();
      else fail(ErrorCode::kParse, "unknown tuner field '" + name + "'");
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse, "field '" + name + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

Json config_to_json(const ConfigSpace& space, const Config& config) {
  Json out = Json::object();
  for (std::size_t i = 0; i < space.size() && i < config.size(); ++i) {
    const Dimension& dim = space.dims()[i];
    if (dim.kind == DimensionKind::kContinuous) {
      out[dim.name] = config[i];
    } else {
      out[dim.name] = static_cast<long long>(config[i]);
    }
  }
  return out;
}

Json to_json(const TrajectoryEntry& e) {
  Json out{{"epoch", e.epoch},
           {"arch", e.arch.to_text()},
           {"key", key_to_hex(e.key)},
           {"objective", e.objective},
           {"val_full", e.val_full},
           {"test_full", optional_number(e.test_full)},
           {"t_search", e.t_search}};
  if (!e.weights.empty()) out["weights"] = e.weights;
  return out;
}

namespace {

TrajectoryEntry entry_from_json(const Json& j) {
  TrajectoryEntry e;
  e.epoch = field<int>(j, "epoch");
  e.arch = Architecture::parse(field<std::string>(j, "arch"));
  e.key = key_from_hex(field<std::string>(j, "key"));
  e.objective = field<double>(j, "objective");
  e.val_full = field<double>(j, "val_full");
  if (j.contains("test_full") && !j["test_full"].is_null()) {
    e.test_full = field<double>(j, "test_full");
  }
  e.t_search = field<double>(j, "t_search");
  if (j.contains("weights")) e.weights = field<std::vector<double>>(j, "weights");
  return e;
}

Json hex_keys(const std::vector<CanonicalKey>& keys) {
  Json out = Json::array();
  for (CanonicalKey k : keys) out.push_back(key_to_hex(k));
  return out;
}

std::vector<CanonicalKey> keys_from_json(const Json& j, const char* name) {
  std::vector<CanonicalKey> out;
  for (const auto& s : field<std::vector<std::string>>(j, name)) {
    out.push_back(key_from_hex(s));
  }
  return out;
}

}  // namespace

Json to_json(const Trajectory& t) {
  Json epochs = Json::array();
  for (const auto& e : t.epochs) epochs.push_back(to_json(e));
  return Json{{"algorithm", std::string(optimizer_name(t.kind))},
              {"space", t.space},
              {"seed", t.seed},
              {"evaluations", t.evaluations},
              {"selection_train_time", t.selection_train_time},
              {"selection", to_json(t.selection)},
              {"epochs", epochs},
              {"candidate_pool", hex_keys(t.candidate_pool)},
              {"candidate_scores", t.candidate_scores},
              {"shortlist", hex_keys(t.shortlist)}};
}

Trajectory trajectory_from_json(const Json& j) {
  Trajectory t;
  t.kind = parse_optimizer(field<std::string>(j, "algorithm"));
  t.space = field<int>(j, "space");
  t.seed = field<std::uint64_t>(j, "seed");
  t.evaluations = field<std::uint64_t>(j, "evaluations");
  t.selection_train_time = field<double>(j, "selection_train_time");
  t.selection = entry_from_json(field<Json>(j, "selection"));
  for (const auto& e : field<Json>(j, "epochs")) t.epochs.push_back(entry_from_json(e));
  t.candidate_pool = keys_from_json(j, "candidate_pool");
  t.candidate_scores = field<std::vector<double>>(j, "candidate_scores");
  t.shortlist = keys_from_json(j, "shortlist");
  return t;
}

Json to_json(const CorrelationMatrix& m) {
  Json rows = Json::array();
  for (std::size_t s = 0; s < m.snapshots.size(); ++s) {
    Json rho = Json::object();
    for (std::size_t b = 0; b < kBudgets.size(); ++b) {
      rho[std::to_string(kBudgets[b])] = optional_number(m.rho[s][b]);
    }
    rows.push_back({{"epoch", m.snapshots[s]},
                    {"population", m.population_sizes[s]},
                    {"spearman", rho}});
  }
  return rows;
}

std::string regret_csv(const std::vector<RegretCurve>& curves) {
  std::ostringstream out;
  out << "algorithm,seed,epoch,t_sim,val_regret,test_regret,key\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << optimizer_name(c.algorithm) << ',' << c.seed << ',' << p.epoch << ','
          << fmt(p.t_sim) << ',' << fmt(p.val_regret) << ',' << fmt(p.test_regret)
          << ',' << key_to_hex(p.key) << '\n';
    }
  }
  return out.str();
}

std::string aggregate_csv(const std::vector<AggregatePoint>& points) {
  std::ostringstream out;
  out << "epoch,t_sim_mean,val_mean,val_std,test_mean,test_std\n";
  for (const auto& p : points) {
    out << p.epoch << ',' << fmt(p.t_sim_mean) << ',' << fmt(p.val_mean) << ','
        << fmt(p.val_std) << ',' << fmt(p.test_mean) << ',' << fmt(p.test_std) << '\n';
  }
  return out.str();
}

std::string correlation_csv(const CorrelationMatrix& m) {
  std::ostringstream out;
  out << "epoch,budget,population,spearman\n";
  for (std::size_t s = 0; s < m.snapshots.size(); ++s) {
    for (std::size_t b = 0; b < kBudgets.size(); ++b) {
      out << m.snapshots[s] << ',' << kBudgets[b] << ',' << m.population_sizes[s] << ','
          << (m.rho[s][b] ? fmt(*m.rho[s][b]) : "nan") << '\n';
    }
  }
  return out.str();
}

std::string tune_csv(const TuneResult& result, const ConfigSpace& space) {
  std::ostringstream out;
  out << "t_sim,val_regret,test_regret,key,config\n";
  for (const auto& p : result.incumbents) {
    std::string config = config_to_json(space, p.config).dump();
    std::string quoted;
    for (char ch : config) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    out << fmt(p.t_sim) << ',' << fmt(p.val_regret) << ',' << fmt(p.test_regret) << ','
        << key_to_hex(p.key) << ",\"" << quoted << "\"\n";
  }
  return out.str();
}

}  // namespace shotbench
