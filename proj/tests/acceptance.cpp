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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shotbench/analysis.hpp"
#include "shotbench/benchtab.hpp"
#include "shotbench/enumeration.hpp"
#include "shotbench/optimizers.hpp"
#include "shotbench/relax.hpp"
#include "shotbench/tuner.hpp"

namespace fs = std::filesystem;
using namespace shotbench;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Architecture random_arch(const SearchSpaceSpec& spec, Rng& rng) {
  return to_architecture(spec, sample_uniform_choice(spec, rng));
}

// ---------------------------------------------------------------------------

Outcome space_structure() {
  Outcome o;
  const std::map<int, std::vector<int>> expected = {
      {1, {1, 2, 2, 2, 2}}, {2, {1, 1, 2, 2, 3}}, {3, {1, 1, 1, 2, 2, 2}}};
  for (const auto& [id, parents] : expected) {
    const SearchSpaceSpec spec = build_space(id);
    const std::vector<int> got(spec.parents_per_node().begin(), spec.parents_per_node().end());
    o.require(got == parents, "S" + std::to_string(id) + " parent counts differ");
    o.require(std::accumulate(got.begin(), got.end(), 0) == 9,
              "S" + std::to_string(id) + " parents do not sum to 9");
  }
  o.note("parents S1 [1,2,2,2|2] S2 [1,1,2,2|3] S3 [1,1,1,2,2|2], each sums to 9");
  return o;
}

Outcome counting_forced() {
  Outcome o;
  const std::array<std::uint64_t, 3> topologies = {180, 360, 5400};
  for (int id = 1; id <= 3; ++id) {
    const SearchSpaceSpec spec = build_space(id);
    std::uint64_t closed_form = 1;
    for (int node = 1; node <= spec.output_node(); ++node) {
      closed_form *= oracle::binomial(node, spec.parents_of(node));
    }
    std::uint64_t walked = 0;
    ChoiceEnumerator cursor(spec);
    CellChoice c;
    std::uint64_t op_tuples = 1;
    for (int b = 0; b < spec.num_choice_blocks(); ++b) op_tuples *= kNumOps;
    while (cursor.next(c)) ++walked;
    o.require(topology_count(spec) == topologies[id - 1] && closed_form == topologies[id - 1] &&
                  walked == topologies[id - 1] * op_tuples,
              "S" + std::to_string(id) + " topology count");
  }
  const auto s2 = count_stats(build_space(2), CountingConvention::kExactK);
  o.require(s2.raw_choice_count == 29160, "S2 raw count " + std::to_string(s2.raw_choice_count));
  const auto start = Clock::now();
  const auto s3 = count_stats(build_space(3), CountingConvention::kExactK);
  const double t = seconds_since(start);
  o.require(t < 300.0, fmt("S3 dedup took %.1f s", t));
  o.note("topologies 180/360/5400, S2 raw 29160");
  o.note(fmt("S3 full enumeration with dedup %.2f s", t) + " (" +
         std::to_string(s3.without_isomorphism) + " classes)");
  return o;
}

Outcome counting_conventions() {
  Outcome o;
  const auto rows = compare_conventions({SpaceId::kS1, SpaceId::kS2, SpaceId::kS3});
  o.require(rows.size() == 9 * all_conventions().size(), "report is missing rows");
  std::printf("      %-5s %-22s %-20s %10s %10s  %s\n", "space", "row", "convention",
              "computed", "reference", "match");
  int matches = 0;
  std::map<std::pair<int, std::string>, bool> figure_matched;
  for (const auto& r : rows) {
    std::printf("      S%-4d %-22s %-20s %10llu %10llu  %s\n", r.space, r.row.c_str(),
                std::string(convention_name(r.convention)).c_str(),
                static_cast<unsigned long long>(r.computed),
                static_cast<unsigned long long>(r.reference), r.match() ? "yes" : "no");
    matches += r.match();
    figure_matched[{r.space, r.row}] |= r.match();
  }
  int figures = 0;
  for (const auto& [k, v] : figure_matched) figures += v;
  o.require(figure_matched.size() == 9, "not all nine reference figures compared");
  o.note(std::to_string(rows.size()) + " comparisons, " + std::to_string(matches) +
         " matches, " + std::to_string(figures) + "/9 figures matched by some convention");
  return o;
}

Outcome isomorphism() {
  Outcome o;
  Rng rng(2024);
  for (int id = 1; id <= 3; ++id) {
    const SearchSpaceSpec spec = build_space(id);
    int pairs = 0, disagreements = 0, positives = 0;
    auto check = [&](const Architecture& a, const Architecture& b) {
      const bool keys_equal = canonical_key(a) == canonical_key(b);
      disagreements += keys_equal != oracle::isomorphic(a, b);
      positives += keys_equal;
      ++pairs;
    };
    for (int i = 0; i < 600; ++i) {
      const Architecture a = random_arch(spec, rng);
      // Relabeled copy.
      std::vector<int> perm(a.num_nodes());
      std::iota(perm.begin(), perm.end(), 0);
      Architecture b;
      for (int tries = 0; tries < 20; ++tries) {
        for (int v = a.num_nodes() - 2; v > 1; --v) {
          std::swap(perm[v], perm[1 + rng.below(v)]);
        }
        if (oracle::relabel(a, perm, b)) break;
        std::iota(perm.begin(), perm.end(), 0);
        b = a;
      }
      check(a, b);
      // Pruned forms of two independent draws, and of a one-step mutant.
      check(prune_loose_ends(a), prune_loose_ends(random_arch(spec, rng)));
      const CellChoice base = sample_uniform_choice(spec, rng);
      check(prune_loose_ends(to_architecture(spec, base)),
            prune_loose_ends(to_architecture(spec, mutate_choice(spec, base, rng))));
    }
    o.require(disagreements == 0, "S" + std::to_string(id) + ": " +
                                      std::to_string(disagreements) + " disagreements");
    o.note("S" + std::to_string(id) + " " + std::to_string(pairs) + " pairs (" +
           std::to_string(positives) + " isomorphic)");
  }
  return o;
}

Outcome discretization() {
  Outcome o;
  const SearchSpaceSpec s1 = build_space(1);
  ArchWeights w(s1);
  auto set = [](std::span<double> dst, std::vector<double> v) {
    std::copy(v.begin(), v.end(), dst.begin());
  };
  set(w.beta(1), {0, 0, 1});
  set(w.beta(2), {0, 1, 0});
  set(w.alpha(3), {-1, 2, 1});
  set(w.beta(3), {0.1, 0, 0});
  set(w.alpha(4), {3, 0, 0, 3});
  set(w.beta(4), {0, 0.4, 0.4});
  set(w.gamma(), {0, 0, 0.5, 0, 1});
  const CellChoice fixture = discretize_choice(w);
  o.require(fixture.parent_sets == std::vector<std::uint32_t>{0b1, 0b11, 0b110, 0b1001, 0b10100},
            "fixture parent sets");
  o.require(fixture.ops == std::vector<Op>{Op::kMaxPool3x3, Op::kConv1x1, Op::kConv3x3, Op::kConv1x1},
            "fixture ops");

  Rng rng(77);
  int checked = 0;
  for (int id = 1; id <= 3; ++id) {
    const SearchSpaceSpec spec = build_space(id);
    for (int trial = 0; trial < 2000; ++trial) {
      const ArchWeights x = init_weights(spec, InitScheme::gaussian(2.0), rng.bits());
      const Architecture arch = discretize(x);
      ArchWeights shifted = x, mapped = x;
      for (std::size_t d = 0; d < x.num_decisions(); ++d) {
        const double c = 10.0 * rng.normal();
        for (double& v : shifted.logits(d)) v += c;
        for (double& v : mapped.logits(d)) v = std::atan(v) * 5.0 + v * v * v;
      }
      o.require(discretize(shifted) == arch, "shift changed the discretization");
      o.require(discretize(mapped) == arch, "monotone map changed the discretization");
      o.require(arch.edge_count() == kMaxEdges, "edge count " + std::to_string(arch.edge_count()));
      o.require(validate_architecture(arch).valid, "invalid discretized architecture");
      ++checked;
    }
    o.require(discretize(ArchWeights(spec)).edge_count() == kMaxEdges, "all-ties edge count");
  }
  if (o.pass) o.note("fixture ok; " + std::to_string(checked) + " random weightings: invariant, 9 edges, valid");
  return o;
}

Outcome gradient_check() {
  Outcome o;
  const auto start = Clock::now();
  const SearchSpaceSpec s1 = build_space(1);
  const BenchTable table = generate_surrogate_table(s1, 1);
  const ChoiceValues values(s1, table, 12);
  const ArchWeights w = init_weights(s1, InitScheme::gaussian(0.5), 31);

  std::vector<double> x = w.flat();
  std::vector<double> fd(x.size());
  const double h = 1e-5;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ArchWeights plus(s1), minus(s1);
    x[i] += h;
    plus.assign_flat(x);
    x[i] -= 2 * h;
    minus.assign_flat(x);
    x[i] += h;
    fd[i] = (exact_expected_error(plus, values) - exact_expected_error(minus, values)) / (2 * h);
  }

  const int estimates = 200;
  Rng rng(5);
  std::vector<double> sum(x.size(), 0.0), sum_sq(x.size(), 0.0);
  const ErrorFn error = [&](const CellChoice& c) { return values.value(choice_index(s1, c)); };
  for (int k = 0; k < estimates; ++k) {
    const std::vector<double> g = score_function_gradient(w, error, 8, rng).gradient.flat();
    for (std::size_t i = 0; i < g.size(); ++i) {
      sum[i] += g[i];
      sum_sq[i] += g[i] * g[i];
    }
  }
  int outside = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mean = sum[i] / estimates;
    const double var = std::max(0.0, sum_sq[i] / estimates - mean * mean) * estimates / (estimates - 1);
    const double se = std::sqrt(var / estimates);
    // Coordinates of single-candidate decisions have zero variance and zero
    // gradient; compare those against finite-difference round-off.
    const double tolerance = std::max(3.0 * se, 1e-9);
    if (3.0 * se > 1e-9) worst = std::max(worst, std::abs(mean - fd[i]) / se);
    outside += std::abs(mean - fd[i]) > tolerance;
  }
  const double t = seconds_since(start);
  o.require(outside == 0, std::to_string(outside) + " coordinates outside 3 SE");
  o.require(t < 120.0, fmt("took %.1f s", t));
  o.note(std::to_string(x.size()) + " coordinates, max |z| " + fmt("%.2f, %.2f s", worst, t));
  return o;
}

Outcome gumbel_statistics() {
  Outcome o;
  const SearchSpaceSpec s1 = build_space(1);
  const ArchWeights w = init_weights(s1, InitScheme::gaussian(0.8), 12);
  const int draws = 100000;
  Rng rng(99);
  std::vector<std::map<std::vector<int>, int>> counts(w.num_decisions());
  for (int i = 0; i < draws; ++i) {
    const GumbelSample s = gumbel_softmax(w, 1.0, rng);
    for (std::size_t d = 0; d < s.hard.size(); ++d) ++counts[d][s.hard[d]];
  }
  int checks = 0, outside = 0;
  double worst = 0.0;
  for (std::size_t d = 0; d < w.num_decisions(); ++d) {
    const auto logits = w.logits(d);
    const std::vector<double> p = oracle::softmax({logits.begin(), logits.end()});
    const int n = static_cast<int>(p.size());
    const int k = w.decisions()[d].choose;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      if (std::popcount(mask) != k) continue;
      std::vector<int> members;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1U) members.push_back(i);
      }
      const double prob = oracle::ordered_draw_probability(p, members);
      const double freq = static_cast<double>(counts[d][members]) / draws;
      const double sigma = std::sqrt(prob * (1 - prob) / draws);
      ++checks;
      if (sigma > 0) worst = std::max(worst, std::abs(freq - prob) / sigma);
      outside += std::abs(freq - prob) > 3.0 * sigma + 1e-12;
    }
  }
  o.require(outside == 0, std::to_string(outside) + " outcomes outside 3 sigma");

  // Soft samples approach one-hot as the temperature drops and flatten as it
  // rises.
  double low = 0.0, high = 0.0;
  const int soft_draws = 2000;
  for (int i = 0; i < soft_draws; ++i) {
    const GumbelSample cold = gumbel_softmax(w, 0.01, rng);
    const GumbelSample hot = gumbel_softmax(w, 100.0, rng);
    for (std::size_t d = 0; d < w.num_decisions(); ++d) {
      if (w.decisions()[d].num_candidates < 2) continue;
      low += *std::max_element(cold.soft[d].begin(), cold.soft[d].end());
      high += *std::max_element(hot.soft[d].begin(), hot.soft[d].end()) -
              1.0 / w.decisions()[d].num_candidates;
    }
  }
  const double usable = soft_draws * static_cast<double>(w.num_decisions() - 1);
  low /= usable;
  high /= usable;
  o.require(low > 0.98, fmt("mean max soft weight at tau=0.01 is %.4f", low));
  o.require(high < 0.05, fmt("mean excess over uniform at tau=100 is %.4f", high));
  o.note(std::to_string(checks) + " outcomes, max |z| " + fmt("%.2f", worst) +
         fmt("; tau=0.01 mean max weight %.4f, tau=100 excess %.4f", low, high));
  return o;
}

Outcome optimizer_suite() {
  Outcome o;
  const SearchSpaceSpec s1 = build_space(1);
  const BenchTable table = generate_surrogate_table(s1, 0);
  const auto start = Clock::now();
  int curves = 0;
  for (OptimizerKind kind : all_optimizers()) {
    OptimizerConfig c;
    c.kind = kind;
    c.epochs = 50;
    const auto runs = run_seeds(s1, table, c, {0, 1, 2, 3, 4, 5}, 1);
    for (const Trajectory& t : runs) {
      const RegretCurve curve = regret_trajectory(t, table, s1);
      bool ok = curve.points.size() == 51;
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const RegretPoint& p = curve.points[i];
        ok = ok && p.val_regret >= 0 && std::isfinite(p.test_regret);
        if (i > 0) ok = ok && p.val_regret <= curve.points[i - 1].val_regret &&
                        p.t_sim >= curve.points[i - 1].t_sim;
      }
      for (const TrajectoryEntry& e : t.epochs) ok = ok && validate_architecture(e.arch).valid;
      o.require(ok, std::string(optimizer_name(kind)) + " produced an invalid curve");
      ++curves;
    }
  }
  const double t = seconds_since(start);
  o.require(t < 60.0, fmt("suite took %.1f s", t));

  int wins = 0;
  const int pairs = 50;
  for (int s = 0; s < pairs; ++s) {
    const BenchTable paired = generate_surrogate_table(s1, s);
    OptimizerConfig c;
    c.epochs = 50;
    c.seed = s;
    c.kind = OptimizerKind::kRegEvolution;
    const Trajectory re = run_search(s1, paired, c);
    c.kind = OptimizerKind::kRandomSearch;
    const Trajectory rs = run_search(s1, paired, c);
    if (re.evaluations != rs.evaluations) o.require(false, "unequal evaluation budgets");
    wins += re.selection.val_full < rs.selection.val_full;
  }
  o.require(wins >= 40, "RE beat RS in " + std::to_string(wins) + "/50 pairs");
  o.note(std::to_string(curves) + fmt(" curves in %.2f s", t) + "; RE beat RS in " +
         std::to_string(wins) + "/50 paired seeds");
  return o;
}

Outcome tuner() {
  Outcome o;
  o.require(budget_ladder(25, 100, 2) == std::vector<int>{25, 50, 100}, "ladder (25,100,2)");
  for (int n = 1; n <= 16; ++n) {
    o.require(promoted_count(n, 2) == (n + 1) / 2, "promotion for n=" + std::to_string(n));
    TunerConfig cfg;
    cfg.configs_per_iteration = n;
    ConfigSpace space;
    space.add_continuous("x", 0, 1);
    Rng rng(n);
    const TunerTrace trace = successive_halving(
        [](const Config& c, int) { return ObjectiveResult{c[0], 1.0, 0}; }, space, cfg, rng);
    std::vector<int> want = {n};
    while (want.size() < 3) want.push_back((want.back() + 1) / 2);
    o.require(trace.rung_populations.at(0) == want, "SH populations for n=" + std::to_string(n));
  }

  // Tune arch_lr (with l2 and noise) for DARTS on a surrogate table, then
  // compare the tuned and default configurations on fresh seeds.
  const SearchSpaceSpec s1 = build_space(1);
  const BenchTable table = generate_surrogate_table(s1, 7);
  const ConfigSpace cs2 = config_space_preset(2);
  TunerConfig cfg;
  cfg.seed = 3;
  const auto start = Clock::now();
  const TuneResult tuned = run_tuner(OptimizerKind::kDartsSf, s1, table, cs2, cfg);
  const OptimizerConfig best = apply_config({}, cs2, tuned.incumbents.back().config);
  const double best_val = best_in_space(table, s1, 108, Metric::kValidation).value;
  double tuned_regret = 0.0, default_regret = 0.0;
  const int fresh = 20;
  for (int s = 0; s < fresh; ++s) {
    OptimizerConfig a = best, b;
    a.kind = b.kind = OptimizerKind::kDartsSf;
    a.epochs = b.epochs = 100;
    a.seed = b.seed = 1000 + s;
    tuned_regret += run_search(s1, table, a).selection.val_full - best_val;
    default_regret += run_search(s1, table, b).selection.val_full - best_val;
  }
  tuned_regret /= fresh;
  default_regret /= fresh;
  o.require(tuned.test_reads_during_tuning == 0, "tuning read test errors");
  o.require(tuned_regret < default_regret,
            fmt("tuned regret %.5f not below default %.5f", tuned_regret, default_regret));
  o.note("ladder [25,50,100]; SH arithmetic n=1..16 exact");
  o.note(fmt("tuned arch_lr %.3g: mean regret %.5f vs default %.5f", best.arch_lr, tuned_regret,
             default_regret) +
         fmt(" over 20 fresh seeds (%.1f s)", seconds_since(start)));
  return o;
}

Outcome correlation() {
  Outcome o;
  Rng rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(60));
    std::vector<double> xs(n), ys(n);
    const int levels = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n; ++i) {
      xs[i] = static_cast<double>(rng.below(levels));
      ys[i] = static_cast<double>(rng.below(levels + 2));
    }
    const auto got = spearman(xs, ys);
    const double want = oracle::spearman(xs, ys);
    if (got.has_value() != !std::isnan(want)) {
      o.require(false, "definedness differs from the oracle");
    } else if (got) {
      worst = std::max(worst, std::abs(*got - want));
    }
  }
  o.require(worst <= 1e-12, fmt("max oracle deviation %.3g", worst));

  const SearchSpaceSpec s1 = build_space(1);
  const BenchTable table = generate_surrogate_table(s1, 1);
  const std::vector<CanonicalKey> keys = loose_end_free_keys(s1);
  o.require(keys.size() == 3702, "population of " + std::to_string(keys.size()));
  const int seeds = 100;
  std::vector<int> snapshots(seeds);
  std::iota(snapshots.begin(), snapshots.end(), 0);
  std::vector<std::vector<CanonicalKey>> populations(seeds, keys);
  const CorrelationMatrix m = correlation_sweep(
      snapshots, populations,
      [&](std::size_t s, CanonicalKey key) {
        Rng noise(mix64(split_seed(s, 17) ^ key));
        return noise.normal();
      },
      table);
  int within = 0, total = 0;
  for (const auto& row : m.rho) {
    for (const auto& r : row) {
      within += r.has_value() && std::abs(*r) <= 0.05;
      ++total;
    }
  }
  const double fraction = static_cast<double>(within) / total;
  o.require(fraction >= 0.95, fmt("null sweep within 0.05 for %.3f", fraction));
  o.note(fmt("oracle max deviation %.2g; null sweep |rho| <= 0.05 in %.1f%% of %g seed-budget cells",
             worst, 100.0 * fraction, total));
  return o;
}

struct Run {
  int status = -1;
  std::string output;
};

Run shell(const std::string& args) {
  Run r;
  FILE* pipe = popen((std::string(SHOTBENCH_CLI) + " " + args + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "shotbench_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };

  const std::string table = at("gen/table.jsonl");
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"gen", "gen-table --space 1 --seed 5"},
      {"stats", "stats --space 2"},
      {"search", "search --algo darts --space 1 --table " + table + " --seeds 0..2 --epochs 20 --workers 2"},
      {"evo", "search --algo re --space 1 --table " + table + " --seeds 3,4 --epochs 20"},
      {"tune", "tune --algo gdas --space 1 --table " + table +
                   " --cs 3 --total-evaluations 8 --seed 1 --workers 2"},
      {"corr", "correlate --space 1 --table " + table + " --trajectory " +
                   at("search/trajectory_seed1.json") + " --every 5 --noise 0.01"},
  };
  int files = 0;
  for (const auto& [name, args] : runs) {
    const Run first = shell(args + " --out " + at(name));
    if (first.status != 0) {
      o.require(false, name + " failed: " + first.output);
      continue;
    }
    const Run replay = shell("replay --manifest " + at(name + "/manifest.json") + " --out " +
                             at(name + "_replay"));
    o.require(replay.status == 0, name + " replay: " + replay.output);
    for (const auto& entry : fs::directory_iterator(at(name))) {
      const std::string file = entry.path().filename().string();
      if (file == "manifest.json") continue;
      o.require(slurp(entry.path()) == slurp(dir / (name + "_replay") / file),
                name + "/" + file + " differs");
      ++files;
    }
  }
  o.note(std::to_string(runs.size()) + " runs replayed from their manifests, " +
         std::to_string(files) + " output files byte-identical");
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"search-space structure", space_structure},
      {"counting (forced part)", counting_forced},
      {"counting (convention study)", counting_conventions},
      {"isomorphism correctness", isomorphism},
      {"discretization", discretization},
      {"gradient check", gradient_check},
      {"gumbel-softmax statistics", gumbel_statistics},
      {"optimizer suite", optimizer_suite},
      {"tuner", tuner},
      {"correlation analytics", correlation},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %2zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), seconds_since(start), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
