#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "spiq/io.hpp"

namespace spiq {

struct ProblemConfig {
  std::string kind = "maxcut-regular3";  // maxcut-{complete,regular3,ego} | knapsack | hypergraph | file
  std::uint32_t n = 10;                  // node count for graph kinds
  bool weighted = true;
  std::uint32_t items = 4;        // knapsack
  std::uint32_t num_vars = 6;     // hypergraph
  std::uint32_t subset_size = 2;  // hypergraph
  std::string path;               // kind == "file"
};

// One document drives the whole workflow; every stage seed is derived from
// master_seed, so a config and a seed pin the entire run.
struct RunConfig {
  ProblemConfig problem;
  std::uint32_t depth = 2;
  GaConfig ga;
  SelectionMethod selection_method = SelectionMethod::KGaps;
  std::uint32_t selection_k = 5;
  KGapsConfig kgaps;
  TuneConfig tune;
  std::uint32_t tune_random_starts = 0;
  std::uint64_t shots = 100000;
  std::uint32_t random_restarts = 50;
  bool baseline_cafqa = false;
  bool baseline_random = false;
  std::uint64_t master_seed = 0;
  std::string output_dir;
  std::uint32_t threads = 0;  // 0 = hardware concurrency
  std::uint32_t statevector_cap = kDefaultStatevectorCap;
  std::optional<std::uint32_t> tune_skip_threshold;  // default = statevector cap
  std::uint32_t brute_force_cap = 26;

  void validate() const {
    ga.validate();
    tune.validate();
    if (depth < 1) throw std::invalid_argument("RunConfig: depth must be >= 1");
    if (selection_k < 1) throw std::invalid_argument("RunConfig: selection k must be >= 1");
    if (brute_force_cap > 26) throw std::invalid_argument("RunConfig: brute-force cap above 26");
  }
};

inline json run_config_to_json(const RunConfig& c) {
  json doc;
  doc["problem"] = json{{"kind", c.problem.kind},       {"n", c.problem.n},
                        {"weighted", c.problem.weighted}, {"items", c.problem.items},
                        {"num_vars", c.problem.num_vars}, {"subset_size", c.problem.subset_size},
                        {"path", c.problem.path}};
  doc["depth"] = c.depth;
  json ga{{"population", c.ga.population},
          {"generations", c.ga.generations},
          {"tournament_size", c.ga.tournament_size},
          {"crossover_prob", c.ga.crossover_prob},
          {"elitism", c.ga.elitism},
          {"pool_capacity", c.ga.pool_capacity}};
  ga["mutation_prob_per_gene"] =
      c.ga.mutation_prob_per_gene ? json(*c.ga.mutation_prob_per_gene) : json(nullptr);
  ga["wall_time_seconds"] = c.ga.wall_time_seconds ? json(*c.ga.wall_time_seconds) : json(nullptr);
  doc["ga"] = ga;
  doc["selection"] = json{{"method", to_string(c.selection_method)},
                          {"k", c.selection_k},
                          {"top_m", c.kgaps.top_m},
                          {"tau", c.kgaps.tau}};
  json tune{{"max_evals_per_start", c.tune.max_evals_per_start},
            {"objective", c.tune.noisy ? "noisy" : "exact"},
            {"random_starts", c.tune_random_starts}};
  if (c.tune.noisy)
    tune["noise"] = json{{"p1", c.tune.noise.p1},
                         {"p2", c.tune.noise.p2},
                         {"pm", c.tune.noise.pm},
                         {"trajectories", c.tune.noise.trajectories}};
  doc["tune"] = tune;
  doc["shots"] = c.shots;
  doc["random_restarts"] = c.random_restarts;
  doc["baseline_cafqa"] = c.baseline_cafqa;
  doc["baseline_random"] = c.baseline_random;
  doc["master_seed"] = c.master_seed;
  doc["output_dir"] = c.output_dir;
  doc["threads"] = c.threads;
  doc["statevector_cap"] = c.statevector_cap;
  doc["tune_skip_threshold"] =
      c.tune_skip_threshold ? json(*c.tune_skip_threshold) : json(nullptr);
  doc["brute_force_cap"] = c.brute_force_cap;
  return doc;
}

inline RunConfig run_config_from_json(const json& doc) {
  RunConfig c;
  if (doc.contains("problem")) {
    const json& p = doc.at("problem");
    c.problem.kind = p.value("kind", c.problem.kind);
    c.problem.n = p.value("n", c.problem.n);
    c.problem.weighted = p.value("weighted", c.problem.weighted);
    c.problem.items = p.value("items", c.problem.items);
    c.problem.num_vars = p.value("num_vars", c.problem.num_vars);
    c.problem.subset_size = p.value("subset_size", c.problem.subset_size);
    c.problem.path = p.value("path", c.problem.path);
  }
  c.depth = doc.value("depth", c.depth);
  if (doc.contains("ga")) {
    const json& g = doc.at("ga");
    c.ga.population = g.value("population", c.ga.population);
    c.ga.generations = g.value("generations", c.ga.generations);
    c.ga.tournament_size = g.value("tournament_size", c.ga.tournament_size);
    c.ga.crossover_prob = g.value("crossover_prob", c.ga.crossover_prob);
    c.ga.elitism = g.value("elitism", c.ga.elitism);
    c.ga.pool_capacity = g.value("pool_capacity", c.ga.pool_capacity);
    if (g.contains("mutation_prob_per_gene") && !g.at("mutation_prob_per_gene").is_null())
      c.ga.mutation_prob_per_gene = g.at("mutation_prob_per_gene").get<double>();
    if (g.contains("wall_time_seconds") && !g.at("wall_time_seconds").is_null())
      c.ga.wall_time_seconds = g.at("wall_time_seconds").get<double>();
  }
  if (doc.contains("selection")) {
    const json& s = doc.at("selection");
    const std::string method = s.value("method", std::string("k_gaps"));
    if (method == "k_gaps" || method == "k-gaps") {
      c.selection_method = SelectionMethod::KGaps;
    } else if (method == "fixed_interval" || method == "fixed-interval") {
      c.selection_method = SelectionMethod::FixedInterval;
    } else {
      throw std::invalid_argument("unknown selection method: " + method);
    }
    c.selection_k = s.value("k", c.selection_k);
    c.kgaps.top_m = s.value("top_m", c.kgaps.top_m);
    c.kgaps.tau = s.value("tau", c.kgaps.tau);
  }
  if (doc.contains("tune")) {
    const json& t = doc.at("tune");
    c.tune.max_evals_per_start = t.value("max_evals_per_start", c.tune.max_evals_per_start);
    const std::string objective = t.value("objective", std::string("exact"));
    if (objective == "noisy") {
      c.tune.noisy = true;
    } else if (objective != "exact") {
      throw std::invalid_argument("unknown tune objective: " + objective);
    }
    if (t.contains("noise")) {
      const json& nm = t.at("noise");
      c.tune.noise.p1 = nm.value("p1", c.tune.noise.p1);
      c.tune.noise.p2 = nm.value("p2", c.tune.noise.p2);
      c.tune.noise.pm = nm.value("pm", c.tune.noise.pm);
      c.tune.noise.trajectories = nm.value("trajectories", c.tune.noise.trajectories);
    }
    c.tune_random_starts = t.value("random_starts", c.tune_random_starts);
  }
  c.shots = doc.value("shots", c.shots);
  c.random_restarts = doc.value("random_restarts", c.random_restarts);
  c.baseline_cafqa = doc.value("baseline_cafqa", c.baseline_cafqa);
  c.baseline_random = doc.value("baseline_random", c.baseline_random);
  c.master_seed = doc.value("master_seed", c.master_seed);
  c.output_dir = doc.value("output_dir", c.output_dir);
  c.threads = doc.value("threads", c.threads);
  c.statevector_cap = doc.value("statevector_cap", c.statevector_cap);
  if (doc.contains("tune_skip_threshold") && !doc.at("tune_skip_threshold").is_null())
    c.tune_skip_threshold = doc.at("tune_skip_threshold").get<std::uint32_t>();
  c.brute_force_cap = doc.value("brute_force_cap", c.brute_force_cap);
  return c;
}

}  // namespace spiq
