// spiq: Clifford-point initialization for multi-angle QAOA.
//
// Subcommands mirror the workflow stages: gen a problem, search Clifford
// space, select diverse seeds, tune from them, or run the whole pipeline.
// All stages are deterministic functions of the config and master seed.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spiq/spiq.hpp"

namespace {

spiq::json load_config_or_default(const std::string& path) {
  if (path.empty()) return spiq::json::object();
  return spiq::read_json_file(path);
}

std::string default_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SPIQ_OUTPUT_DIR")) return env;
  return "spiq-out";
}

spiq::Problem load_problem(const std::string& path) { return spiq::load_problem_file(path); }

int run_gen(const spiq::ProblemConfig& pc, std::uint64_t seed, const std::string& out_path) {
  const spiq::Problem problem = spiq::make_problem(pc, spiq::derive_seed(seed, "problem-gen"));
  spiq::write_text_file(out_path, spiq::problem_to_json(problem).dump(2) + "\n");
  std::cout << spiq::json{{"written", out_path},
                          {"num_qubits", problem.hamiltonian.num_qubits()},
                          {"num_terms", problem.hamiltonian.terms().size()}}
                   .dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford-point initialization for multi-angle QAOA"};
  app.require_subcommand(1);

  // ---- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a problem instance file");
  spiq::ProblemConfig gen_pc;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "problem.json";
  gen->add_option("--kind", gen_pc.kind,
                  "maxcut-complete|maxcut-regular3|maxcut-ego|knapsack|hypergraph");
  gen->add_option("--n", gen_pc.n, "node count for graph kinds");
  gen->add_flag("--weighted,!--unweighted", gen_pc.weighted, "integer edge weights 0..10");
  gen->add_option("--items", gen_pc.items, "knapsack item count");
  gen->add_option("--num-vars", gen_pc.num_vars, "hypergraph variable count");
  gen->add_option("--subset-size", gen_pc.subset_size, "hypergraph subset size M");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path");

  // ---- search --------------------------------------------------------------
  auto* search = app.add_subcommand("search", "GA search over quarter-turn Clifford space");
  std::string search_problem, search_out = "pool.jsonl";
  std::uint32_t search_depth = 2;
  spiq::GaConfig search_ga;
  search->add_option("--problem", search_problem, "problem file")->required();
  search->add_option("--depth", search_depth, "ansatz depth p");
  search->add_option("--population", search_ga.population);
  search->add_option("--generations", search_ga.generations);
  search->add_option("--seed", search_ga.rng_seed);
  search->add_option("--out", search_out);

  // ---- select ----------------------------------------------------------------
  auto* select = app.add_subcommand("select", "pick diverse seeds from a candidate pool");
  std::string sel_problem, sel_pool, sel_out = "seeds.json", sel_method = "k-gaps";
  std::uint32_t sel_depth = 2, sel_k = 5;
  spiq::KGapsConfig sel_cfg;
  std::uint64_t sel_seed = 0;
  select->add_option("--problem", sel_problem)->required();
  select->add_option("--pool", sel_pool)->required();
  select->add_option("--method", sel_method, "k-gaps|fixed-interval");
  select->add_option("--k", sel_k);
  select->add_option("--top-m", sel_cfg.top_m);
  select->add_option("--tau", sel_cfg.tau);
  select->add_option("--depth", sel_depth);
  select->add_option("--seed", sel_seed);
  select->add_option("--out", sel_out);

  // ---- tune ------------------------------------------------------------------
  auto* tune = app.add_subcommand("tune", "multi-start local optimization from seeds");
  std::string tune_problem, tune_seeds, tune_out = "traces.json";
  std::uint32_t tune_depth = 2;
  spiq::TuneConfig tune_cfg;
  std::uint64_t tune_seed = 0;
  bool tune_noisy = false;
  tune->add_option("--problem", tune_problem)->required();
  tune->add_option("--seeds", tune_seeds)->required();
  tune->add_option("--depth", tune_depth);
  tune->add_option("--evals", tune_cfg.max_evals_per_start);
  tune->add_flag("--noisy", tune_noisy);
  tune->add_option("--p1", tune_cfg.noise.p1);
  tune->add_option("--p2", tune_cfg.noise.p2);
  tune->add_option("--pm", tune_cfg.noise.pm);
  tune->add_option("--trajectories", tune_cfg.noise.trajectories);
  tune->add_option("--seed", tune_seed);
  tune->add_option("--out", tune_out);

  // ---- pipeline ----------------------------------------------------------------
  auto* pipe = app.add_subcommand("pipeline", "run the full workflow");
  std::string pipe_config, pipe_out_dir;
  std::vector<std::string> pipe_baselines;
  std::string pipe_select;
  std::uint64_t pipe_seed = 0;
  bool pipe_seed_set = false;
  std::uint32_t pipe_threads = 0;
  bool pipe_threads_set = false;
  pipe->add_option("--config", pipe_config, "run config JSON");
  pipe->add_option("--out-dir", pipe_out_dir, "artifact directory");
  pipe->add_option("--baseline", pipe_baselines, "cafqa|random50")->allow_extra_args(false);
  pipe->add_option("--select", pipe_select, "k-gaps|fixed-interval");
  pipe->add_option("--seed", pipe_seed)->each([&](const std::string&) { pipe_seed_set = true; });
  pipe->add_option("--threads", pipe_threads)->each([&](const std::string&) { pipe_threads_set = true; });

  // ---- metrics ----------------------------------------------------------------
  auto* metrics = app.add_subcommand("metrics", "aggregate run.json files into a CSV table");
  std::vector<std::string> metrics_runs;
  std::string metrics_out;
  metrics->add_option("runs", metrics_runs, "run.json paths")->required();
  metrics->add_option("--out", metrics_out, "CSV output path (stdout when omitted)");

  // ---- verify --------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "rerun a config at two thread counts and compare");
  std::string verify_config;
  std::uint32_t verify_ta = 1, verify_tb = 8;
  verify->add_option("--config", verify_config)->required();
  verify->add_option("--threads-a", verify_ta);
  verify->add_option("--threads-b", verify_tb);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen(gen_pc, gen_seed, gen_out);

    if (*search) {
      const spiq::Problem problem = load_problem(search_problem);
      const auto ansatz = spiq::build_ansatz(problem.hamiltonian, search_depth);
      const spiq::CandidatePool pool = spiq::ga_search(ansatz, search_ga);
      spiq::write_text_file(search_out, spiq::pool_to_jsonl(pool));
      std::cout << spiq::json{{"written", search_out},
                              {"pool_size", pool.size()},
                              {"best_energy", pool.best().energy}}
                       .dump()
                << "\n";
      return 0;
    }

    if (*select) {
      const spiq::Problem problem = load_problem(sel_problem);
      const auto ansatz = spiq::build_ansatz(problem.hamiltonian, sel_depth);
      const spiq::CandidatePool pool = spiq::pool_from_jsonl(spiq::read_text_file(sel_pool));
      spiq::SeedSet seeds;
      if (sel_method == "k-gaps" || sel_method == "k_gaps") {
        seeds = spiq::k_gaps_select(ansatz, pool, sel_k, sel_cfg, sel_seed);
      } else if (sel_method == "fixed-interval" || sel_method == "fixed_interval") {
        seeds = spiq::fixed_interval_select(pool, sel_k);
      } else {
        throw std::invalid_argument("unknown selection method: " + sel_method);
      }
      spiq::write_text_file(sel_out, spiq::seed_set_to_json(seeds).dump(2) + "\n");
      std::cout << spiq::json{{"written", sel_out}, {"num_seeds", seeds.seeds.size()}}.dump() << "\n";
      return 0;
    }

    if (*tune) {
      const spiq::Problem problem = load_problem(tune_problem);
      const auto ansatz = spiq::build_ansatz(problem.hamiltonian, tune_depth);
      const spiq::SeedSet seeds = spiq::seed_set_from_json(spiq::read_json_file(tune_seeds));
      tune_cfg.noisy = tune_noisy;
      const spiq::StartProvenance prov = seeds.method == spiq::SelectionMethod::KGaps
                                             ? spiq::StartProvenance::SpiqKgaps
                                             : spiq::StartProvenance::SpiqFixed;
      std::vector<std::pair<spiq::ParameterPoint, spiq::StartProvenance>> starts;
      for (const auto& s : seeds.seeds) starts.emplace_back(spiq::angles_of(s.quarters), prov);
      const spiq::MultiStartResult ms = spiq::multi_start(ansatz, starts, tune_cfg, tune_seed);
      spiq::json traces = spiq::json::array();
      for (const auto& t : ms.traces) traces.push_back(spiq::trace_to_json(t));
      spiq::write_text_file(tune_out, traces.dump(2) + "\n");
      std::cout << spiq::json{{"written", tune_out},
                              {"best_final_energy", ms.traces[ms.best_index].final_energy}}
                       .dump()
                << "\n";
      return 0;
    }

    if (*pipe) {
      spiq::RunConfig cfg = spiq::run_config_from_json(load_config_or_default(pipe_config));
      if (pipe_seed_set) cfg.master_seed = pipe_seed;
      if (pipe_threads_set) cfg.threads = pipe_threads;
      if (!pipe_select.empty()) {
        if (pipe_select == "k-gaps" || pipe_select == "k_gaps") {
          cfg.selection_method = spiq::SelectionMethod::KGaps;
        } else if (pipe_select == "fixed-interval" || pipe_select == "fixed_interval") {
          cfg.selection_method = spiq::SelectionMethod::FixedInterval;
        } else {
          throw std::invalid_argument("unknown selection method: " + pipe_select);
        }
      }
      for (const auto& b : pipe_baselines) {
        if (b == "cafqa") {
          cfg.baseline_cafqa = true;
        } else if (b == "random" || b == "random50") {
          cfg.baseline_random = true;
        } else {
          throw std::invalid_argument("unknown baseline: " + b);
        }
      }
      if (!pipe_out_dir.empty()) cfg.output_dir = pipe_out_dir;
      cfg.output_dir = default_output_dir(cfg.output_dir);

      const spiq::RunOutput out = spiq::run_pipeline(cfg);
      spiq::write_run_artifacts(out, cfg.output_dir);
      std::cout << spiq::json{{"run", cfg.output_dir + "/run.json"},
                              {"pool_size", out.pool.size()},
                              {"best_clifford_energy", out.run["pool"]["best_energy"]},
                              {"determinism_hash", out.run["determinism_hash"]}}
                       .dump()
                << "\n";
      return 0;
    }

    if (*metrics) {
      std::vector<spiq::json> runs;
      for (const auto& p : metrics_runs) runs.push_back(spiq::read_json_file(p));
      const std::string csv = spiq::aggregate_metrics_csv(runs);
      if (metrics_out.empty()) {
        std::cout << csv;
      } else {
        spiq::write_text_file(metrics_out, csv);
        std::cout << spiq::json{{"written", metrics_out}, {"rows", runs.size()}}.dump() << "\n";
      }
      return 0;
    }

    if (*verify) {
      const spiq::RunConfig cfg = spiq::run_config_from_json(spiq::read_json_file(verify_config));
      const spiq::VerifyResult v = spiq::verify_determinism(cfg, verify_ta, verify_tb);
      std::cout << spiq::json{{"identical", v.identical},
                              {"hash_a", v.hash_a},
                              {"hash_b", v.hash_b},
                              {"threads_a", verify_ta},
                              {"threads_b", verify_tb}}
                       .dump()
                << "\n";
      return v.identical ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cout << spiq::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
