#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spiq/io.hpp"
#include "spiq/metrics.hpp"
#include "spiq/pipeline_config.hpp"

namespace spiq {

// ---------------------------------------------------------------------------
// Problem construction (workflow step 1)
// ---------------------------------------------------------------------------

inline Problem make_maxcut_problem(GraphKind kind, std::uint32_t n, bool weighted,
                                   std::uint64_t seed) {
  const auto weighting = weighted ? GraphWeighting::IntegerZeroToTen : GraphWeighting::Unweighted;
  WeightedGraph g = generate_graph(kind, n, weighting, seed);
  json meta;
  meta["kind"] = "maxcut";
  meta["graph_kind"] = kind == GraphKind::Complete ? "complete"
                       : kind == GraphKind::Regular3 ? "regular3"
                                                     : "ego";
  meta["weighted"] = weighted;
  if (kind == GraphKind::Ego) meta["ego_leaf_edge_prob"] = kEgoLeafEdgeProb;
  meta["graph"] = graph_to_json(g);
  meta["seed"] = seed;
  return Problem{maxcut_hamiltonian(g), std::move(meta), std::nullopt};
}

inline Problem make_maxcut_problem(const WeightedGraph& g) {
  json meta;
  meta["kind"] = "maxcut";
  meta["graph_kind"] = "file";
  meta["graph"] = graph_to_json(g);
  return Problem{maxcut_hamiltonian(g), std::move(meta), std::nullopt};
}

// Item values and weights are drawn from {1..10}; the capacity is set to
// 70% of the total weight (at least the heaviest item) so instances are
// neither trivial nor infeasible.
inline KnapsackInstance generate_knapsack(std::uint32_t items, std::uint64_t seed) {
  if (items < 1) throw std::invalid_argument("generate_knapsack: need at least one item");
  Rng rng(seed);
  KnapsackInstance k;
  std::int64_t total_w = 0, max_w = 0;
  for (std::uint32_t i = 0; i < items; ++i) {
    k.values.push_back(1 + static_cast<std::int64_t>(rng.next_below(10)));
    const auto w = 1 + static_cast<std::int64_t>(rng.next_below(10));
    k.weights.push_back(w);
    total_w += w;
    max_w = std::max(max_w, w);
  }
  k.capacity = std::max<std::int64_t>(max_w, (7 * total_w + 9) / 10);
  return k;
}

inline Problem make_knapsack_problem(const KnapsackInstance& k) {
  KnapsackInstance inst = k;
  if (inst.penalty <= 0.0) inst.penalty = inst.default_penalty();
  json meta;
  meta["kind"] = "knapsack";
  meta["values"] = inst.values;
  meta["weights"] = inst.weights;
  meta["capacity"] = inst.capacity;
  meta["penalty"] = inst.penalty;
  meta["num_items"] = inst.values.size();
  meta["num_slack_bits"] = inst.num_slack_bits();
  meta["slack_coefficients"] = inst.slack_coefficients();
  return Problem{knapsack_hamiltonian(inst), std::move(meta), std::nullopt};
}

// Random feature-selection instance: positive per-variable relevance, negative
// pairwise/triple redundancy (the shape mutual-information pipelines produce).
inline HypergraphObjective generate_hypergraph(std::uint32_t num_vars, std::uint32_t subset_size,
                                               std::uint64_t seed) {
  Rng rng(seed);
  HypergraphObjective h;
  h.num_vars = num_vars;
  h.subset_size = subset_size;
  for (std::uint32_t i = 0; i < num_vars; ++i) h.linear[i] = rng.next_in(0.5, 1.5);
  for (std::uint32_t i = 0; i < num_vars; ++i)
    for (std::uint32_t j = i + 1; j < num_vars; ++j) h.pairs[{i, j}] = -rng.next_in(0.0, 0.6);
  for (std::uint32_t i = 0; i < num_vars; ++i)
    for (std::uint32_t j = i + 1; j < num_vars; ++j)
      for (std::uint32_t l = j + 1; l < num_vars; ++l)
        if (rng.next_bool(0.15)) h.triples[{i, j, l}] = -rng.next_in(0.0, 0.3);
  return h;
}

inline Problem make_feature_selection_problem(const HypergraphObjective& h) {
  HypergraphObjective inst = h;
  if (inst.lagrange <= 0.0) inst.lagrange = inst.default_lagrange();
  json meta;
  meta["kind"] = "feature_selection";
  meta["hypergraph"] = hypergraph_to_json(inst);
  meta["subset_size"] = inst.subset_size;
  return Problem{feature_selection_hamiltonian(inst), std::move(meta), std::nullopt};
}

inline Problem load_problem_file(const std::string& path) {
  const json doc = read_json_file(path);
  if (doc.contains("terms")) return problem_from_json(doc);
  if (doc.contains("edges")) return make_maxcut_problem(graph_from_json(doc));
  if (doc.contains("num_vars")) return make_feature_selection_problem(hypergraph_from_json(doc));
  throw std::invalid_argument("unrecognized problem file: " + path);
}

inline Problem make_problem(const ProblemConfig& cfg, std::uint64_t seed) {
  if (cfg.kind == "maxcut-complete") return make_maxcut_problem(GraphKind::Complete, cfg.n, cfg.weighted, seed);
  if (cfg.kind == "maxcut-regular3") return make_maxcut_problem(GraphKind::Regular3, cfg.n, cfg.weighted, seed);
  if (cfg.kind == "maxcut-ego") return make_maxcut_problem(GraphKind::Ego, cfg.n, cfg.weighted, seed);
  if (cfg.kind == "knapsack") return make_knapsack_problem(generate_knapsack(cfg.items, seed));
  if (cfg.kind == "hypergraph")
    return make_feature_selection_problem(generate_hypergraph(cfg.num_vars, cfg.subset_size, seed));
  if (cfg.kind == "file") return load_problem_file(cfg.path);
  throw std::invalid_argument("unknown problem kind: " + cfg.kind);
}

// ---------------------------------------------------------------------------
// Solution decoding (workflow step 6)
// ---------------------------------------------------------------------------

inline json decode_solution(const Problem& problem, const Bitstring& z) {
  if (z.size() != problem.hamiltonian.num_qubits())
    throw std::invalid_argument("decode_solution: bitstring length mismatch");
  const std::string kind = problem.metadata.value("kind", "custom");
  json out;
  out["bitstring"] = bitstring_to_string(z);
  out["energy"] = problem.hamiltonian.evaluate(z);

  if (kind == "maxcut") {
    const WeightedGraph g = graph_from_json(problem.metadata.at("graph"));
    json part0 = json::array(), part1 = json::array();
    for (std::uint32_t v = 0; v < g.num_nodes; ++v) (z[v] ? part1 : part0).push_back(v);
    out["partition_0"] = part0;
    out["partition_1"] = part1;
    out["cut_value"] = g.cut_value(z);
  } else if (kind == "knapsack") {
    const auto values = problem.metadata.at("values").get<std::vector<std::int64_t>>();
    const auto weights = problem.metadata.at("weights").get<std::vector<std::int64_t>>();
    const auto capacity = problem.metadata.at("capacity").get<std::int64_t>();
    const auto slack_coeffs = problem.metadata.at("slack_coefficients").get<std::vector<std::int64_t>>();
    json items = json::array();
    std::int64_t total_v = 0, total_w = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!z[i]) continue;
      items.push_back(i);
      total_v += values[i];
      total_w += weights[i];
    }
    std::int64_t slack = 0;
    std::string slack_bits;
    for (std::size_t s = 0; s < slack_coeffs.size(); ++s) {
      const bool bit = z[values.size() + s];
      slack_bits.push_back(bit ? '1' : '0');
      if (bit) slack += slack_coeffs[s];
    }
    out["items"] = items;
    out["total_value"] = total_v;
    out["total_weight"] = total_w;
    out["feasible"] = total_w <= capacity;
    out["slack_bits"] = slack_bits;
    out["slack_value"] = slack;
  } else if (kind == "feature_selection") {
    const auto m = problem.metadata.at("subset_size").get<std::uint32_t>();
    json selected = json::array();
    std::uint32_t count = 0;
    for (std::uint32_t v = 0; v < z.size(); ++v)
      if (z[v]) {
        selected.push_back(v);
        ++count;
      }
    out["selected"] = selected;
    out["constraint_satisfied"] = count == m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full pipeline (workflow steps 1-6)
// ---------------------------------------------------------------------------

struct RunOutput {
  json run;  // the run.json document
  Problem problem;
  CandidatePool pool{1};
  SeedSet seeds;
  std::vector<TuneTrace> traces;
  std::vector<TuneTrace> random_traces;
  json ansatz_doc;
};

inline std::string determinism_hash(const json& run_doc) {
  json copy = run_doc;
  copy.erase("timing");
  copy.erase("determinism_hash");
  const std::uint64_t h = detail::fnv1a(copy.dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline RunOutput run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  set_max_threads(cfg.threads);
  using clock = std::chrono::steady_clock;
  const auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  json timing;

  // 1: problem
  auto t0 = clock::now();
  RunOutput out;
  out.problem = make_problem(cfg.problem, derive_seed(cfg.master_seed, "problem-gen"));
  const IsingHamiltonian& h = out.problem.hamiltonian;
  const std::uint32_t n = h.num_qubits();
  timing["problem_seconds"] = seconds_since(t0);

  // 2: ansatz
  const MaQaoaAnsatz ansatz = build_ansatz(h, cfg.depth);
  out.ansatz_doc = ansatz_to_json(ansatz);

  // 3: Clifford search
  t0 = clock::now();
  GaConfig ga = cfg.ga;
  ga.rng_seed = derive_seed(cfg.master_seed, "ga");
  out.pool = ga_search(ansatz, ga);
  const PoolEntry best_clifford = out.pool.best();
  const double e_init = best_clifford.energy;
  timing["search_seconds"] = seconds_since(t0);

  // 4: seed selection
  t0 = clock::now();
  out.seeds = cfg.selection_method == SelectionMethod::KGaps
                  ? k_gaps_select(ansatz, out.pool, cfg.selection_k, cfg.kgaps,
                                  derive_seed(cfg.master_seed, "kmeans"))
                  : fixed_interval_select(out.pool, cfg.selection_k);
  timing["selection_seconds"] = seconds_since(t0);

  // baselines
  json baselines;
  baselines["cafqa"] = nullptr;
  baselines["random"] = nullptr;
  std::optional<double> cafqa_best;
  std::optional<double> random_best;
  if (cfg.baseline_cafqa) {
    t0 = clock::now();
    const CandidatePool cp = cafqa_baseline(ansatz);
    cafqa_best = cp.best().energy;
    baselines["cafqa"] = json{{"points", cp.size()}, {"best_energy", *cafqa_best}};
    timing["cafqa_seconds"] = seconds_since(t0);
  }
  if (cfg.baseline_random) {
    t0 = clock::now();
    const RandomBaselineResult rb = random_baseline(
        ansatz, cfg.random_restarts, derive_seed(cfg.master_seed, "random-baseline"),
        cfg.statevector_cap);
    random_best = rb.best_energy;
    baselines["random"] = json{{"restarts", cfg.random_restarts},
                               {"best_energy", rb.best_energy},
                               {"clifford_rounded", rb.clifford_rounded}};
    timing["random_baseline_seconds"] = seconds_since(t0);
  }

  // 5: multi-start tuning (skipped beyond the statevector threshold)
  t0 = clock::now();
  const std::uint32_t skip_at = cfg.tune_skip_threshold.value_or(cfg.statevector_cap);
  const bool tuned = n <= skip_at && n <= cfg.statevector_cap;
  json tuning;
  tuning["skipped"] = !tuned;
  std::optional<ParameterPoint> final_point;
  if (tuned) {
    TuneConfig tc = cfg.tune;
    tc.statevector_cap = cfg.statevector_cap;
    const StartProvenance prov = cfg.selection_method == SelectionMethod::KGaps
                                     ? StartProvenance::SpiqKgaps
                                     : StartProvenance::SpiqFixed;
    std::vector<std::pair<ParameterPoint, StartProvenance>> starts;
    for (const auto& s : out.seeds.seeds) starts.emplace_back(angles_of(s.quarters), prov);
    const MultiStartResult ms = multi_start(ansatz, starts, tc, derive_seed(cfg.master_seed, "tuner"));
    out.traces = ms.traces;
    final_point = ms.traces[ms.best_index].final_point;
    json traces = json::array();
    for (const auto& tr : ms.traces) traces.push_back(trace_to_json(tr));
    tuning["traces"] = traces;
    tuning["best_index"] = ms.best_index;
    tuning["best_final_energy"] = ms.traces[ms.best_index].final_energy;

    if (cfg.tune_random_starts > 0) {
      Rng rng(derive_seed(cfg.master_seed, "tune-random"));
      std::vector<std::pair<ParameterPoint, StartProvenance>> rstarts;
      for (std::uint32_t i = 0; i < cfg.tune_random_starts; ++i) {
        ParameterPoint p(ansatz.num_params());
        for (auto& theta : p) theta = rng.next_in(-kPi, kPi);
        rstarts.emplace_back(std::move(p), StartProvenance::Random);
      }
      const MultiStartResult rms =
          multi_start(ansatz, rstarts, tc, derive_seed(cfg.master_seed, "tuner-random"));
      out.random_traces = rms.traces;
      json rtraces = json::array();
      for (const auto& tr : rms.traces) rtraces.push_back(trace_to_json(tr));
      tuning["random_traces"] = rtraces;
      tuning["random_best_final_energy"] = rms.traces[rms.best_index].final_energy;
    }
  }
  timing["tuning_seconds"] = seconds_since(t0);

  // 6: metrics + decode
  t0 = clock::now();
  std::optional<double> e_opt, e_max;
  if (n <= cfg.brute_force_cap) {
    const GroundResult ground = brute_force_ground(h);
    e_opt = ground.energy;
    e_max = brute_force_max_energy(h);
  } else if (out.problem.known_optimal) {
    e_opt = out.problem.known_optimal;
  }

  std::optional<std::uint64_t> distinct_rand, distinct_init;
  if (n <= cfg.statevector_cap && cfg.shots > 0) {
    Rng rng(derive_seed(cfg.master_seed, "rf-random-point"));
    ParameterPoint rand_point(ansatz.num_params());
    for (auto& theta : rand_point) theta = rng.next_in(-kPi, kPi);
    const auto s_rand = sample_bitstrings(ansatz, rand_point, cfg.shots,
                                          derive_seed(cfg.master_seed, "rf-random-shots"),
                                          cfg.statevector_cap);
    const auto s_init = sample_bitstrings(ansatz, angles_of(best_clifford.quarters), cfg.shots,
                                          derive_seed(cfg.master_seed, "rf-init-shots"),
                                          cfg.statevector_cap);
    distinct_rand = distinct_count(s_rand);
    distinct_init = distinct_count(s_init);
  }

  // E_rand for relative improvement: a single random initialization.
  std::optional<double> e_rand;
  {
    const RandomBaselineResult rb1 =
        random_baseline(ansatz, 1, derive_seed(cfg.master_seed, "ri-random"), cfg.statevector_cap);
    e_rand = rb1.best_energy;
  }

  const MetricsReport report = build_metrics_report(e_init, e_opt, e_max, e_rand, distinct_rand,
                                                    distinct_init, cfg.shots, cfg.master_seed);
  json metrics_doc = metrics_to_json(report);
  if (cafqa_best && e_opt && e_max) {
    const AccuracyValue a = make_accuracy(*cafqa_best, *e_opt, *e_max);
    baselines["cafqa"]["accuracy"] = a.value ? json(*a.value) : json(nullptr);
    baselines["cafqa"]["accuracy_normalized"] = a.normalized;
  }
  if (random_best && e_opt && e_max) {
    const AccuracyValue a = make_accuracy(*random_best, *e_opt, *e_max);
    baselines["random"]["accuracy"] = a.value ? json(*a.value) : json(nullptr);
    baselines["random"]["accuracy_normalized"] = a.normalized;
  }

  json solution = nullptr;
  if (tuned && final_point) {
    const DenseState st = simulate_point(ansatz, *final_point, cfg.statevector_cap);
    const auto& amps = st.amplitudes();
    std::size_t arg = 0;
    double best_p = -1.0;
    for (std::size_t zi = 0; zi < amps.size(); ++zi) {
      const double p = std::norm(amps[zi]);
      if (p > best_p) {
        best_p = p;
        arg = zi;
      }
    }
    const Bitstring z = index_to_bitstring(arg, n);
    solution = json{{"most_probable_bitstring", bitstring_to_string(z)},
                    {"probability", best_p},
                    {"decoded", decode_solution(out.problem, z)}};
  }
  timing["metrics_seconds"] = seconds_since(t0);

  json run;
  run["config"] = run_config_to_json(cfg);
  run["problem"] = json{{"num_qubits", n},
                        {"num_clauses", ansatz.num_clauses()},
                        {"kind", out.problem.metadata.value("kind", "custom")},
                        {"offset", h.offset()}};
  run["ansatz"] = json{{"depth", cfg.depth}, {"num_params", ansatz.num_params()}};
  run["pool"] = json{{"size", out.pool.size()},
                     {"best_energy", e_init},
                     {"best_quarters", best_clifford.quarters}};
  run["seeds"] = seed_set_to_json(out.seeds);
  run["baselines"] = baselines;
  run["tuning"] = tuning;
  run["metrics"] = metrics_doc;
  run["solution"] = solution;
  run["timing"] = timing;
  run["determinism_hash"] = "";
  run["determinism_hash"] = determinism_hash(run);
  out.run = std::move(run);
  return out;
}

inline void write_run_artifacts(const RunOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  write_text_file(path("run.json"), out.run.dump(2) + "\n");
  write_text_file(path("problem.json"), problem_to_json(out.problem).dump(2) + "\n");
  write_text_file(path("ansatz.json"), out.ansatz_doc.dump(2) + "\n");
  write_text_file(path("pool.jsonl"), pool_to_jsonl(out.pool));
  write_text_file(path("seeds.json"), seed_set_to_json(out.seeds).dump(2) + "\n");
  json traces = json::array();
  for (const auto& t : out.traces) traces.push_back(trace_to_json(t));
  for (const auto& t : out.random_traces) traces.push_back(trace_to_json(t));
  write_text_file(path("traces.json"), traces.dump(2) + "\n");
}

struct VerifyResult {
  bool identical = false;
  std::string hash_a, hash_b;
};

// Two full runs at different worker counts must agree on every non-timing
// byte of run.json.
inline VerifyResult verify_determinism(const RunConfig& cfg, std::uint32_t threads_a,
                                       std::uint32_t threads_b) {
  RunConfig a = cfg, b = cfg;
  a.threads = threads_a;
  b.threads = threads_b;
  const RunOutput ra = run_pipeline(a);
  const RunOutput rb = run_pipeline(b);
  VerifyResult v;
  // The config echo records the thread count, which legitimately differs;
  // compare the hashes computed over thread-count-scrubbed documents.
  json da = ra.run, db = rb.run;
  da["config"].erase("threads");
  db["config"].erase("threads");
  v.hash_a = determinism_hash(da);
  v.hash_b = determinism_hash(db);
  v.identical = v.hash_a == v.hash_b;
  return v;
}

// CSV benchmark table over a set of run.json documents.
inline std::string aggregate_metrics_csv(const std::vector<json>& runs) {
  std::ostringstream csv;
  csv << "kind,num_qubits,depth,num_params,master_seed,pool_size,e_init,e_opt,accuracy,"
         "accuracy_normalized,reduction_factor,relative_improvement,tuned_final_energy\n";
  const auto cell = [](const json& doc, std::initializer_list<const char*> keys) -> std::string {
    const json* cur = &doc;
    for (const char* k : keys) {
      if (!cur->contains(k) || cur->at(k).is_null()) return "";
      cur = &cur->at(k);
    }
    return cur->dump();
  };
  for (const auto& r : runs) {
    csv << cell(r, {"problem", "kind"}) << ',' << cell(r, {"problem", "num_qubits"}) << ','
        << cell(r, {"ansatz", "depth"}) << ',' << cell(r, {"ansatz", "num_params"}) << ','
        << cell(r, {"metrics", "master_seed"}) << ',' << cell(r, {"pool", "size"}) << ','
        << cell(r, {"metrics", "e_init"}) << ',' << cell(r, {"metrics", "e_opt"}) << ','
        << cell(r, {"metrics", "accuracy"}) << ',' << cell(r, {"metrics", "accuracy_normalized"})
        << ',' << cell(r, {"metrics", "reduction_factor"}) << ','
        << cell(r, {"metrics", "relative_improvement"}) << ','
        << cell(r, {"tuning", "best_final_energy"}) << '\n';
  }
  return csv.str();
}

}  // namespace spiq
