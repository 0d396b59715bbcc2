// Acceptance suite: one numbered experiment per release criterion, each
// printing a single PASS/FAIL line with its measured statistics. Run with a
// list of criterion numbers to execute a subset; the exit code counts
// failures.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../helpers.hpp"
#include "../properties.hpp"
#include "spiq/spiq.hpp"

namespace {

using namespace spiq;

double geometric_mean(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += std::log(x);
  return std::exp(acc / static_cast<double>(xs.size()));
}

// random problem mix used by the equivalence and gradient criteria
Problem random_small_problem(std::uint64_t seed, std::uint32_t max_qubits) {
  Rng rng(seed);
  for (;;) {
    const auto pick = rng.next_below(5);
    Problem p = [&]() {
      switch (pick) {
        case 0:
          return make_maxcut_problem(GraphKind::Complete, 4 + rng.next_below(4), true,
                                     rng.next_u64());
        case 1:
          return make_maxcut_problem(GraphKind::Regular3, 6 + 2 * rng.next_below(3), true,
                                     rng.next_u64());
        case 2:
          return make_maxcut_problem(GraphKind::Ego, 5 + rng.next_below(4), true, rng.next_u64());
        case 3: {
          KnapsackInstance k;
          const std::uint32_t items = 2 + rng.next_below(2);
          std::int64_t total = 0;
          for (std::uint32_t i = 0; i < items; ++i) {
            k.values.push_back(1 + static_cast<std::int64_t>(rng.next_below(9)));
            k.weights.push_back(1 + static_cast<std::int64_t>(rng.next_below(6)));
            total += k.weights.back();
          }
          k.capacity = std::max<std::int64_t>(1, total / 2);
          return make_knapsack_problem(k);
        }
        default:
          return make_feature_selection_problem(
              generate_hypergraph(5 + rng.next_below(4), 2, rng.next_u64()));
      }
    }();
    if (p.hamiltonian.num_qubits() <= max_qubits && !p.hamiltonian.terms().empty()) return p;
  }
}

// --- criterion 1: stabilizer-statevector equivalence ------------------------
bool c1(std::ostringstream& log) {
  const int instances = 20, points_per_instance = 50;
  double max_delta = 0.0;
  int checked = 0;
  for (int inst = 0; inst < instances; ++inst) {
    const Problem p = random_small_problem(9000 + inst, 10);
    const auto ansatz = build_ansatz(p.hamiltonian, 1 + inst % 2);
    Rng rng(500 + inst);
    for (int i = 0; i < points_per_instance; ++i) {
      const auto q = testing_helpers::random_quarters(ansatz.num_params(), rng);
      const double delta =
          std::abs(clifford_energy(ansatz, q) - exact_energy(ansatz, angles_of(q)));
      max_delta = std::max(max_delta, delta);
      ++checked;
    }
  }
  log << checked << " points, max |delta| = " << max_delta;
  return checked == 1000 && max_delta <= 1e-9;
}

// --- criterion 2: parameter-shift gradients vs finite differences -----------
bool c2(std::ostringstream& log) {
  int points = 0;
  double max_err = 0.0;
  for (int inst = 0; points < 100; ++inst) {
    const Problem p = random_small_problem(11000 + inst, 8);
    const auto ansatz = build_ansatz(p.hamiltonian, 1 + inst % 2);
    Rng rng(700 + inst);
    for (int i = 0; i < 5 && points < 100; ++i) {
      const auto q = testing_helpers::random_quarters(ansatz.num_params(), rng);
      const auto shift = gradient_norm(ansatz, q);
      const auto fd = finite_difference_gradient(ansatz, angles_of(q), 1e-5);
      for (std::size_t j = 0; j < fd.size(); ++j)
        max_err = std::max(max_err, std::abs(shift.gradient[j] - fd[j]));
      ++points;
    }
  }
  log << points << " points, max per-component error = " << max_err;
  return max_err <= 1e-6;
}

// --- criterion 3: GA optimality on enumerable spaces -------------------------
bool c3(std::ostringstream& log) {
  int hits = 0;
  for (int inst = 0; inst < 10; ++inst) {
    // small graphs keep (m + n) * p <= 8: paths and single edges
    WeightedGraph g;
    Rng rng(1300 + inst);
    if (inst % 2 == 0) {
      g.num_nodes = 2;
      g.edges = {{0, 1, 1.0 + static_cast<double>(rng.next_below(10))}};
    } else {
      g.num_nodes = 3;
      g.edges = {{0, 1, 1.0 + static_cast<double>(rng.next_below(10))},
                 {1, 2, 1.0 + static_cast<double>(rng.next_below(10))}};
    }
    const auto ansatz = build_ansatz(maxcut_hamiltonian(g), 1);

    double exhaustive = 1e300;
    const std::size_t d = ansatz.num_params();
    QuarterTurnPoint q(d, 0);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * d)); ++code) {
      for (std::size_t j = 0; j < d; ++j) q[j] = (code >> (2 * j)) & 3;
      exhaustive = std::min(exhaustive, clifford_energy(ansatz, q));
    }

    GaConfig cfg;
    cfg.generations = 100;
    cfg.rng_seed = 2700 + inst;
    const double ga_best = ga_search(ansatz, cfg).best().energy;
    if (std::abs(ga_best - exhaustive) < 1e-12) ++hits;
  }
  log << hits << "/10 runs reached the exhaustive optimum";
  return hits >= 9;
}

// --- criterion 4: CAFQA < random-50 < SPIQ on weighted complete graphs -------
bool c4(std::ostringstream& log) {
  int ordered = 0;
  for (int inst = 0; inst < 10; ++inst) {
    const auto problem = make_maxcut_problem(GraphKind::Complete, 10, true, 4200 + inst);
    const auto& h = problem.hamiltonian;
    const auto ansatz = build_ansatz(h, 1);
    const double e_opt = brute_force_ground(h).energy;

    const double cafqa = cafqa_baseline(ansatz).best().energy;
    const double rand50 = random_baseline(ansatz, 50, derive_seed(4300 + inst, "rand")).best_energy;
    GaConfig cfg;
    cfg.generations = 150;
    cfg.rng_seed = derive_seed(4400 + inst, "ga");
    const double spiq_e = ga_search(ansatz, cfg).best().energy;

    const double acc_cafqa = cafqa / e_opt, acc_rand = rand50 / e_opt, acc_spiq = spiq_e / e_opt;
    if (acc_cafqa < acc_rand && acc_rand < acc_spiq) ++ordered;
    log << (inst ? " " : "") << "[" << acc_cafqa << "," << acc_rand << "," << acc_spiq << "]";
  }
  log << " -> ordered in " << ordered << "/10";
  return ordered >= 8;
}

// --- criterion 5: small-instance accuracy ------------------------------------
bool c5(std::ostringstream& log) {
  std::vector<double> accs;
  for (int inst = 0; inst < 10; ++inst) {
    const auto problem = make_maxcut_problem(GraphKind::Regular3, 12, true, 5200 + inst);
    const auto ansatz = build_ansatz(problem.hamiltonian, 2);
    GaConfig cfg;
    cfg.generations = 1200;
    cfg.rng_seed = derive_seed(5300 + inst, "ga");
    const double e_init = ga_search(ansatz, cfg).best().energy;
    const double e_opt = brute_force_ground(problem.hamiltonian).energy;
    accs.push_back(e_init / e_opt);
  }
  const double gmean = geometric_mean(accs);

  // 4-item knapsack on 9 qubits (5 slack bits)
  KnapsackInstance k;
  k.values = {11, 6, 13, 8};
  k.weights = {8, 6, 9, 7};
  k.capacity = 17;
  const auto problem = make_knapsack_problem(k);
  const auto ansatz = build_ansatz(problem.hamiltonian, 2);
  GaConfig cfg;
  cfg.generations = 2000;
  cfg.rng_seed = derive_seed(5400, "ga");
  const double e_init = ga_search(ansatz, cfg).best().energy;
  const double e_opt = brute_force_ground(problem.hamiltonian).energy;
  const double acc_knap = e_init / e_opt;

  log << "3-regular geometric mean accuracy = " << gmean << " (n=12, p=2), knapsack accuracy = "
      << acc_knap << " (9 qubits)";
  return gmean >= 0.95 && acc_knap >= 0.99;
}

// --- criterion 6: reduction factor --------------------------------------------
bool c6(std::ostringstream& log) {
  const std::uint64_t shots = 1000000;
  std::vector<double> rfs;
  int above_one = 0;
  for (int inst = 0; inst < 10; ++inst) {
    const auto problem = make_maxcut_problem(GraphKind::Regular3, 12, true, 6200 + inst);
    const auto ansatz = build_ansatz(problem.hamiltonian, 2);
    GaConfig cfg;
    cfg.generations = 400;
    cfg.rng_seed = derive_seed(6300 + inst, "ga");
    const auto pool = ga_search(ansatz, cfg);

    Rng rng(derive_seed(6400 + inst, "rand-point"));
    const auto rand_point = testing_helpers::random_angles(ansatz.num_params(), rng);
    const auto s_rand =
        sample_bitstrings(ansatz, rand_point, shots, derive_seed(6500 + inst, "shots-r"));
    const auto s_init = sample_bitstrings(ansatz, angles_of(pool.best().quarters), shots,
                                          derive_seed(6600 + inst, "shots-i"));
    const double rf = reduction_factor(s_rand, s_init);
    rfs.push_back(rf);
    if (rf > 1.0) ++above_one;
    log << (inst ? " " : "RF: ") << rf;
  }
  const double gmean = geometric_mean(rfs);
  log << "; geometric mean = " << gmean << ", >1 in " << above_one << "/10";
  return above_one >= 9 && gmean >= 5.0;
}

// --- criterion 7: multi-start benefit -----------------------------------------
bool c7(std::ostringstream& log) {
  int spiq_wins_exact = 0, spiq_wins_noisy = 0;
  for (int inst = 0; inst < 10; ++inst) {
    const auto problem = make_maxcut_problem(GraphKind::Regular3, 10, true, 7200 + inst);
    const auto ansatz = build_ansatz(problem.hamiltonian, 2);
    GaConfig ga;
    ga.generations = 300;
    ga.rng_seed = derive_seed(7300 + inst, "ga");
    const auto pool = ga_search(ansatz, ga);
    const auto seeds = k_gaps_select(ansatz, pool, 5, derive_seed(7400 + inst, "kmeans"));

    std::vector<std::pair<ParameterPoint, StartProvenance>> spiq_starts, random_starts;
    for (const auto& s : seeds.seeds)
      spiq_starts.emplace_back(angles_of(s.quarters), StartProvenance::SpiqKgaps);
    Rng rng(derive_seed(7500 + inst, "random-starts"));
    for (int i = 0; i < 5; ++i)
      random_starts.emplace_back(testing_helpers::random_angles(ansatz.num_params(), rng),
                                 StartProvenance::Random);

    TuneConfig exact_cfg;
    exact_cfg.max_evals_per_start = 500;
    const auto ms_spiq = multi_start(ansatz, spiq_starts, exact_cfg, derive_seed(7600 + inst, "t"));
    const auto ms_rand = multi_start(ansatz, random_starts, exact_cfg, derive_seed(7700 + inst, "t"));
    if (ms_spiq.traces[ms_spiq.best_index].final_energy <=
        ms_rand.traces[ms_rand.best_index].final_energy + 1e-12)
      ++spiq_wins_exact;

    TuneConfig noisy_cfg = exact_cfg;
    noisy_cfg.noisy = true;
    noisy_cfg.noise = NoiseModel{1e-4, 1e-3, 0.0, 32};
    const auto ns = multi_start(ansatz, spiq_starts, noisy_cfg, derive_seed(7800 + inst, "t"));
    const auto nr = multi_start(ansatz, random_starts, noisy_cfg, derive_seed(7900 + inst, "t"));
    if (ns.traces[ns.best_index].final_energy <= nr.traces[nr.best_index].final_energy + 1e-12)
      ++spiq_wins_noisy;
  }
  log << "SPIQ multi-start wins: " << spiq_wins_exact << "/10 noiseless, " << spiq_wins_noisy
      << "/10 noisy (p1=1e-4, p2=1e-3)";
  return spiq_wins_exact >= 8 && spiq_wins_noisy >= 7;
}

// --- criterion 8: large-instance relative improvement ---------------------------
bool c8(std::ostringstream& log) {
  int above_one = 0;
  int idx = 0;
  for (const std::uint32_t n : {50u, 100u}) {
    for (int rep = 0; rep < 5; ++rep, ++idx) {
      const auto problem = make_maxcut_problem(GraphKind::Regular3, n, true, 8200 + idx);
      const auto ansatz = build_ansatz(problem.hamiltonian, 2);
      GaConfig cfg;
      cfg.generations = 120;
      cfg.wall_time_seconds = 60.0;  // stay well inside the 10-minute budget
      cfg.rng_seed = derive_seed(8300 + idx, "ga");
      const double e_init = ga_search(ansatz, cfg).best().energy;
      const double e_rand =
          random_baseline(ansatz, 1, derive_seed(8400 + idx, "rand")).best_energy;
      const double ri = relative_improvement(e_init, e_rand);
      if (ri > 1.0) ++above_one;
      log << (idx ? " " : "RI: ") << ri;
    }
  }
  log << "; >1 in " << above_one << "/10";
  return above_one == 10;
}

// --- criterion 9: determinism ----------------------------------------------------
bool c9(std::ostringstream& log) {
  RunConfig cfg;
  cfg.problem.kind = "maxcut-regular3";
  cfg.problem.n = 8;
  cfg.problem.weighted = true;
  cfg.depth = 2;
  cfg.ga.population = 32;
  cfg.ga.generations = 40;
  cfg.selection_k = 3;
  cfg.tune.max_evals_per_start = 100;
  cfg.tune_random_starts = 2;
  cfg.shots = 50000;
  cfg.baseline_cafqa = true;
  cfg.baseline_random = true;
  cfg.random_restarts = 20;
  cfg.master_seed = 90;
  const auto v = verify_determinism(cfg, 1, 8);
  log << "hash(threads=1) = " << v.hash_a << ", hash(threads=8) = " << v.hash_b;
  return v.identical;
}

// --- criterion 10: property suites ------------------------------------------------
bool c10(std::ostringstream& log) {
  std::size_t cases = 0;
  try {
    cases += properties::pubo_roundtrip(101, 60);
    cases += properties::maxcut_negcut(102, 40);
    cases += properties::knapsack_dominance(103, 25);
    cases += properties::merge_equivalence(104, 60);
    cases += properties::circuit_invariants(105, 120);
    cases += properties::tableau_invariants(106, 150);
    cases += properties::clifford_vs_statevector(107, 400);
    cases += properties::stabilizer_algebra(108, 300);
    cases += properties::statevector_invariants(109, 150);
    cases += properties::noisy_lower_bound(110, 20);
    cases += properties::search_invariants(111, 15);
    cases += properties::selection_invariants(112, 500);
    cases += properties::tuner_invariants(113, 40);
    cases += properties::metrics_invariants(114, 400);
  } catch (const std::exception& e) {
    log << e.what() << " (after " << cases << " cases)";
    return false;
  }
  log << cases << " randomized cases, all green";
  return cases >= 10000;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)(std::ostringstream&);
};

const Criterion kCriteria[] = {
    {1, "stabilizer-statevector equivalence (1e-9)", c1},
    {2, "parameter-shift gradients match finite differences (1e-6)", c2},
    {3, "GA optimality on enumerable spaces (>= 9/10)", c3},
    {4, "CAFQA < random-50 < SPIQ accuracy ordering (>= 8/10)", c4},
    {5, "small-instance accuracy (geomean >= 0.95; knapsack >= 0.99)", c5},
    {6, "reduction factor (>1 in >= 9/10, geomean >= 5)", c6},
    {7, "multi-start benefit (>= 8/10 noiseless, >= 7/10 noisy)", c7},
    {8, "large-instance relative improvement (> 1 on 10/10)", c8},
    {9, "thread-count determinism of run.json", c9},
    {10, "module invariant property suites (>= 10^4 cases)", c10},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::ostringstream log;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn(log);
    } catch (const std::exception& e) {
      log << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "[c" << c.id << "] " << (ok ? "PASS" : "FAIL") << " " << c.name << " — "
              << log.str() << " (" << secs << "s)" << std::endl;
    if (!ok) ++failures;
  }
  return failures;
}
