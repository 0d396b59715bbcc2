#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spiq/parallel.hpp"
#include "spiq/rng.hpp"
#include "spiq/stabilizer.hpp"
#include "spiq/statevector.hpp"

namespace spiq {

struct GaConfig {
  std::uint32_t population = 64;
  std::uint32_t generations = 500;
  std::optional<double> wall_time_seconds;
  std::uint32_t tournament_size = 3;
  double crossover_prob = 0.9;
  std::optional<double> mutation_prob_per_gene;  // default 1/num_params
  std::uint32_t elitism = 2;
  std::uint32_t duplicate_retries = 32;  // re-mutations before accepting a known genome
  std::uint64_t rng_seed = 0;
  std::size_t pool_capacity = 1'000'000;

  void validate() const {
    if (population < 1 || generations < 1) throw std::invalid_argument("GaConfig: population and generations must be >= 1");
    if (elitism >= population) throw std::invalid_argument("GaConfig: elitism must be < population");
    if (tournament_size < 1) throw std::invalid_argument("GaConfig: tournament size must be >= 1");
    if (crossover_prob < 0.0 || crossover_prob > 1.0) throw std::invalid_argument("GaConfig: crossover_prob not in [0,1]");
    if (mutation_prob_per_gene && (*mutation_prob_per_gene < 0.0 || *mutation_prob_per_gene > 1.0))
      throw std::invalid_argument("GaConfig: mutation_prob_per_gene not in [0,1]");
    if (pool_capacity < 1) throw std::invalid_argument("GaConfig: pool capacity must be >= 1");
  }
};

inline bool genome_less(const QuarterTurnPoint& a, const QuarterTurnPoint& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct PoolEntry {
  QuarterTurnPoint quarters;
  double energy = 0.0;
};

// Ordering used everywhere a "best" candidate is picked: energy ascending,
// ties broken by lexicographic genome so runs are fully deterministic.
inline bool entry_less(const PoolEntry& a, const PoolEntry& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return genome_less(a.quarters, b.quarters);
}

// Every unique genome the search evaluated, with its exact Clifford energy.
class CandidatePool {
 public:
  explicit CandidatePool(std::size_t capacity = 1'000'000) : capacity_(capacity) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<PoolEntry>& entries() const { return entries_; }

  std::optional<double> lookup(const QuarterTurnPoint& q) const {
    const auto it = index_.find(key_of(q));
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second].energy;
  }

  bool insert(const QuarterTurnPoint& q, double energy) {
    const auto [it, fresh] = index_.try_emplace(key_of(q), entries_.size());
    if (!fresh) return false;
    entries_.push_back({q, energy});
    return true;
  }

  const PoolEntry& best() const {
    if (entries_.empty()) throw std::invalid_argument("CandidatePool: empty pool");
    return *std::min_element(entries_.begin(), entries_.end(), entry_less);
  }

  std::vector<PoolEntry> sorted_entries() const {
    std::vector<PoolEntry> sorted = entries_;
    std::sort(sorted.begin(), sorted.end(), entry_less);
    return sorted;
  }

  // Keeps the capacity best entries; ties resolved by the global ordering.
  void enforce_capacity() {
    if (entries_.size() <= capacity_) return;
    std::sort(entries_.begin(), entries_.end(), entry_less);
    entries_.resize(capacity_);
    index_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(key_of(entries_[i].quarters), i);
  }

 private:
  static std::string key_of(const QuarterTurnPoint& q) {
    return std::string(reinterpret_cast<const char*>(q.data()), q.size());
  }

  std::size_t capacity_;
  std::vector<PoolEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

// Energies for one generation; pool hits are reused, misses evaluated in
// parallel and reduced in population order.
inline std::vector<double> evaluate_generation(const MaQaoaAnsatz& ansatz,
                                               const std::vector<QuarterTurnPoint>& pop,
                                               CandidatePool& pool) {
  std::vector<double> energies(pop.size());
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (auto hit = pool.lookup(pop[i])) {
      energies[i] = *hit;
    } else {
      misses.push_back(i);
    }
  }
  parallel_for(0, misses.size(), [&](std::size_t j) {
    energies[misses[j]] = clifford_energy(ansatz, pop[misses[j]]);
  });
  for (const auto i : misses) pool.insert(pop[i], energies[i]);
  return energies;
}

}  // namespace detail

// Gradient-free genetic search over quarter-turn genomes: tournament
// selection, uniform crossover, per-gene redraw mutation, elitism. Fitness is
// the exact Clifford energy (lower is better). Identical seeds give identical
// pools regardless of worker count.
inline CandidatePool ga_search(const MaQaoaAnsatz& ansatz, const GaConfig& cfg) {
  cfg.validate();
  const std::size_t d = ansatz.num_params();
  if (d == 0) throw std::invalid_argument("ga_search: ansatz has no parameters");
  const double mut_prob = cfg.mutation_prob_per_gene.value_or(1.0 / static_cast<double>(d));
  const auto t_start = std::chrono::steady_clock::now();

  Rng rng(cfg.rng_seed);
  CandidatePool pool(cfg.pool_capacity);

  std::vector<QuarterTurnPoint> pop(cfg.population, QuarterTurnPoint(d));
  for (auto& g : pop)
    for (auto& gene : g) gene = static_cast<std::uint8_t>(rng.next_below(4));
  std::vector<double> energies = detail::evaluate_generation(ansatz, pop, pool);
  pool.enforce_capacity();

  const auto fitter = [&](std::size_t a, std::size_t b) {
    if (energies[a] != energies[b]) return energies[a] < energies[b] ? a : b;
    return genome_less(pop[a], pop[b]) ? a : b;
  };

  for (std::uint32_t gen = 1; gen < cfg.generations; ++gen) {
    if (cfg.wall_time_seconds) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;
      if (elapsed.count() >= *cfg.wall_time_seconds) break;
    }

    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (energies[a] != energies[b]) return energies[a] < energies[b];
      return genome_less(pop[a], pop[b]);
    });

    std::vector<QuarterTurnPoint> next;
    next.reserve(cfg.population);
    for (std::uint32_t e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[e]]);

    while (next.size() < cfg.population) {
      const auto tournament = [&]() {
        std::size_t winner = rng.next_below(pop.size());
        for (std::uint32_t t = 1; t < cfg.tournament_size; ++t)
          winner = fitter(winner, rng.next_below(pop.size()));
        return winner;
      };
      const std::size_t pa = tournament();
      const std::size_t pb = tournament();
      QuarterTurnPoint child = pop[pa];
      if (rng.next_bool(cfg.crossover_prob)) {
        for (std::size_t j = 0; j < d; ++j)
          if (rng.next_bool(0.5)) child[j] = pop[pb][j];
      }
      for (std::size_t j = 0; j < d; ++j)
        if (rng.next_bool(mut_prob)) child[j] = static_cast<std::uint8_t>(rng.next_below(4));
      // already-evaluated genomes are re-mutated so each generation spends
      // its budget on novel points; on tiny genome spaces the retry cap lets
      // duplicates through once the space is nearly exhausted
      for (std::uint32_t retry = 0; retry < cfg.duplicate_retries && pool.lookup(child); ++retry) {
        const std::size_t j = rng.next_below(d);
        child[j] = static_cast<std::uint8_t>(rng.next_below(4));
      }
      next.push_back(std::move(child));
    }

    pop = std::move(next);
    energies = detail::evaluate_generation(ansatz, pop, pool);
    pool.enforce_capacity();
  }
  return pool;
}

// Exhaustive sweep of the tied-angle (standard 2p-parameter) Clifford points:
// one shared cost quarter and one shared mixer quarter per layer, 4^(2p)
// points in total.
inline CandidatePool cafqa_baseline(const MaQaoaAnsatz& ansatz) {
  const std::uint32_t p = ansatz.depth();
  if (p > 8) throw std::invalid_argument("cafqa_baseline: depth too large to enumerate");
  const std::uint64_t total = std::uint64_t{1} << (4 * p);  // 4^(2p)

  std::vector<QuarterTurnPoint> points(total);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::uint8_t> cost(p), mixer(p);
    std::uint64_t c = code;
    for (std::uint32_t l = 0; l < p; ++l) {
      cost[l] = static_cast<std::uint8_t>(c & 3);
      c >>= 2;
      mixer[l] = static_cast<std::uint8_t>(c & 3);
      c >>= 2;
    }
    points[code] = expand_tied_quarters(ansatz, cost, mixer);
  }
  std::vector<double> energies(total);
  parallel_for(0, total, [&](std::size_t i) { energies[i] = clifford_energy(ansatz, points[i]); });

  CandidatePool pool(std::max<std::size_t>(total, 1));
  for (std::uint64_t i = 0; i < total; ++i) pool.insert(points[i], energies[i]);
  return pool;
}

struct RandomBaselineResult {
  ParameterPoint best_point;
  double best_energy = 0.0;
  bool clifford_rounded = false;  // true when evaluated at rounded quarters
  std::vector<double> energies;   // per-restart energies, draw order
};

inline QuarterTurnPoint round_to_quarters(const ParameterPoint& p) {
  QuarterTurnPoint q(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const long k = std::lround(p[j] / (kPi / 2.0));
    q[j] = static_cast<std::uint8_t>(((k % 4) + 4) % 4);
  }
  return q;
}

// Best of k uniform draws from [-pi, pi)^d. Beyond the statevector cap the
// draws are evaluated at their nearest quarter-turn rounding on the
// stabilizer engine and the result is flagged accordingly.
inline RandomBaselineResult random_baseline(const MaQaoaAnsatz& ansatz, std::uint32_t restarts,
                                            std::uint64_t rng_seed,
                                            std::uint32_t cap = kDefaultStatevectorCap) {
  if (restarts < 1) throw std::invalid_argument("random_baseline: need restarts >= 1");
  Rng rng(rng_seed);
  const bool rounded = ansatz.num_qubits() > cap;

  RandomBaselineResult result;
  result.clifford_rounded = rounded;
  std::vector<ParameterPoint> draws(restarts, ParameterPoint(ansatz.num_params()));
  for (auto& p : draws)
    for (auto& theta : p) theta = rng.next_in(-kPi, kPi);

  result.energies.resize(restarts);
  parallel_for(0, restarts, [&](std::size_t i) {
    result.energies[i] = rounded ? clifford_energy(ansatz, round_to_quarters(draws[i]))
                                 : exact_energy(ansatz, draws[i], cap);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < restarts; ++i)
    if (result.energies[i] < result.energies[best]) best = i;
  result.best_point = rounded ? angles_of(round_to_quarters(draws[best])) : draws[best];
  result.best_energy = result.energies[best];
  return result;
}

}  // namespace spiq
