#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "spiq/hamiltonian.hpp"
#include "spiq/parallel.hpp"

namespace spiq {

struct GroundResult {
  double energy = 0.0;
  std::vector<std::uint64_t> minimizers;  // all basis indices attaining the minimum
};

// Exact minimum of the diagonal Hamiltonian by enumeration over 2^n basis
// states, chunked with a deterministic min-reduction in chunk order.
inline GroundResult brute_force_ground(const IsingHamiltonian& h) {
  const std::uint32_t n = h.num_qubits();
  if (n > 26) throw std::invalid_argument("brute_force_ground: more than 26 qubits");
  const detail::DiagonalEvaluator eval(h);
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t chunk = std::max<std::uint64_t>(std::uint64_t{1} << 16, total / (8 * max_threads()));
  const std::uint64_t num_chunks = (total + chunk - 1) / chunk;

  std::vector<GroundResult> partial(num_chunks);
  parallel_for(0, num_chunks, [&](std::size_t c) {
    const std::uint64_t lo = c * chunk, hi = std::min(total, lo + chunk);
    GroundResult best;
    best.energy = eval.at(lo);
    best.minimizers.push_back(lo);
    for (std::uint64_t z = lo + 1; z < hi; ++z) {
      const double e = eval.at(z);
      if (e < best.energy) {
        best.energy = e;
        best.minimizers.assign(1, z);
      } else if (e == best.energy) {
        best.minimizers.push_back(z);
      }
    }
    partial[c] = std::move(best);
  });

  GroundResult out = std::move(partial[0]);
  for (std::uint64_t c = 1; c < num_chunks; ++c) {
    if (partial[c].energy < out.energy) {
      out = std::move(partial[c]);
    } else if (partial[c].energy == out.energy) {
      out.minimizers.insert(out.minimizers.end(), partial[c].minimizers.begin(),
                            partial[c].minimizers.end());
    }
  }
  return out;
}

inline double brute_force_max_energy(const IsingHamiltonian& h) {
  const std::uint32_t n = h.num_qubits();
  if (n > 26) throw std::invalid_argument("brute_force_max_energy: more than 26 qubits");
  const detail::DiagonalEvaluator eval(h);
  const std::uint64_t total = std::uint64_t{1} << n;
  double best = eval.at(0);
  for (std::uint64_t z = 1; z < total; ++z) best = std::max(best, eval.at(z));
  return best;
}

// Accuracy = E_init / E_opt. Well-behaved only when both energies are
// negative (the benchmarks' convention); callers needing the zero-crossing
// guard should use make_accuracy instead.
inline double accuracy(double e_init, double e_opt) {
  if (e_opt == 0.0) throw std::invalid_argument("accuracy: undefined for e_opt = 0");
  return e_init / e_opt;
}

struct AccuracyValue {
  std::optional<double> value;
  bool normalized = false;  // value is (e_max - e_init)/(e_max - e_opt)
};

// Raw ratio when both energies are negative; otherwise the normalized gap,
// which preserves ordering across zero crossings.
inline AccuracyValue make_accuracy(double e_init, double e_opt, double e_max) {
  if (e_opt < 0.0 && e_init <= 0.0) return {accuracy(e_init, e_opt), false};
  if (e_max == e_opt) return {1.0, true};  // degenerate spectrum
  return {(e_max - e_init) / (e_max - e_opt), true};
}

inline std::size_t distinct_count(const std::vector<std::uint64_t>& samples) {
  std::unordered_set<std::uint64_t> seen(samples.begin(), samples.end());
  return seen.size();
}

// RF = N_random / N_init over equal shot counts.
inline double reduction_factor(const std::vector<std::uint64_t>& samples_random,
                               const std::vector<std::uint64_t>& samples_init) {
  if (samples_init.empty() || samples_random.empty())
    throw std::invalid_argument("reduction_factor: empty sample sets");
  if (samples_random.size() != samples_init.size())
    throw std::invalid_argument("reduction_factor: shot counts must match");
  return static_cast<double>(distinct_count(samples_random)) /
         static_cast<double>(distinct_count(samples_init));
}

inline double relative_improvement(double e_init, double e_rand) {
  if (e_rand == 0.0) throw std::invalid_argument("relative_improvement: undefined for e_rand = 0");
  return e_init / e_rand;
}

struct ImprovementValue {
  std::optional<double> ratio;  // meaningful when both energies are negative
  std::optional<double> gap;    // e_rand - e_init, reported when the ratio is not
};

inline ImprovementValue make_relative_improvement(double e_init, double e_rand) {
  if (e_init < 0.0 && e_rand < 0.0) return {relative_improvement(e_init, e_rand), std::nullopt};
  return {std::nullopt, e_rand - e_init};
}

// The paper's three initialization-quality metrics plus the raw values they
// recompute from.
struct MetricsReport {
  std::optional<double> accuracy;
  bool accuracy_normalized = false;
  std::optional<double> reduction_factor;
  std::optional<double> relative_improvement;
  std::optional<double> improvement_gap;
  std::optional<double> e_init;
  std::optional<double> e_opt;
  std::optional<double> e_max;
  std::optional<double> e_rand;
  std::optional<std::uint64_t> distinct_random;
  std::optional<std::uint64_t> distinct_init;
  std::uint64_t shots = 0;
  std::uint64_t master_seed = 0;
};

inline MetricsReport build_metrics_report(std::optional<double> e_init, std::optional<double> e_opt,
                                          std::optional<double> e_max, std::optional<double> e_rand,
                                          std::optional<std::uint64_t> distinct_random,
                                          std::optional<std::uint64_t> distinct_init,
                                          std::uint64_t shots, std::uint64_t master_seed) {
  MetricsReport r;
  r.e_init = e_init;
  r.e_opt = e_opt;
  r.e_max = e_max;
  r.e_rand = e_rand;
  r.distinct_random = distinct_random;
  r.distinct_init = distinct_init;
  r.shots = shots;
  r.master_seed = master_seed;
  if (e_init && e_opt && e_max) {
    const AccuracyValue a = make_accuracy(*e_init, *e_opt, *e_max);
    r.accuracy = a.value;
    r.accuracy_normalized = a.normalized;
  }
  if (distinct_random && distinct_init && *distinct_init > 0)
    r.reduction_factor = static_cast<double>(*distinct_random) / static_cast<double>(*distinct_init);
  if (e_init && e_rand) {
    const ImprovementValue v = make_relative_improvement(*e_init, *e_rand);
    r.relative_improvement = v.ratio;
    r.improvement_gap = v.gap;
  }
  return r;
}

}  // namespace spiq
