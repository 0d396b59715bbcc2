#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spiq/parallel.hpp"
#include "spiq/rng.hpp"
#include "spiq/statevector.hpp"

namespace spiq {

enum class StartProvenance { SpiqFixed, SpiqKgaps, Random, Cafqa };

inline const char* to_string(StartProvenance p) {
  switch (p) {
    case StartProvenance::SpiqFixed: return "spiq_fixed";
    case StartProvenance::SpiqKgaps: return "spiq_kgaps";
    case StartProvenance::Random: return "random";
    default: return "cafqa";
  }
}

struct TuneConfig {
  std::uint32_t max_evals_per_start = 500;
  bool noisy = false;
  NoiseModel noise;
  std::uint64_t optimizer_seed = 0;
  std::uint32_t statevector_cap = kDefaultStatevectorCap;

  void validate() const {
    if (max_evals_per_start < 1) throw std::invalid_argument("TuneConfig: budget must be >= 1");
    if (noisy) noise.validate();
  }
};

struct TuneTrace {
  StartProvenance provenance = StartProvenance::Random;
  ParameterPoint start;
  // (evaluation index, best energy seen so far); recorded at eval 0 and at
  // every improvement, so the curve is non-increasing by construction.
  std::vector<std::pair<std::uint64_t, double>> best_curve;
  ParameterPoint final_point;
  double final_energy = 0.0;
  std::uint64_t evals_used = 0;
};

namespace detail {

// Objective seen by the optimizer: angles are wrapped into [-pi, pi) before
// simulation, and under noise each call gets its own counter-derived
// trajectory stream so reruns are reproducible.
class TuneObjective {
 public:
  TuneObjective(const MaQaoaAnsatz& ansatz, const TuneConfig& cfg)
      : ansatz_(ansatz), cfg_(cfg) {}

  double operator()(const ParameterPoint& raw) {
    const ParameterPoint p = normalized(raw);
    const std::uint64_t idx = count_++;
    return cfg_.noisy
               ? noisy_energy(ansatz_, p, cfg_.noise, derive_seed(cfg_.optimizer_seed, "noisy-eval", idx),
                              cfg_.statevector_cap)
               : exact_energy(ansatz_, p, cfg_.statevector_cap);
  }

  std::uint64_t count() const { return count_; }

 private:
  const MaQaoaAnsatz& ansatz_;
  TuneConfig cfg_;
  std::uint64_t count_ = 0;
};

}  // namespace detail

// Derivative-free local tuning via Nelder-Mead. Contract: the reported best
// never exceeds the start energy, at most max_evals objective calls are
// consumed, and identical seeds give identical traces.
inline TuneTrace local_optimize(const MaQaoaAnsatz& ansatz, const ParameterPoint& start,
                                const TuneConfig& cfg,
                                StartProvenance provenance = StartProvenance::Random) {
  cfg.validate();
  ansatz.check_point(start.size());
  const std::size_t d = start.size();
  detail::TuneObjective objective(ansatz, cfg);

  TuneTrace trace;
  trace.provenance = provenance;
  trace.start = normalized(start);
  trace.final_point = trace.start;
  double best = std::numeric_limits<double>::infinity();

  const auto track = [&](const ParameterPoint& p, double f) {
    if (f < best) {
      best = f;
      trace.final_point = normalized(p);
      trace.best_curve.emplace_back(objective.count() - 1, best);
    }
  };
  const auto budget_left = [&]() { return objective.count() < cfg.max_evals_per_start; };

  // initial simplex: the start plus one axis-step vertex per dimension
  constexpr double kStep = 0.25;
  std::vector<ParameterPoint> simplex;
  std::vector<double> f;
  simplex.push_back(trace.start);
  f.push_back(objective(simplex[0]));
  track(simplex[0], f[0]);
  for (std::size_t j = 0; j < d && budget_left(); ++j) {
    ParameterPoint v = trace.start;
    v[j] += kStep;
    simplex.push_back(v);
    f.push_back(objective(v));
    track(v, f.back());
  }

  if (simplex.size() == d + 1 && d >= 1) {
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<std::size_t> ord(d + 1);
    while (budget_left()) {
      for (std::size_t i = 0; i <= d; ++i) ord[i] = i;
      std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
        if (f[a] != f[b]) return f[a] < f[b];
        return a < b;
      });
      if (f[ord[d]] - f[ord[0]] < 1e-12) break;

      ParameterPoint centroid(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[ord[i]][j];
      for (auto& c : centroid) c /= static_cast<double>(d);
      const std::size_t worst = ord[d];

      const auto blend = [&](double t) {
        ParameterPoint p(d);
        for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
        return p;
      };

      const ParameterPoint xr = blend(alpha);
      const double fr = objective(xr);
      track(xr, fr);
      if (fr < f[ord[0]]) {
        if (budget_left()) {
          const ParameterPoint xe = blend(gamma);
          const double fe = objective(xe);
          track(xe, fe);
          if (fe < fr) {
            simplex[worst] = xe;
            f[worst] = fe;
            continue;
          }
        }
        simplex[worst] = xr;
        f[worst] = fr;
        continue;
      }
      if (fr < f[ord[d - 1]]) {
        simplex[worst] = xr;
        f[worst] = fr;
        continue;
      }
      if (!budget_left()) break;
      const bool outside = fr < f[worst];
      const ParameterPoint xc = blend(outside ? rho : -rho);
      const double fc = objective(xc);
      track(xc, fc);
      if (fc < (outside ? fr : f[worst])) {
        simplex[worst] = xc;
        f[worst] = fc;
        continue;
      }
      // shrink toward the best vertex
      for (std::size_t i = 1; i <= d && budget_left(); ++i) {
        const std::size_t v = ord[i];
        for (std::size_t j = 0; j < d; ++j)
          simplex[v][j] = simplex[ord[0]][j] + sigma * (simplex[v][j] - simplex[ord[0]][j]);
        f[v] = objective(simplex[v]);
        track(simplex[v], f[v]);
      }
    }
  }

  trace.final_energy = best;
  trace.evals_used = objective.count();
  return trace;
}

struct MultiStartResult {
  std::vector<TuneTrace> traces;
  std::size_t best_index = 0;
};

// Independent local optimizations from every start, each with its own
// derived optimizer stream; the winner is the lowest final energy with ties
// to the earliest start index.
inline MultiStartResult multi_start(const MaQaoaAnsatz& ansatz,
                                    const std::vector<std::pair<ParameterPoint, StartProvenance>>& starts,
                                    const TuneConfig& cfg, std::uint64_t master_seed) {
  if (starts.empty()) throw std::invalid_argument("multi_start: need at least one start");
  MultiStartResult result;
  result.traces.resize(starts.size());
  parallel_for(0, starts.size(), [&](std::size_t i) {
    TuneConfig local = cfg;
    local.optimizer_seed = derive_seed(master_seed, "tuner-start", i);
    result.traces[i] = local_optimize(ansatz, starts[i].first, local, starts[i].second);
  });
  for (std::size_t i = 1; i < starts.size(); ++i)
    if (result.traces[i].final_energy < result.traces[result.best_index].final_energy)
      result.best_index = i;
  return result;
}

}  // namespace spiq
