#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiq/parallel.hpp"
#include "spiq/rng.hpp"
#include "spiq/search.hpp"

namespace spiq {

enum class SelectionMethod { FixedInterval, KGaps };

inline const char* to_string(SelectionMethod m) {
  return m == SelectionMethod::FixedInterval ? "fixed_interval" : "k_gaps";
}

struct Seed {
  QuarterTurnPoint quarters;
  double energy = 0.0;
  std::optional<double> grad_norm;
  std::optional<std::uint32_t> cluster_id;
};

struct SeedSet {
  SelectionMethod method = SelectionMethod::FixedInterval;
  std::vector<Seed> seeds;
};

// Seeds at evenly spaced ranks of the energy-sorted pool; always contains the
// global best (rank 0), duplicated indices collapse.
inline SeedSet fixed_interval_select(const CandidatePool& pool, std::uint32_t k) {
  if (pool.empty()) throw std::invalid_argument("fixed_interval_select: empty pool");
  if (k < 1) throw std::invalid_argument("fixed_interval_select: need k >= 1");
  const auto sorted = pool.sorted_entries();
  const std::size_t n = sorted.size();

  std::vector<std::size_t> picks;
  if (k == 1) {
    picks.push_back(0);
  } else {
    for (std::uint32_t i = 0; i < k; ++i)
      picks.push_back(static_cast<std::size_t>(
          (static_cast<std::uint64_t>(i) * (n - 1)) / (k - 1)));
  }
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

  SeedSet out;
  out.method = SelectionMethod::FixedInterval;
  for (const auto idx : picks) out.seeds.push_back({sorted[idx].quarters, sorted[idx].energy, {}, {}});
  return out;
}

// Per-gene unit-circle embedding. Quarter values land exactly on the four
// axis points, so circular distance is honored without trig rounding.
using CircularEmbedding = std::vector<double>;

inline CircularEmbedding embed(const QuarterTurnPoint& q) {
  static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
  static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
  CircularEmbedding e(2 * q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] > 3) throw std::invalid_argument("embed: quarter value out of range");
    e[2 * j] = kCos[q[j]];
    e[2 * j + 1] = kSin[q[j]];
  }
  return e;
}

struct KMeansResult {
  std::vector<std::uint32_t> assignment;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
};

namespace detail {

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

// Lloyd iterations with k-means++ seeding. Empty clusters are re-seeded from
// the point farthest from its assigned centroid. Deterministic per seed.
inline KMeansResult kmeans(const std::vector<CircularEmbedding>& points, std::uint32_t k,
                           std::uint64_t rng_seed) {
  if (k < 1) throw std::invalid_argument("kmeans: need k >= 1");
  if (points.size() < k) throw std::invalid_argument("kmeans: fewer points than clusters");
  const std::size_t n = points.size();
  Rng rng(rng_seed);

  KMeansResult res;
  res.centroids.push_back(points[rng.next_below(n)]);
  std::vector<double> d2(n);
  while (res.centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : res.centroids) best = std::min(best, detail::sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.next_below(n);
    } else {
      const double u = rng.next_double() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    res.centroids.push_back(points[pick]);
  }

  res.assignment.assign(n, 0);
  for (std::uint32_t iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t arg = 0;
      for (std::uint32_t c = 0; c < k; ++c) {
        const double d = detail::sq_dist(points[i], res.centroids[c]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      res.assignment[i] = arg;
    }

    std::vector<std::vector<double>> next(k, std::vector<double>(points[0].size(), 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++count[res.assignment[i]];
      for (std::size_t j = 0; j < points[i].size(); ++j) next[res.assignment[i]][j] += points[i][j];
    }
    for (std::uint32_t c = 0; c < k; ++c) {
      if (count[c] == 0) {
        // farthest point from its own centroid becomes the new center
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = detail::sq_dist(points[i], res.centroids[res.assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        next[c] = points[far];
      } else {
        for (auto& v : next[c]) v /= static_cast<double>(count[c]);
      }
    }

    double shift = 0.0;
    for (std::uint32_t c = 0; c < k; ++c)
      shift = std::max(shift, detail::sq_dist(res.centroids[c], next[c]));
    res.centroids = std::move(next);
    if (shift < 1e-8 * 1e-8) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::uint32_t c = 0; c < k; ++c) {
      const double d = detail::sq_dist(points[i], res.centroids[c]);
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    res.assignment[i] = arg;
    res.inertia += best;
  }
  return res;
}

struct GradientInfo {
  double norm = 0.0;
  std::vector<double> gradient;
};

// Parameter-shift gradient at a Clifford point: shifting a gene by +/-1
// quarter is exactly a +/- pi/2 angle shift, so every evaluation stays in the
// Clifford group and runs on the tableau engine.
inline GradientInfo gradient_norm(const MaQaoaAnsatz& ansatz, const QuarterTurnPoint& q) {
  ansatz.check_point(q.size());
  GradientInfo info;
  info.gradient.assign(q.size(), 0.0);
  parallel_for(0, q.size(), [&](std::size_t j) {
    QuarterTurnPoint plus = q, minus = q;
    plus[j] = static_cast<std::uint8_t>((q[j] + 1) & 3);
    minus[j] = static_cast<std::uint8_t>((q[j] + 3) & 3);
    info.gradient[j] = 0.5 * (clifford_energy(ansatz, plus) - clifford_energy(ansatz, minus));
  });
  double s = 0.0;
  for (const double g : info.gradient) s += g * g;
  info.norm = std::sqrt(s);
  return info;
}

struct KGapsConfig {
  std::uint32_t top_m = 512;  // elite pre-filter before clustering
  double tau = 1e-9;          // gradient-norm floor excluding stationary points
};

// K-GAPS: cluster the circular embeddings of the elite candidates, then per
// cluster take the lowest-energy point whose gradient norm clears tau; if a
// cluster is entirely (near-)stationary its maximum-norm point is used so k
// seeds always exist.
inline SeedSet k_gaps_select(const MaQaoaAnsatz& ansatz, const CandidatePool& pool, std::uint32_t k,
                             const KGapsConfig& cfg, std::uint64_t rng_seed) {
  if (pool.empty()) throw std::invalid_argument("k_gaps_select: empty pool");
  if (k < 1) throw std::invalid_argument("k_gaps_select: need k >= 1");
  auto sorted = pool.sorted_entries();
  if (sorted.size() > cfg.top_m) sorted.resize(cfg.top_m);
  const auto k_eff = static_cast<std::uint32_t>(std::min<std::size_t>(k, sorted.size()));

  std::vector<CircularEmbedding> embeddings(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) embeddings[i] = embed(sorted[i].quarters);
  const KMeansResult clusters = kmeans(embeddings, k_eff, rng_seed);

  SeedSet out;
  out.method = SelectionMethod::KGaps;
  for (std::uint32_t c = 0; c < k_eff; ++c) {
    std::optional<std::size_t> chosen;
    std::optional<std::size_t> fallback;
    double fallback_norm = -1.0;
    std::vector<std::pair<std::size_t, GradientInfo>> evaluated;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (clusters.assignment[i] != c) continue;
      GradientInfo gi = gradient_norm(ansatz, sorted[i].quarters);
      if (gi.norm > fallback_norm) {
        fallback_norm = gi.norm;
        fallback = i;
      }
      evaluated.emplace_back(i, std::move(gi));
      if (evaluated.back().second.norm >= cfg.tau) {
        chosen = i;
        break;
      }
    }
    const auto pick = chosen ? chosen : fallback;
    if (!pick) continue;  // empty cluster (cannot normally happen)
    double norm = 0.0;
    for (const auto& [idx, gi] : evaluated)
      if (idx == *pick) norm = gi.norm;
    out.seeds.push_back({sorted[*pick].quarters, sorted[*pick].energy, norm, c});
  }
  return out;
}

inline SeedSet k_gaps_select(const MaQaoaAnsatz& ansatz, const CandidatePool& pool, std::uint32_t k,
                             std::uint64_t rng_seed) {
  return k_gaps_select(ansatz, pool, k, KGapsConfig{}, rng_seed);
}

}  // namespace spiq
