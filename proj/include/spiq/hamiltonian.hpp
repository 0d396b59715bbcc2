#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spiq/rng.hpp"

namespace spiq {

// Computational-basis assignment; index i is qubit/variable i.
using Bitstring = std::vector<std::uint8_t>;

// One product of Pauli-Z factors with a real coefficient. Empty support is
// the identity. Support is kept strictly increasing.
struct PauliZTerm {
  double coeff = 0.0;
  std::vector<std::uint32_t> support;

  PauliZTerm() = default;
  PauliZTerm(double c, std::vector<std::uint32_t> s) : coeff(c), support(std::move(s)) {
    std::sort(support.begin(), support.end());
    for (std::size_t i = 1; i < support.size(); ++i) {
      if (support[i] == support[i - 1])
        throw std::invalid_argument("PauliZTerm: duplicate qubit in support");
    }
    if (!std::isfinite(coeff)) throw std::invalid_argument("PauliZTerm: non-finite coefficient");
  }

  // +1/-1 eigenvalue of the Z-string on a basis state.
  int sign_on(const Bitstring& z) const {
    int s = 1;
    for (auto q : support)
      if (z[q]) s = -s;
    return s;
  }
};

// Diagonal cost Hamiltonian: offset + sum of Pauli-Z products. Construction
// merges duplicate supports, folds identity terms into the offset, and drops
// terms whose merged coefficient is exactly zero.
class IsingHamiltonian {
 public:
  IsingHamiltonian() : num_qubits_(1), offset_(0.0) {}  // trivial 1-qubit zero Hamiltonian

  IsingHamiltonian(std::uint32_t num_qubits, double offset, std::vector<PauliZTerm> raw_terms)
      : num_qubits_(num_qubits), offset_(offset) {
    if (num_qubits == 0) throw std::invalid_argument("IsingHamiltonian: num_qubits must be >= 1");
    if (!std::isfinite(offset)) throw std::invalid_argument("IsingHamiltonian: non-finite offset");
    std::map<std::vector<std::uint32_t>, double> merged;
    for (auto& t : raw_terms) {
      for (auto q : t.support) {
        if (q >= num_qubits) throw std::out_of_range("IsingHamiltonian: support index out of range");
      }
      if (t.support.empty()) {
        offset_ += t.coeff;
      } else {
        merged[t.support] += t.coeff;
      }
    }
    for (auto& [support, coeff] : merged) {
      if (coeff == 0.0) continue;
      if (!std::isfinite(coeff)) throw std::invalid_argument("IsingHamiltonian: non-finite coefficient");
      PauliZTerm t;
      t.coeff = coeff;
      t.support = support;
      terms_.push_back(std::move(t));
    }
  }

  std::uint32_t num_qubits() const { return num_qubits_; }
  double offset() const { return offset_; }
  const std::vector<PauliZTerm>& terms() const { return terms_; }

  // Diagonal value at a basis state: offset + sum coeff * prod (1 - 2 z_i).
  double evaluate(const Bitstring& z) const {
    if (z.size() != num_qubits_) throw std::invalid_argument("evaluate: bitstring length mismatch");
    double e = offset_;
    for (const auto& t : terms_) e += t.coeff * t.sign_on(z);
    return e;
  }

  // Sum of |coeff| over all terms (used for penalty sizing).
  double coeff_l1() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff);
    return s;
  }

 private:
  std::uint32_t num_qubits_;
  double offset_;
  std::vector<PauliZTerm> terms_;
};

inline double evaluate_bitstring(const IsingHamiltonian& h, const Bitstring& z) {
  return h.evaluate(z);
}

namespace detail {

inline std::uint64_t support_mask(const std::vector<std::uint32_t>& support) {
  std::uint64_t m = 0;
  for (auto q : support) m |= std::uint64_t{1} << q;
  return m;
}

// Mask-based diagonal evaluation for n <= 64, the hot path of brute-force
// enumeration and statevector expectations. Optionally scales each term by a
// per-Z-factor damping (used for measurement bit-flip noise).
struct DiagonalEvaluator {
  double offset;
  std::vector<std::uint64_t> masks;
  std::vector<double> coeffs;

  explicit DiagonalEvaluator(const IsingHamiltonian& h, double coeff_scale_per_factor = 1.0)
      : offset(h.offset()) {
    for (const auto& t : h.terms()) {
      masks.push_back(support_mask(t.support));
      double c = t.coeff;
      if (coeff_scale_per_factor != 1.0)
        c *= std::pow(coeff_scale_per_factor, static_cast<double>(t.support.size()));
      coeffs.push_back(c);
    }
  }

  double at(std::uint64_t z) const {
    double e = offset;
    for (std::size_t a = 0; a < masks.size(); ++a)
      e += coeffs[a] * (1.0 - 2.0 * (std::popcount(z & masks[a]) & 1));
    return e;
  }
};

}  // namespace detail

// Multilinear polynomial over binary variables, keyed by the (strictly
// increasing) index set of each monomial. The empty key is the constant.
using PuboPolynomial = std::map<std::vector<std::uint32_t>, double>;

// Substitute x_i = (1 - Z_i)/2 and expand. The result evaluates identically
// to the polynomial on every bitstring.
inline IsingHamiltonian pubo_to_ising(const PuboPolynomial& poly, std::uint32_t num_vars) {
  std::vector<PauliZTerm> terms;
  double offset = 0.0;
  for (const auto& [vars, coeff] : poly) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] >= num_vars) throw std::out_of_range("pubo_to_ising: variable index out of range");
      if (i > 0 && vars[i] <= vars[i - 1])
        throw std::invalid_argument("pubo_to_ising: monomial indices must be strictly increasing");
    }
    const std::size_t s = vars.size();
    const double scale = coeff / static_cast<double>(std::uint64_t{1} << s);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
      std::vector<std::uint32_t> support;
      int parity = 1;
      for (std::size_t i = 0; i < s; ++i) {
        if (mask & (std::uint64_t{1} << i)) {
          support.push_back(vars[i]);
          parity = -parity;
        }
      }
      if (support.empty()) {
        offset += scale;
      } else {
        terms.emplace_back(parity * scale, std::move(support));
      }
    }
  }
  return IsingHamiltonian(num_vars, offset, std::move(terms));
}

// ---------------------------------------------------------------------------
// Max-Cut
// ---------------------------------------------------------------------------

struct WeightedGraph {
  struct Edge {
    std::uint32_t u, v;
    double w;
  };
  std::uint32_t num_nodes = 0;
  std::vector<Edge> edges;

  void validate() const {
    if (num_nodes == 0) throw std::invalid_argument("WeightedGraph: empty graph");
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> seen;
    for (const auto& e : edges) {
      if (e.u >= e.v) throw std::invalid_argument("WeightedGraph: edges require u < v");
      if (e.v >= num_nodes) throw std::out_of_range("WeightedGraph: node index out of range");
      if (!std::isfinite(e.w)) throw std::invalid_argument("WeightedGraph: non-finite weight");
      if (++seen[{e.u, e.v}] > 1) throw std::invalid_argument("WeightedGraph: duplicate edge");
    }
  }

  double total_weight() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.w;
    return s;
  }

  double cut_value(const Bitstring& z) const {
    double c = 0.0;
    for (const auto& e : edges)
      if (z[e.u] != z[e.v]) c += e.w;
    return c;
  }
};

// H = sum (w_ij / 2) Z_i Z_j with offset -sum w_ij / 2, so that the energy of
// any basis state is -cut(z) and the ground energy is -(max cut).
inline IsingHamiltonian maxcut_hamiltonian(const WeightedGraph& g) {
  g.validate();
  std::vector<PauliZTerm> terms;
  double offset = 0.0;
  for (const auto& e : g.edges) {
    offset -= e.w / 2.0;
    terms.emplace_back(e.w / 2.0, std::vector<std::uint32_t>{e.u, e.v});
  }
  return IsingHamiltonian(g.num_nodes, offset, std::move(terms));
}

enum class GraphKind { Complete, Regular3, Ego };
enum class GraphWeighting { Unweighted, IntegerZeroToTen };

// Leaf-to-leaf connection probability for generated ego graphs.
inline constexpr double kEgoLeafEdgeProb = 0.3;

// Deterministic per seed. Weight-0 edges stay in the edge list (they carry no
// Hamiltonian term but are reported in run metadata).
inline WeightedGraph generate_graph(GraphKind kind, std::uint32_t n, GraphWeighting weighting,
                                    std::uint64_t rng_seed) {
  if (n < 3) throw std::invalid_argument("generate_graph: need n >= 3");
  Rng rng(rng_seed);
  WeightedGraph g;
  g.num_nodes = n;
  switch (kind) {
    case GraphKind::Complete:
      for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v) g.edges.push_back({u, v, 1.0});
      break;
    case GraphKind::Regular3: {
      if (n % 2 != 0 || n < 4)
        throw std::invalid_argument("generate_graph: 3-regular needs even n >= 4");
      // Configuration model with rejection until the multigraph is simple.
      std::vector<std::uint32_t> stubs(3 * n);
      for (;;) {
        for (std::uint32_t i = 0; i < 3 * n; ++i) stubs[i] = i / 3;
        for (std::uint32_t i = 3 * n - 1; i > 0; --i) {
          const auto j = static_cast<std::uint32_t>(rng.next_below(i + 1));
          std::swap(stubs[i], stubs[j]);
        }
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> seen;
        bool simple = true;
        for (std::uint32_t i = 0; i + 1 < 3 * n && simple; i += 2) {
          auto a = stubs[i], b = stubs[i + 1];
          if (a == b) simple = false;
          if (a > b) std::swap(a, b);
          if (simple && ++seen[{a, b}] > 1) simple = false;
        }
        if (!simple) continue;
        for (const auto& [uv, cnt] : seen) g.edges.push_back({uv.first, uv.second, 1.0});
        break;
      }
      break;
    }
    case GraphKind::Ego:
      for (std::uint32_t v = 1; v < n; ++v) g.edges.push_back({0, v, 1.0});
      for (std::uint32_t u = 1; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
          if (rng.next_bool(kEgoLeafEdgeProb)) g.edges.push_back({u, v, 1.0});
      break;
  }
  if (weighting == GraphWeighting::IntegerZeroToTen) {
    for (auto& e : g.edges) e.w = static_cast<double>(rng.next_below(11));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Knapsack
// ---------------------------------------------------------------------------

struct KnapsackInstance {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> weights;
  std::int64_t capacity = 0;
  double penalty = 0.0;  // <= 0 means "use default_penalty()"

  void validate() const {
    if (values.empty() || values.size() != weights.size())
      throw std::invalid_argument("KnapsackInstance: values/weights size mismatch or empty");
    if (capacity < 1) throw std::invalid_argument("KnapsackInstance: capacity must be >= 1");
    for (auto v : values)
      if (v < 1) throw std::invalid_argument("KnapsackInstance: values must be positive");
    for (auto w : weights)
      if (w < 1) throw std::invalid_argument("KnapsackInstance: weights must be positive");
  }

  // Exceeds any objective gain from violating the constraint by one unit.
  double default_penalty() const {
    std::int64_t s = 0;
    for (auto v : values) s += v;
    return static_cast<double>(s + 1);
  }

  std::uint32_t num_slack_bits() const {
    if (capacity >= (std::int64_t{1} << 42))
      throw std::overflow_error("KnapsackInstance: capacity too large for slack encoding");
    std::uint32_t k = 0;
    while ((std::int64_t{1} << k) < capacity + 1) ++k;
    return k;
  }

  // Binary slack coefficients 2^0 .. 2^{k-2}, last bit clamped so that the
  // representable slack range is exactly [0, capacity].
  std::vector<std::int64_t> slack_coefficients() const {
    const std::uint32_t k = num_slack_bits();
    std::vector<std::int64_t> c(k);
    for (std::uint32_t i = 0; i + 1 < k; ++i) c[i] = std::int64_t{1} << i;
    if (k > 0) c[k - 1] = capacity + 1 - (std::int64_t{1} << (k - 1));
    return c;
  }

  std::uint32_t num_qubits() const {
    return static_cast<std::uint32_t>(values.size()) + num_slack_bits();
  }
};

// Qubits: one per item followed by the slack register. At assignments where
// item weight plus slack equals the capacity, the diagonal value is exactly
// -(selected value); any over-capacity item selection costs more than the
// optimal feasible energy under the default penalty.
inline IsingHamiltonian knapsack_hamiltonian(const KnapsackInstance& k) {
  k.validate();
  const double a = k.penalty > 0.0 ? k.penalty : k.default_penalty();
  const auto slack = k.slack_coefficients();
  const std::size_t items = k.values.size();
  const std::uint32_t n = k.num_qubits();

  // Coefficients of the constraint expression sum_j c_j y_j - W.
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < items; ++i) c[i] = static_cast<double>(k.weights[i]);
  for (std::size_t s = 0; s < slack.size(); ++s) c[items + s] = static_cast<double>(slack[s]);
  const double w_cap = static_cast<double>(k.capacity);

  PuboPolynomial poly;
  poly[{}] += a * w_cap * w_cap;
  for (std::uint32_t j = 0; j < n; ++j) {
    double lin = a * (c[j] * c[j] - 2.0 * w_cap * c[j]);
    if (j < items) lin -= static_cast<double>(k.values[j]);
    poly[{j}] += lin;
    for (std::uint32_t l = j + 1; l < n; ++l) poly[{j, l}] += 2.0 * a * c[j] * c[l];
  }
  return pubo_to_ising(poly, n);
}

// ---------------------------------------------------------------------------
// Feature-selection PCBO (weighted hypergraph + Hamming-weight penalty)
// ---------------------------------------------------------------------------

struct HypergraphObjective {
  std::uint32_t num_vars = 0;
  std::map<std::uint32_t, double> linear;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pairs;
  std::map<std::array<std::uint32_t, 3>, double> triples;
  std::uint32_t subset_size = 0;  // M
  double lagrange = 0.0;          // <= 0 means "use default_lagrange()"

  void validate() const {
    if (num_vars == 0) throw std::invalid_argument("HypergraphObjective: num_vars must be >= 1");
    if (subset_size > num_vars)
      throw std::invalid_argument("HypergraphObjective: subset size exceeds num_vars");
    for (const auto& [i, w] : linear)
      if (i >= num_vars) throw std::out_of_range("HypergraphObjective: index out of range");
    for (const auto& [ij, w] : pairs)
      if (ij.first >= ij.second || ij.second >= num_vars)
        throw std::invalid_argument("HypergraphObjective: pair indices must be strictly increasing and in range");
    for (const auto& [ijk, w] : triples)
      if (ijk[0] >= ijk[1] || ijk[1] >= ijk[2] || ijk[2] >= num_vars)
        throw std::invalid_argument("HypergraphObjective: triple indices must be strictly increasing and in range");
  }

  double default_lagrange() const {
    double s = 0.0;
    for (const auto& [i, w] : linear) s += std::abs(w);
    for (const auto& [ij, w] : pairs) s += std::abs(w);
    for (const auto& [ijk, w] : triples) s += std::abs(w);
    return 2.0 * s + 1.0;
  }
};

// The hypergraph weights carry their own signs (relevance positive,
// redundancy negative); the objective is maximized, so its negation is
// encoded, plus lambda * (sum x_i - M)^2 for the subset-size constraint.
inline IsingHamiltonian feature_selection_hamiltonian(const HypergraphObjective& h) {
  h.validate();
  const double lambda = h.lagrange > 0.0 ? h.lagrange : h.default_lagrange();
  const double m = static_cast<double>(h.subset_size);

  PuboPolynomial poly;
  for (const auto& [i, w] : h.linear) poly[{i}] -= w;
  for (const auto& [ij, w] : h.pairs) poly[{ij.first, ij.second}] -= w;
  for (const auto& [ijk, w] : h.triples) poly[{ijk[0], ijk[1], ijk[2]}] -= w;

  poly[{}] += lambda * m * m;
  for (std::uint32_t i = 0; i < h.num_vars; ++i) {
    poly[{i}] += lambda * (1.0 - 2.0 * m);
    for (std::uint32_t j = i + 1; j < h.num_vars; ++j) poly[{i, j}] += 2.0 * lambda;
  }
  return pubo_to_ising(poly, h.num_vars);
}

}  // namespace spiq
