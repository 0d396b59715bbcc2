#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately implemented from scratch (direct objective formulas,
// dense enumeration) so it cannot share a bug with the library path it
// checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "spiq/circuit.hpp"
#include "spiq/hamiltonian.hpp"
#include "spiq/rng.hpp"

namespace testing_helpers {

// Direct multilinear evaluation of a PUBO polynomial at a bitstring.
inline double pubo_direct_eval(const spiq::PuboPolynomial& poly, std::uint64_t z) {
  double val = 0.0;
  for (const auto& [vars, coeff] : poly) {
    bool all = true;
    for (auto v : vars)
      if (!((z >> v) & 1)) {
        all = false;
        break;
      }
    if (all) val += coeff;
  }
  return val;
}

inline spiq::Bitstring bits_of(std::uint64_t z, std::uint32_t n) {
  spiq::Bitstring b(n);
  for (std::uint32_t i = 0; i < n; ++i) b[i] = (z >> i) & 1;
  return b;
}

inline spiq::PuboPolynomial random_pubo(std::uint32_t num_vars, std::uint32_t max_order,
                                        std::uint32_t num_terms, spiq::Rng& rng) {
  spiq::PuboPolynomial poly;
  for (std::uint32_t t = 0; t < num_terms; ++t) {
    const auto order = std::min<std::uint32_t>(
        num_vars, static_cast<std::uint32_t>(rng.next_below(max_order + 1)));
    std::vector<std::uint32_t> vars;
    while (vars.size() < order) {
      const auto v = static_cast<std::uint32_t>(rng.next_below(num_vars));
      bool dup = false;
      for (auto u : vars) dup = dup || u == v;
      if (!dup) vars.push_back(v);
    }
    std::sort(vars.begin(), vars.end());
    poly[vars] += rng.next_in(-2.0, 2.0);
  }
  return poly;
}

inline spiq::QuarterTurnPoint random_quarters(std::size_t len, spiq::Rng& rng) {
  spiq::QuarterTurnPoint q(len);
  for (auto& g : q) g = static_cast<std::uint8_t>(rng.next_below(4));
  return q;
}

inline spiq::ParameterPoint random_angles(std::size_t len, spiq::Rng& rng) {
  spiq::ParameterPoint p(len);
  for (auto& t : p) t = rng.next_in(-spiq::kPi, spiq::kPi);
  return p;
}

// Unit-weight triangle: the canonical 3-qubit Max-Cut fixture.
inline spiq::WeightedGraph k3_graph() {
  spiq::WeightedGraph g;
  g.num_nodes = 3;
  g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
  return g;
}

// Single-parameter fixture whose energy is exactly cos(theta): wall,
// Z-rotation on the lone qubit, wall again, measured against H = Z0.
inline spiq::MaQaoaAnsatz cos_theta_fixture() {
  spiq::IsingHamiltonian h(1, 0.0, {spiq::PauliZTerm(1.0, {0})});
  std::vector<spiq::GateTemplate> gates = {
      {spiq::GateKind::HadamardWall, 0, 0, -1},
      {spiq::GateKind::CostRotation, 0, 0, 0},
      {spiq::GateKind::HadamardWall, 0, 0, -1},
  };
  return spiq::MaQaoaAnsatz(std::move(h), 1, std::move(gates), 1);
}

// Small random Ising Hamiltonian with terms of order 1..3.
inline spiq::IsingHamiltonian random_ising(std::uint32_t n, std::uint32_t num_terms,
                                           spiq::Rng& rng) {
  std::vector<spiq::PauliZTerm> terms;
  for (std::uint32_t t = 0; t < num_terms; ++t) {
    const auto order = 1 + rng.next_below(3);
    std::vector<std::uint32_t> support;
    while (support.size() < order && support.size() < n) {
      const auto q = static_cast<std::uint32_t>(rng.next_below(n));
      bool dup = false;
      for (auto u : support) dup = dup || u == q;
      if (!dup) support.push_back(q);
    }
    double c = rng.next_in(-2.0, 2.0);
    if (c == 0.0) c = 1.0;
    terms.emplace_back(c, support);
  }
  if (terms.empty()) terms.emplace_back(1.0, std::vector<std::uint32_t>{0});
  return spiq::IsingHamiltonian(n, rng.next_in(-1.0, 1.0), std::move(terms));
}

}  // namespace testing_helpers
