#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spiq/circuit.hpp"
#include "spiq/parallel.hpp"
#include "spiq/rng.hpp"

namespace spiq {

inline constexpr std::uint32_t kDefaultStatevectorCap = 20;

// Dense 2^n state, qubit q mapped to bit q of the amplitude index.
class DenseState {
 public:
  explicit DenseState(std::uint32_t num_qubits, std::uint32_t cap = kDefaultStatevectorCap)
      : n_(num_qubits) {
    if (num_qubits > cap) throw std::invalid_argument("DenseState: statevector qubit cap exceeded");
    if (num_qubits > 30) throw std::invalid_argument("DenseState: too many qubits");
    amps_.assign(std::size_t{1} << n_, {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
  }

  std::uint32_t num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

  void apply_h(std::uint32_t q) {
    const std::size_t bit = std::size_t{1} << q;
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const auto a0 = amps_[i], a1 = amps_[i | bit];
      amps_[i] = (a0 + a1) * inv_sqrt2;
      amps_[i | bit] = (a0 - a1) * inv_sqrt2;
    }
  }

  void apply_rx(std::uint32_t q, double theta) {
    const std::size_t bit = std::size_t{1} << q;
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const std::complex<double> mis{0.0, -s};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const auto a0 = amps_[i], a1 = amps_[i | bit];
      amps_[i] = c * a0 + mis * a1;
      amps_[i | bit] = mis * a0 + c * a1;
    }
  }

  void apply_rz(std::uint32_t q, double theta) {
    apply_phase_by_parity(std::size_t{1} << q, theta);
  }

  // exp(-i theta/2 Z...Z) as a single diagonal pass keyed on support parity.
  void apply_rz_string(std::uint64_t support_mask, double theta) {
    apply_phase_by_parity(support_mask, theta);
  }

  void apply_cx(std::uint32_t c, std::uint32_t t) {
    const std::size_t cbit = std::size_t{1} << c, tbit = std::size_t{1} << t;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }

  void apply_pauli_x(std::uint32_t q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }

  void apply_pauli_y(std::uint32_t q) {
    const std::size_t bit = std::size_t{1} << q;
    const std::complex<double> pi_{0.0, 1.0}, mi{0.0, -1.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const auto a0 = amps_[i], a1 = amps_[i | bit];
      amps_[i] = mi * a1;
      amps_[i | bit] = pi_ * a0;
    }
  }

  void apply_pauli_z(std::uint32_t q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (i & bit) amps_[i] = -amps_[i];
  }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  void apply_phase_by_parity(std::uint64_t mask, double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const std::complex<double> even{c, -s}, odd{c, s};
    for (std::size_t i = 0; i < amps_.size(); ++i)
      amps_[i] *= (std::popcount(i & mask) & 1) ? odd : even;
  }

  std::uint32_t n_;
  std::vector<std::complex<double>> amps_;
};

namespace detail {

inline double diagonal_expectation(const DiagonalEvaluator& eval, const DenseState& st) {
  const auto& amps = st.amplitudes();
  double e = 0.0;
  for (std::size_t z = 0; z < amps.size(); ++z) {
    const double p = std::norm(amps[z]);
    if (p != 0.0) e += p * eval.at(z);
  }
  return e;
}

}  // namespace detail

inline DenseState simulate_point(const MaQaoaAnsatz& ansatz, const ParameterPoint& angles,
                                 std::uint32_t cap = kDefaultStatevectorCap) {
  ansatz.check_point(angles.size());
  DenseState st(ansatz.num_qubits(), cap);
  for (const auto& g : ansatz.gates()) {
    switch (g.kind) {
      case GateKind::HadamardWall:
        for (std::uint32_t q = 0; q < ansatz.num_qubits(); ++q) st.apply_h(q);
        break;
      case GateKind::CostRotation:
        st.apply_rz_string(detail::support_mask(ansatz.clause_support(g.index)),
                           angles[static_cast<std::size_t>(g.param_id)]);
        break;
      case GateKind::MixerRotation:
        st.apply_rx(g.index, angles[static_cast<std::size_t>(g.param_id)]);
        break;
    }
  }
  return st;
}

// <psi(theta)|H|psi(theta)> for the diagonal cost Hamiltonian.
inline double exact_energy(const MaQaoaAnsatz& ansatz, const ParameterPoint& angles,
                           std::uint32_t cap = kDefaultStatevectorCap) {
  const DenseState st = simulate_point(ansatz, angles, cap);
  return detail::diagonal_expectation(detail::DiagonalEvaluator(ansatz.hamiltonian()), st);
}

struct NoiseModel {
  double p1 = 1e-4;          // single-qubit depolarizing probability
  double p2 = 1e-3;          // two-qubit depolarizing probability
  double pm = 0.0;           // measurement bit-flip probability
  std::uint32_t trajectories = 256;

  void validate() const {
    auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!ok(p1) || !ok(p2) || !ok(pm)) throw std::invalid_argument("NoiseModel: probabilities must be in [0,1]");
    if (trajectories == 0) throw std::invalid_argument("NoiseModel: need at least one trajectory");
  }
};

namespace detail {

// Flattened gate stream matching the compiled-circuit structure: one
// single-qubit site per H / R_X / R_Z application and one two-qubit site per
// CX-equivalent ladder segment. Noise channels attach to these sites.
struct NoiseSite {
  enum class Op { Hadamard, RotX, RotZ, CxSegment } op;
  std::uint32_t a = 0, b = 0;
  double theta = 0.0;
};

inline std::vector<NoiseSite> noise_sites(const MaQaoaAnsatz& ansatz, const ParameterPoint& angles) {
  ansatz.check_point(angles.size());
  std::vector<NoiseSite> sites;
  for (const auto& g : ansatz.gates()) {
    switch (g.kind) {
      case GateKind::HadamardWall:
        for (std::uint32_t q = 0; q < ansatz.num_qubits(); ++q)
          sites.push_back({NoiseSite::Op::Hadamard, q, 0, 0.0});
        break;
      case GateKind::CostRotation: {
        const auto& s = ansatz.clause_support(g.index);
        const double theta = angles[static_cast<std::size_t>(g.param_id)];
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
          sites.push_back({NoiseSite::Op::CxSegment, s[i], s[i + 1], 0.0});
        sites.push_back({NoiseSite::Op::RotZ, s.back(), 0, theta});
        for (std::size_t i = s.size() - 1; i-- > 0;)
          sites.push_back({NoiseSite::Op::CxSegment, s[i], s[i + 1], 0.0});
        break;
      }
      case GateKind::MixerRotation:
        sites.push_back({NoiseSite::Op::RotX, g.index, 0,
                         angles[static_cast<std::size_t>(g.param_id)]});
        break;
    }
  }
  return sites;
}

struct PauliInsertion {
  std::size_t site;
  std::uint8_t pauli;  // 1q: 1..3 = X,Y,Z; 2q: 1..15 over {I,X,Y,Z}^2 minus II
};

inline void apply_single_pauli(DenseState& st, std::uint32_t q, std::uint8_t p) {
  switch (p) {
    case 1: st.apply_pauli_x(q); break;
    case 2: st.apply_pauli_y(q); break;
    case 3: st.apply_pauli_z(q); break;
    default: break;
  }
}

inline double run_trajectory(const MaQaoaAnsatz& ansatz, const std::vector<NoiseSite>& sites,
                             const std::vector<PauliInsertion>& errors,
                             const DiagonalEvaluator& eval, std::uint32_t cap) {
  DenseState st(ansatz.num_qubits(), cap);
  std::size_t next_err = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    switch (s.op) {
      case NoiseSite::Op::Hadamard: st.apply_h(s.a); break;
      case NoiseSite::Op::RotX: st.apply_rx(s.a, s.theta); break;
      case NoiseSite::Op::RotZ: st.apply_rz(s.a, s.theta); break;
      case NoiseSite::Op::CxSegment: st.apply_cx(s.a, s.b); break;
    }
    while (next_err < errors.size() && errors[next_err].site == i) {
      const std::uint8_t p = errors[next_err].pauli;
      if (s.op == NoiseSite::Op::CxSegment) {
        apply_single_pauli(st, s.a, p & 3);
        apply_single_pauli(st, s.b, (p >> 2) & 3);
      } else {
        apply_single_pauli(st, s.a, p);
      }
      ++next_err;
    }
  }
  return detail::diagonal_expectation(eval, st);
}

}  // namespace detail

// Monte Carlo depolarizing noise: each trajectory samples Pauli insertions
// after every gate site (p1 for single-qubit sites, p2 for CX segments) and
// the mean over `trajectories` runs is returned. Measurement flips enter as
// the exact per-term damping (1-2 pm)^|support| of the Z-string expectations.
// Trajectory streams are derived from the seed by counter, so the result does
// not depend on the thread count. Error-free trajectories reuse one cached
// noiseless run, which is exact because the ladder path reproduces the fast
// diagonal path bit-for-bit.
inline double noisy_energy(const MaQaoaAnsatz& ansatz, const ParameterPoint& angles,
                           const NoiseModel& noise, std::uint64_t rng_seed,
                           std::uint32_t cap = kDefaultStatevectorCap) {
  noise.validate();
  const detail::DiagonalEvaluator eval(ansatz.hamiltonian(), 1.0 - 2.0 * noise.pm);
  const auto sites = detail::noise_sites(ansatz, angles);
  const DenseState clean = simulate_point(ansatz, angles, cap);
  const double clean_energy = detail::diagonal_expectation(eval, clean);
  // without gate noise every trajectory is the clean run; return it exactly
  if (noise.p1 == 0.0 && noise.p2 == 0.0) return clean_energy;

  std::vector<double> energies(noise.trajectories, 0.0);
  parallel_for(0, noise.trajectories, [&](std::size_t t) {
    Rng rng(derive_seed(rng_seed, "trajectory", t));
    std::vector<detail::PauliInsertion> errors;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const bool two = sites[i].op == detail::NoiseSite::Op::CxSegment;
      if (!rng.next_bool(two ? noise.p2 : noise.p1)) continue;
      const std::uint8_t p = static_cast<std::uint8_t>(1 + rng.next_below(two ? 15 : 3));
      errors.push_back({i, p});
    }
    energies[t] = errors.empty() ? clean_energy
                                 : detail::run_trajectory(ansatz, sites, errors, eval, cap);
  });
  double sum = 0.0;
  for (double e : energies) sum += e;
  return sum / static_cast<double>(noise.trajectories);
}

// Multinomial draw from |psi_z|^2; returns basis-state indices (bit q of the
// index is qubit q). Deterministic per seed.
inline std::vector<std::uint64_t> sample_bitstrings(const MaQaoaAnsatz& ansatz,
                                                    const ParameterPoint& angles,
                                                    std::uint64_t shots, std::uint64_t rng_seed,
                                                    std::uint32_t cap = kDefaultStatevectorCap) {
  if (shots < 1) throw std::invalid_argument("sample_bitstrings: need shots >= 1");
  const DenseState st = simulate_point(ansatz, angles, cap);
  const auto& amps = st.amplitudes();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t z = 0; z < amps.size(); ++z) {
    acc += std::norm(amps[z]);
    cdf[z] = acc;
  }
  cdf.back() = 1.0;

  Rng rng(rng_seed);
  std::vector<std::uint64_t> out(shots);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out[s] = static_cast<std::uint64_t>(it - cdf.begin());
  }
  return out;
}

inline Bitstring index_to_bitstring(std::uint64_t idx, std::uint32_t n) {
  Bitstring z(n);
  for (std::uint32_t q = 0; q < n; ++q) z[q] = (idx >> q) & 1;
  return z;
}

// Central-difference gradient of exact_energy; the independent oracle used to
// validate parameter-shift gradients.
inline std::vector<double> finite_difference_gradient(const MaQaoaAnsatz& ansatz,
                                                      const ParameterPoint& point, double h,
                                                      std::uint32_t cap = kDefaultStatevectorCap) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: step must be positive");
  ansatz.check_point(point.size());
  std::vector<double> grad(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) {
    ParameterPoint plus = point, minus = point;
    plus[j] += h;
    minus[j] -= h;
    grad[j] = (exact_energy(ansatz, plus, cap) - exact_energy(ansatz, minus, cap)) / (2.0 * h);
  }
  return grad;
}

}  // namespace spiq
