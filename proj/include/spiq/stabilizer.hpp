#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spiq/circuit.hpp"

namespace spiq {

struct CliffordGate {
  enum class Kind { H, S, Sdg, X, Z, CX };
  Kind kind;
  std::uint32_t a = 0;  // target qubit (control for CX)
  std::uint32_t b = 0;  // CX target

  static CliffordGate h(std::uint32_t q) { return {Kind::H, q, 0}; }
  static CliffordGate s(std::uint32_t q) { return {Kind::S, q, 0}; }
  static CliffordGate sdg(std::uint32_t q) { return {Kind::Sdg, q, 0}; }
  static CliffordGate x(std::uint32_t q) { return {Kind::X, q, 0}; }
  static CliffordGate z(std::uint32_t q) { return {Kind::Z, q, 0}; }
  static CliffordGate cx(std::uint32_t c, std::uint32_t t) { return {Kind::CX, c, t}; }
};

// Aaronson-Gottesman tableau: rows 0..n-1 are destabilizers, n..2n-1
// stabilizers, each a Pauli stored as bit-packed X/Z masks plus a sign bit.
// Keeping the destabilizer half makes Z-string expectations O(n^2) without
// Gaussian elimination.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(std::uint32_t num_qubits)
      : n_(num_qubits), words_((num_qubits + 63) / 64) {
    if (num_qubits == 0) throw std::invalid_argument("StabilizerTableau: need n >= 1");
    x_.assign(std::size_t{2} * n_ * words_, 0);
    z_.assign(std::size_t{2} * n_ * words_, 0);
    phase_.assign(std::size_t{2} * n_, 0);
    for (std::uint32_t i = 0; i < n_; ++i) {
      set_bit(x_, i, i);       // destabilizer X_i
      set_bit(z_, n_ + i, i);  // stabilizer Z_i
    }
  }

  std::uint32_t num_qubits() const { return n_; }

  void apply(const CliffordGate& g) {
    switch (g.kind) {
      case CliffordGate::Kind::H: apply_h(g.a); break;
      case CliffordGate::Kind::S: apply_s(g.a); break;
      case CliffordGate::Kind::Sdg: apply_sdg(g.a); break;
      case CliffordGate::Kind::X: apply_x(g.a); break;
      case CliffordGate::Kind::Z: apply_z(g.a); break;
      case CliffordGate::Kind::CX: apply_cx(g.a, g.b); break;
    }
  }

  void apply_h(std::uint32_t q) {
    check_qubit(q);
    const std::size_t w = q >> 6;
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    for (std::uint32_t r = 0; r < 2 * n_; ++r) {
      auto& xw = x_[row_word(r, w)];
      auto& zw = z_[row_word(r, w)];
      phase_[r] ^= static_cast<std::uint8_t>(((xw & zw & m) != 0));
      const std::uint64_t t = (xw ^ zw) & m;
      xw ^= t;
      zw ^= t;
    }
  }

  void apply_s(std::uint32_t q) {
    check_qubit(q);
    const std::size_t w = q >> 6;
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    for (std::uint32_t r = 0; r < 2 * n_; ++r) {
      auto& xw = x_[row_word(r, w)];
      auto& zw = z_[row_word(r, w)];
      phase_[r] ^= static_cast<std::uint8_t>((xw & zw & m) != 0);
      zw ^= xw & m;
    }
  }

  void apply_sdg(std::uint32_t q) {
    check_qubit(q);
    const std::size_t w = q >> 6;
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    for (std::uint32_t r = 0; r < 2 * n_; ++r) {
      auto& xw = x_[row_word(r, w)];
      auto& zw = z_[row_word(r, w)];
      phase_[r] ^= static_cast<std::uint8_t>((xw & ~zw & m) != 0);
      zw ^= xw & m;
    }
  }

  void apply_x(std::uint32_t q) {
    check_qubit(q);
    const std::size_t w = q >> 6;
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    for (std::uint32_t r = 0; r < 2 * n_; ++r)
      phase_[r] ^= static_cast<std::uint8_t>((z_[row_word(r, w)] & m) != 0);
  }

  void apply_z(std::uint32_t q) {
    check_qubit(q);
    const std::size_t w = q >> 6;
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    for (std::uint32_t r = 0; r < 2 * n_; ++r)
      phase_[r] ^= static_cast<std::uint8_t>((x_[row_word(r, w)] & m) != 0);
  }

  void apply_cx(std::uint32_t c, std::uint32_t t) {
    check_qubit(c);
    check_qubit(t);
    if (c == t) throw std::invalid_argument("CX: control equals target");
    const std::size_t cw = c >> 6, tw = t >> 6;
    const std::uint64_t cm = std::uint64_t{1} << (c & 63), tm = std::uint64_t{1} << (t & 63);
    for (std::uint32_t r = 0; r < 2 * n_; ++r) {
      const bool xc = (x_[row_word(r, cw)] & cm) != 0;
      const bool zc = (z_[row_word(r, cw)] & cm) != 0;
      const bool xt = (x_[row_word(r, tw)] & tm) != 0;
      const bool zt = (z_[row_word(r, tw)] & tm) != 0;
      phase_[r] ^= static_cast<std::uint8_t>(xc && zt && (xt == zc));
      if (xc) x_[row_word(r, tw)] ^= tm;
      if (zt) z_[row_word(r, cw)] ^= cm;
    }
  }

  // Expectation of a Z-string on the current state: 0 when the string
  // anticommutes with some stabilizer, otherwise the +/-1 sign obtained by
  // expressing it as a phase-tracked product of stabilizer generators (the
  // factors are exactly the rows whose paired destabilizer anticommutes).
  int z_string_expectation(const std::vector<std::uint32_t>& support) const {
    std::vector<std::uint64_t> zmask(words_, 0);
    for (auto q : support) {
      check_qubit(q);
      zmask[q >> 6] |= std::uint64_t{1} << (q & 63);
    }
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (row_overlap_parity(n_ + i, zmask)) return 0;
    }

    std::vector<std::uint64_t> accx(words_, 0), accz(words_, 0);
    int phase = 0;  // exponent of i, mod 4
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (!row_overlap_parity(i, zmask)) continue;
      const std::uint32_t r = n_ + i;
      phase = (phase + 2 * phase_[r]) & 3;
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t x1 = x_[row_word(r, w)], z1 = z_[row_word(r, w)];
        const std::uint64_t x2 = accx[w], z2 = accz[w];
        const std::uint64_t pos =
            (x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
        const std::uint64_t neg =
            (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
        phase = (phase + std::popcount(pos) - std::popcount(neg)) & 3;
        accx[w] ^= x1;
        accz[w] ^= z1;
      }
    }
    assert((phase & 1) == 0);
    for (std::size_t w = 0; w < words_; ++w) {
      assert(accx[w] == 0);
      assert(accz[w] == zmask[w]);
      (void)w;
    }
    return phase == 0 ? 1 : -1;
  }

  // Symplectic consistency: stabilizers pairwise commute, destabilizer i
  // anticommutes with stabilizer i only, and the 2n rows span the full
  // group (binary rank 2n). Used by debug assertions and property tests.
  bool check_invariants() const {
    for (std::uint32_t i = 0; i < 2 * n_; ++i) {
      for (std::uint32_t j = i; j < 2 * n_; ++j) {
        const bool anti = rows_anticommute(i, j);
        const bool expect_anti = (j == i + n_) && i < n_;
        if (anti != expect_anti) return false;
      }
    }
    return symplectic_rank_full();
  }

  bool get_x(std::uint32_t row, std::uint32_t col) const {
    return (x_[row_word(row, col >> 6)] >> (col & 63)) & 1;
  }
  bool get_z(std::uint32_t row, std::uint32_t col) const {
    return (z_[row_word(row, col >> 6)] >> (col & 63)) & 1;
  }
  bool get_phase(std::uint32_t row) const { return phase_[row] != 0; }

  bool operator==(const StabilizerTableau& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_ && phase_ == other.phase_;
  }

 private:
  std::size_t row_word(std::uint32_t row, std::size_t w) const {
    return static_cast<std::size_t>(row) * words_ + w;
  }

  void set_bit(std::vector<std::uint64_t>& bits, std::uint32_t row, std::uint32_t col) {
    bits[row_word(row, col >> 6)] |= std::uint64_t{1} << (col & 63);
  }

  void check_qubit(std::uint32_t q) const {
    if (q >= n_) throw std::out_of_range("StabilizerTableau: qubit index out of range");
  }

  bool row_overlap_parity(std::uint32_t row, const std::vector<std::uint64_t>& zmask) const {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_; ++w) acc ^= x_[row_word(row, w)] & zmask[w];
    return std::popcount(acc) & 1;
  }

  bool rows_anticommute(std::uint32_t i, std::uint32_t j) const {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      acc ^= x_[row_word(i, w)] & z_[row_word(j, w)];
      acc ^= z_[row_word(i, w)] & x_[row_word(j, w)];
    }
    return std::popcount(acc) & 1;
  }

  bool symplectic_rank_full() const {
    // Gaussian elimination over GF(2) on the 2n x 2n (x|z) matrix.
    std::vector<std::vector<std::uint64_t>> m(2 * n_, std::vector<std::uint64_t>(2 * words_));
    for (std::uint32_t r = 0; r < 2 * n_; ++r)
      for (std::size_t w = 0; w < words_; ++w) {
        m[r][w] = x_[row_word(r, w)];
        m[r][words_ + w] = z_[row_word(r, w)];
      }
    std::uint32_t rank = 0;
    for (std::uint32_t col = 0; col < 2 * n_ && rank < 2 * n_; ++col) {
      const std::uint32_t c = col < n_ ? col : col - n_;
      const std::size_t w = (col < n_ ? 0 : words_) + (c >> 6);
      const std::uint64_t bit = std::uint64_t{1} << (c & 63);
      std::uint32_t pivot = rank;
      while (pivot < 2 * n_ && !(m[pivot][w] & bit)) ++pivot;
      if (pivot == 2 * n_) continue;
      std::swap(m[rank], m[pivot]);
      for (std::uint32_t r = 0; r < 2 * n_; ++r) {
        if (r != rank && (m[r][w] & bit))
          for (std::size_t k = 0; k < 2 * words_; ++k) m[r][k] ^= m[rank][k];
      }
      ++rank;
    }
    return rank == 2 * n_;
  }

  std::uint32_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> x_, z_;
  std::vector<std::uint8_t> phase_;
};

inline StabilizerTableau init_tableau(std::uint32_t n) { return StabilizerTableau(n); }

// Single-qubit Z-axis quarter turn, up to global phase: S, Z or Sdg.
inline void append_z_power(std::uint32_t q, std::uint8_t k, std::vector<CliffordGate>& out) {
  switch (k & 3) {
    case 0: break;
    case 1: out.push_back(CliffordGate::s(q)); break;
    case 2: out.push_back(CliffordGate::z(q)); break;
    default: out.push_back(CliffordGate::sdg(q)); break;
  }
}

// R_X(k pi/2) = H . R_Z(k pi/2) . H up to global phase.
inline void compile_mixer_quarter(std::uint32_t qubit, std::uint8_t k, std::vector<CliffordGate>& out) {
  if (k > 3) throw std::invalid_argument("compile_mixer_quarter: quarter out of range");
  if (k == 0) return;
  out.push_back(CliffordGate::h(qubit));
  append_z_power(qubit, k, out);
  out.push_back(CliffordGate::h(qubit));
}

// exp(-i k pi/4 Z...Z): parity is accumulated onto the last support qubit by
// a linear CX chain, rotated there, then uncomputed in reverse.
inline void compile_cost_quarter(const std::vector<std::uint32_t>& support, std::uint8_t k,
                                 std::vector<CliffordGate>& out) {
  if (k > 3) throw std::invalid_argument("compile_cost_quarter: quarter out of range");
  if (support.empty()) throw std::invalid_argument("compile_cost_quarter: empty support");
  if (k == 0) return;
  for (std::size_t i = 0; i + 1 < support.size(); ++i)
    out.push_back(CliffordGate::cx(support[i], support[i + 1]));
  append_z_power(support.back(), k, out);
  for (std::size_t i = support.size() - 1; i-- > 0;)
    out.push_back(CliffordGate::cx(support[i], support[i + 1]));
}

inline void compile_quarter_turn(const MaQaoaAnsatz& ansatz, const GateTemplate& g, std::uint8_t k,
                                 std::vector<CliffordGate>& out) {
  switch (g.kind) {
    case GateKind::HadamardWall:
      for (std::uint32_t q = 0; q < ansatz.num_qubits(); ++q) out.push_back(CliffordGate::h(q));
      break;
    case GateKind::CostRotation:
      compile_cost_quarter(ansatz.clause_support(g.index), k, out);
      break;
    case GateKind::MixerRotation:
      compile_mixer_quarter(g.index, k, out);
      break;
  }
}

inline std::vector<CliffordGate> compile_point(const MaQaoaAnsatz& ansatz, const QuarterTurnPoint& q) {
  ansatz.check_point(q.size());
  std::vector<CliffordGate> gates;
  for (const auto& g : ansatz.gates()) {
    const std::uint8_t k = g.param_id < 0 ? 0 : q[static_cast<std::size_t>(g.param_id)];
    compile_quarter_turn(ansatz, g, k, gates);
  }
  return gates;
}

// Exact <H_C> at a quarter-turn point via tableau simulation. Pure function;
// any number of calls may run concurrently.
inline double clifford_energy(const MaQaoaAnsatz& ansatz, const QuarterTurnPoint& q) {
  StabilizerTableau tab(ansatz.num_qubits());
  for (const auto& g : compile_point(ansatz, q)) tab.apply(g);
  double e = ansatz.hamiltonian().offset();
  for (const auto& term : ansatz.hamiltonian().terms())
    e += term.coeff * tab.z_string_expectation(term.support);
  return e;
}

}  // namespace spiq
