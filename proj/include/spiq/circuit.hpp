#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spiq/hamiltonian.hpp"

namespace spiq {

inline constexpr double kPi = std::numbers::pi;

// Wrap an angle into the canonical range [-pi, pi).
inline double normalize_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);  // (-pi, pi]
  if (t == kPi) t = -kPi;
  return t;
}

enum class GateKind { HadamardWall, CostRotation, MixerRotation };

// One slot in the ansatz template. CostRotation indexes a Hamiltonian clause,
// MixerRotation a qubit; the wall has no parameter (param_id = -1).
struct GateTemplate {
  GateKind kind;
  std::uint32_t layer = 0;
  std::uint32_t index = 0;  // clause index or qubit, by kind
  std::int32_t param_id = -1;
};

// Dense vector of rotation angles (radians), one per parameter.
using ParameterPoint = std::vector<double>;

// Integer-mod-4 genome: angle = quarters[j] * pi/2. Every such point compiles
// to a Clifford circuit.
using QuarterTurnPoint = std::vector<std::uint8_t>;

inline ParameterPoint normalized(ParameterPoint p) {
  for (auto& t : p) t = normalize_angle(t);
  return p;
}

// Multi-angle QAOA template over a diagonal Hamiltonian: a Hadamard wall,
// then per layer every cost clause gets its own angle followed by an X mixer
// angle per qubit. The parameter count is (m + n) * depth.
//
// The gate angle is the free parameter itself; clause coefficients enter only
// through the measured expectation, never the rotation (quarter-turn values
// therefore stay Clifford for arbitrary weights).
class MaQaoaAnsatz {
 public:
  MaQaoaAnsatz(IsingHamiltonian hamiltonian, std::uint32_t depth, std::vector<GateTemplate> gates,
               std::uint32_t num_params)
      : hamiltonian_(std::move(hamiltonian)),
        depth_(depth),
        gates_(std::move(gates)),
        num_params_(num_params) {}

  const IsingHamiltonian& hamiltonian() const { return hamiltonian_; }
  std::uint32_t depth() const { return depth_; }
  const std::vector<GateTemplate>& gates() const { return gates_; }
  std::uint32_t num_params() const { return num_params_; }
  std::uint32_t num_qubits() const { return hamiltonian_.num_qubits(); }
  std::uint32_t num_clauses() const { return static_cast<std::uint32_t>(hamiltonian_.terms().size()); }

  const std::vector<std::uint32_t>& clause_support(std::uint32_t clause) const {
    return hamiltonian_.terms()[clause].support;
  }

  void check_point(std::size_t len) const {
    if (len != num_params_) throw std::invalid_argument("parameter point length mismatch");
  }

 private:
  IsingHamiltonian hamiltonian_;
  std::uint32_t depth_;
  std::vector<GateTemplate> gates_;
  std::uint32_t num_params_;
};

inline MaQaoaAnsatz build_ansatz(IsingHamiltonian h, std::uint32_t depth) {
  if (depth < 1) throw std::invalid_argument("build_ansatz: depth must be >= 1");
  const auto m = static_cast<std::uint32_t>(h.terms().size());
  const auto n = h.num_qubits();
  if (m == 0) throw std::invalid_argument("build_ansatz: Hamiltonian has no non-identity terms");

  std::vector<GateTemplate> gates;
  gates.reserve(1 + static_cast<std::size_t>(depth) * (m + n));
  gates.push_back({GateKind::HadamardWall, 0, 0, -1});
  std::int32_t pid = 0;
  for (std::uint32_t layer = 0; layer < depth; ++layer) {
    for (std::uint32_t a = 0; a < m; ++a) gates.push_back({GateKind::CostRotation, layer, a, pid++});
    for (std::uint32_t b = 0; b < n; ++b) gates.push_back({GateKind::MixerRotation, layer, b, pid++});
  }
  return MaQaoaAnsatz(std::move(h), depth, std::move(gates), (m + n) * depth);
}

// Quarter values map onto 0, pi/2, -pi (from pi), -pi/2 after normalization.
inline double quarter_angle(std::uint8_t q) {
  switch (q & 3) {
    case 0: return 0.0;
    case 1: return kPi / 2.0;
    case 2: return -kPi;
    default: return -kPi / 2.0;
  }
}

inline ParameterPoint angles_of(const QuarterTurnPoint& q) {
  ParameterPoint p(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 3) throw std::invalid_argument("angles_of: quarter value out of range");
    p[i] = quarter_angle(q[i]);
  }
  return p;
}

// Expand a tied assignment (one cost angle and one mixer angle per layer,
// i.e. the standard 2p-parameter QAOA point) to the full multi-angle vector.
inline ParameterPoint expand_tied_angles(const MaQaoaAnsatz& ansatz,
                                         const std::vector<double>& per_layer_cost,
                                         const std::vector<double>& per_layer_mixer) {
  if (per_layer_cost.size() != ansatz.depth() || per_layer_mixer.size() != ansatz.depth())
    throw std::invalid_argument("expand_tied_angles: need one cost and one mixer angle per layer");
  ParameterPoint p(ansatz.num_params());
  for (const auto& g : ansatz.gates()) {
    if (g.param_id < 0) continue;
    p[static_cast<std::size_t>(g.param_id)] =
        g.kind == GateKind::CostRotation ? per_layer_cost[g.layer] : per_layer_mixer[g.layer];
  }
  return p;
}

inline QuarterTurnPoint expand_tied_quarters(const MaQaoaAnsatz& ansatz,
                                             const std::vector<std::uint8_t>& per_layer_cost,
                                             const std::vector<std::uint8_t>& per_layer_mixer) {
  QuarterTurnPoint q(ansatz.num_params());
  for (const auto& g : ansatz.gates()) {
    if (g.param_id < 0) continue;
    q[static_cast<std::size_t>(g.param_id)] =
        g.kind == GateKind::CostRotation ? per_layer_cost.at(g.layer) : per_layer_mixer.at(g.layer);
  }
  return q;
}

}  // namespace spiq
