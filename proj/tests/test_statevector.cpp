#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "spiq/statevector.hpp"

using namespace spiq;
using testing_helpers::k3_graph;

TEST_CASE("exact_energy matches the stabilizer case at the zero point") {
  const auto ansatz = build_ansatz(maxcut_hamiltonian(k3_graph()), 1);
  CHECK(exact_energy(ansatz, ParameterPoint(6, 0.0)) == Catch::Approx(-1.5));
}

TEST_CASE("exact_energy on the cos fixture at pi/3") {
  CHECK(exact_energy(testing_helpers::cos_theta_fixture(), {kPi / 3}) == Catch::Approx(0.5));
}

TEST_CASE("statevector cap is enforced") {
  IsingHamiltonian h(21, 0.0, {PauliZTerm(1.0, {0})});
  const auto ansatz = build_ansatz(h, 1);
  CHECK_THROWS_AS(exact_energy(ansatz, ParameterPoint(22, 0.0), 20), std::invalid_argument);
}

TEST_CASE("normalization is preserved through random circuits") {
  Rng rng(17);
  for (int rep = 0; rep < 25; ++rep) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next_below(5));
    const auto h = testing_helpers::random_ising(n, 2 + rng.next_below(5), rng);
    if (h.terms().empty()) continue;
    const auto ansatz = build_ansatz(h, 1 + rng.next_below(2));
    const auto st = simulate_point(ansatz, testing_helpers::random_angles(ansatz.num_params(), rng));
    CHECK(st.norm_sq() == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("exact_energy is 2pi-periodic in every parameter") {
  Rng rng(19);
  const auto ansatz = build_ansatz(maxcut_hamiltonian(k3_graph()), 2);
  const auto base = testing_helpers::random_angles(ansatz.num_params(), rng);
  const double e0 = exact_energy(ansatz, base);
  for (std::size_t j = 0; j < base.size(); ++j) {
    auto shifted = base;
    shifted[j] += 2 * kPi;
    CHECK(exact_energy(ansatz, shifted) == Catch::Approx(e0).margin(1e-9));
  }
}

TEST_CASE("noiseless noisy_energy equals exact_energy exactly") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next_below(4));
    const auto h = testing_helpers::random_ising(n, 2 + rng.next_below(5), rng);
    if (h.terms().empty()) continue;
    const auto ansatz = build_ansatz(h, 1 + rng.next_below(2));
    const auto angles = testing_helpers::random_angles(ansatz.num_params(), rng);
    NoiseModel noiseless{0.0, 0.0, 0.0, 8};
    CHECK(noisy_energy(ansatz, angles, noiseless, rep) == exact_energy(ansatz, angles));
  }
}

TEST_CASE("noisy_energy is deterministic per seed") {
  const auto ansatz = build_ansatz(maxcut_hamiltonian(k3_graph()), 2);
  const ParameterPoint angles(ansatz.num_params(), 0.7);
  NoiseModel noise{0.05, 0.1, 0.01, 32};
  const double a = noisy_energy(ansatz, angles, noise, 99);
  const double b = noisy_energy(ansatz, angles, noise, 99);
  CHECK(a == b);
  const double c = noisy_energy(ansatz, angles, noise, 100);
  CHECK(a != c);  // different stream almost surely differs
}

TEST_CASE("heavy depolarizing noise drives K3 toward the offset") {
  // with p1 = p2 = 1 every site scrambles; the trajectory mean approaches the
  // maximally-mixed expectation (= offset) within 3 standard errors
  const auto ansatz = build_ansatz(maxcut_hamiltonian(k3_graph()), 1);
  Rng rng(3);
  const auto angles = testing_helpers::random_angles(ansatz.num_params(), rng);
  NoiseModel heavy{1.0, 1.0, 0.0, 10000};
  const double mean = noisy_energy(ansatz, angles, heavy, 7);
  // each ZZ term is bounded by +-0.5, three of them: sigma <= 1.5/sqrt(T)
  const double sigma_bound = 1.5 / std::sqrt(10000.0);
  CHECK(std::abs(mean - (-1.5)) < 3 * sigma_bound);
}

TEST_CASE("measurement flips damp single-qubit expectations") {
  // state |0>: <Z> = 1; flipping with pm gives (1 - 2 pm)
  IsingHamiltonian h(1, 0.0, {PauliZTerm(1.0, {0})});
  std::vector<GateTemplate> gates = {{GateKind::CostRotation, 0, 0, 0}};  // R_Z only: stays |0>
  const MaQaoaAnsatz ansatz(std::move(h), 1, std::move(gates), 1);
  NoiseModel meas{0.0, 0.0, 0.25, 4};
  CHECK(noisy_energy(ansatz, {0.0}, meas, 1) == Catch::Approx(0.5));
}

TEST_CASE("sampling a computational basis state gives one distinct outcome") {
  // R_Z on |0...0> keeps the basis state
  IsingHamiltonian h(3, 0.0, {PauliZTerm(1.0, {0, 1, 2})});
  std::vector<GateTemplate> gates = {{GateKind::CostRotation, 0, 0, 0}};
  const MaQaoaAnsatz ansatz(std::move(h), 1, std::move(gates), 1);
  const auto samples = sample_bitstrings(ansatz, {1.3}, 5000, 11);
  const std::set<std::uint64_t> distinct(samples.begin(), samples.end());
  CHECK(distinct.size() == 1);
  CHECK(*distinct.begin() == 0);
}

TEST_CASE("sampling the uniform superposition covers all 16 outcomes") {
  IsingHamiltonian h(4, 0.0, {PauliZTerm(1.0, {0})});
  std::vector<GateTemplate> gates = {{GateKind::HadamardWall, 0, 0, -1}};
  const MaQaoaAnsatz ansatz(std::move(h), 1, std::move(gates), 0);
  const auto samples = sample_bitstrings(ansatz, {}, 4096, 21);
  const std::set<std::uint64_t> distinct(samples.begin(), samples.end());
  CHECK(distinct.size() == 16);  // miss probability < 1e-3 at 4096 shots
}

TEST_CASE("sampling frequencies converge to the exact distribution") {
  Rng rng(29);
  const auto g = generate_graph(GraphKind::Regular3, 6, GraphWeighting::IntegerZeroToTen, 4);
  const auto ansatz = build_ansatz(maxcut_hamiltonian(g), 1);
  const auto angles = testing_helpers::random_angles(ansatz.num_params(), rng);
  const std::uint64_t shots = 1000000;
  const auto samples = sample_bitstrings(ansatz, angles, shots, 31);

  std::vector<std::uint64_t> counts(64, 0);
  for (auto s : samples) ++counts[s];
  const auto st = simulate_point(ansatz, angles);
  for (std::uint64_t z = 0; z < 64; ++z) {
    const double p = std::norm(st.amplitudes()[z]);
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) * static_cast<double>(shots));
    const double expected = p * static_cast<double>(shots);
    CHECK(std::abs(static_cast<double>(counts[z]) - expected) <= 5 * sigma + 1);
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const auto ansatz = build_ansatz(maxcut_hamiltonian(k3_graph()), 1);
  Rng rng(5);
  const auto angles = testing_helpers::random_angles(ansatz.num_params(), rng);
  CHECK(sample_bitstrings(ansatz, angles, 500, 77) == sample_bitstrings(ansatz, angles, 500, 77));
}

TEST_CASE("finite differences recover the cos fixture derivative") {
  const auto fixture = testing_helpers::cos_theta_fixture();
  const auto grad = finite_difference_gradient(fixture, {kPi / 2}, 1e-5);
  REQUIRE(grad.size() == 1);
  CHECK(grad[0] == Catch::Approx(-1.0).margin(1e-6));
  CHECK_THROWS_AS(finite_difference_gradient(fixture, {0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("gradient of an offset-dominated Hamiltonian is zero") {
  // single clause with zero-weight edge dropped leaves offset only; instead
  // use a clause whose coefficient is tiny relative to the offset: gradient
  // scales with the coefficient
  IsingHamiltonian h(2, 5.0, {PauliZTerm(1e-12, {0, 1})});
  const auto ansatz = build_ansatz(h, 1);
  const auto grad = finite_difference_gradient(ansatz, ParameterPoint(3, 0.3), 1e-5);
  for (double gj : grad) CHECK(std::abs(gj) < 1e-9);
}

TEST_CASE("diagonal-expectation identity: energy equals sampled average") {
  Rng rng(37);
  const auto ansatz = build_ansatz(maxcut_hamiltonian(k3_graph()), 2);
  const auto angles = testing_helpers::random_angles(ansatz.num_params(), rng);
  const std::uint64_t shots = 200000;
  const auto samples = sample_bitstrings(ansatz, angles, shots, 41);
  double mean = 0.0;
  for (auto s : samples)
    mean += evaluate_bitstring(ansatz.hamiltonian(), index_to_bitstring(s, 3));
  mean /= static_cast<double>(shots);
  // energies bounded by |offset| + sum|coeff| = 3; sigma <= 3/sqrt(shots)
  CHECK(mean == Catch::Approx(exact_energy(ansatz, angles)).margin(5 * 3.0 / std::sqrt(shots)));
}
