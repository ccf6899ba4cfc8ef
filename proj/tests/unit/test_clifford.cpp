#include <doctest.h>

#include <set>

#include "helpers.hpp"

using namespace haar;

namespace {

// Index in pauli_basis(n) and sign of U P U^dagger, or {-1, 0} when it is not a signed Pauli.
std::pair<int, int> conjugated_pauli(const CMat& u, const CMat& p, int n) {
  const CMat m = u * p * u.adjoint();
  const auto basis = pauli_basis(n);
  const double d = 1 << n;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Complex c = hs_inner(basis[i], m) / d;
    if (std::abs(std::abs(c) - 1.0) < 1e-9) {
      if (std::abs(c.imag()) > 1e-9) return {-1, 0};
      return {static_cast<int>(i), c.real() > 0 ? 1 : -1};
    }
  }
  return {-1, 0};
}

}  // namespace

TEST_CASE("gate matrices") {
  const double r = 1.0 / std::sqrt(2.0);
  CMat h(2, 2);
  h << r, r, r, -r;
  CMat s(2, 2);
  s << 1, 0, 0, Complex(0, 1);
  CHECK(max_abs_diff(circuit_matrix({{CliffordGate::Kind::H, 0}}, 1), h) < 1e-15);
  CHECK(max_abs_diff(circuit_matrix({{CliffordGate::Kind::S, 0}}, 1), s) < 1e-15);
  // Time order: first gate acts first, so the matrix is S * H.
  CHECK(max_abs_diff(circuit_matrix({{CliffordGate::Kind::H, 0}, {CliffordGate::Kind::S, 0}}, 1), s * h) < 1e-15);
  // Qubit 0 is the most significant factor.
  CHECK(max_abs_diff(circuit_matrix({{CliffordGate::Kind::H, 1}}, 2), kron(identity(2), h)) < 1e-15);
  CMat cx = CMat::Zero(4, 4);
  cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
  CHECK(max_abs_diff(circuit_matrix({{CliffordGate::Kind::CX, 0, 1}}, 2), cx) == 0.0);
  CMat cx10 = CMat::Zero(4, 4);
  cx10(0, 0) = cx10(2, 2) = cx10(1, 3) = cx10(3, 1) = 1.0;
  CHECK(max_abs_diff(circuit_matrix({{CliffordGate::Kind::CX, 1, 0}}, 2), cx10) == 0.0);
}

TEST_CASE("phase canonicalization and the membership test") {
  RandomStream rng(61, 0);
  const CMat u = sample_haar_unitary(2, rng);
  const CMat c = canonicalize_phase(Complex(0, 1) * u);
  CHECK(std::abs(c(0, 0).imag()) < 1e-15);
  CHECK(c(0, 0).real() > 0);
  CHECK(max_abs_diff(c, canonicalize_phase(u)) < 1e-14);
  CHECK(is_clifford(identity(4), 2));
  CHECK(is_clifford(pauli_string("XZ"), 2));
  CHECK_FALSE(is_clifford(u, 1));
  CMat t(2, 2);
  t << 1, 0, 0, std::polar(1.0, M_PI / 4);
  CHECK_FALSE(is_clifford(t, 1));
}

TEST_CASE("single-qubit Clifford group") {
  const auto g = clifford_group_1q();
  REQUIRE(g.size() == 24);
  CHECK(max_abs_diff(g[0].matrix, identity(2)) < 1e-15);
  auto find = [&](const CMat& m) {
    const CMat c = canonicalize_phase(m);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (max_abs_diff(c, g[i].matrix) < 1e-10) return static_cast<int>(i);
    }
    return -1;
  };
  for (const auto& e : g) {
    CHECK(is_clifford(e.matrix, 1));
    CHECK(max_abs_diff(canonicalize_phase(circuit_matrix(e.circuit, 1)), e.matrix) < 1e-12);
    for (const auto& f : g) CHECK(find(e.matrix * f.matrix) >= 0);
  }
  // Pairwise phase-inequivalent.
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) CHECK(std::abs(hs_inner(g[i].matrix, g[j].matrix)) < 2.0 - 1e-9);
  }
  // The action on (X, Z) runs over all 6 * 4 signed anticommuting pairs.
  std::set<std::tuple<int, int, int, int>> images;
  for (const auto& e : g) {
    const auto x = conjugated_pauli(e.matrix, pauli_string("X"), 1);
    const auto z = conjugated_pauli(e.matrix, pauli_string("Z"), 1);
    images.insert({x.first, x.second, z.first, z.second});
  }
  CHECK(images.size() == 24);
}

TEST_CASE("uniform sampling of Cl(1)") {
  const auto g = clifford_group_1q();
  const std::size_t n = 24000;
  std::vector<double> counts(24, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(62, i);
    const CliffordElement c = sample_clifford(1, rng);
    int hit = -1;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (max_abs_diff(c.matrix, g[j].matrix) < 1e-10) hit = static_cast<int>(j);
    }
    REQUIRE(hit >= 0);
    counts[hit] += 1;
  }
  const double chi2 = haar::testing::chi_square(counts, n / 24.0);
  INFO("chi2 = " << chi2);
  CHECK(chi2 < haar::testing::chi2_crit_001(23));
}

TEST_CASE("sampled Cliffords for n = 1..3") {
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t i = 0; i < 40; ++i) {
      RandomStream rng(63, i);
      const CliffordElement c = sample_clifford(n, rng);
      CHECK(c.n_qubits == n);
      CHECK(is_unitary(c.matrix));
      CHECK(is_clifford(c.matrix, n));
      CHECK(max_abs_diff(canonicalize_phase(circuit_matrix(c.circuit, n)), c.matrix) < 1e-10);
      CHECK(circuit_from_string(circuit_to_string(c.circuit)) == c.circuit);
    }
  }
  RandomStream rng(63, 999);
  CHECK_THROWS_AS(sample_clifford(6, rng), ResourceError);
}

TEST_CASE("image of X_0 under sampled Cl(2) is uniform over signed non-identity Paulis") {
  const std::size_t n = 15000;
  std::vector<double> counts(30, 0.0);
  const CMat x0 = pauli_string("XI");
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(64, i);
    const auto [idx, sgn] = conjugated_pauli(sample_clifford(2, rng).matrix, x0, 2);
    REQUIRE(idx >= 1);
    counts[(idx - 1) * 2 + (sgn > 0 ? 0 : 1)] += 1;
  }
  const double chi2 = haar::testing::chi_square(counts, n / 30.0);
  INFO("chi2 = " << chi2);
  CHECK(chi2 < haar::testing::chi2_crit_001(29));
}

TEST_CASE("circuit text format") {
  const CliffordCircuit c{{CliffordGate::Kind::H, 0}, {CliffordGate::Kind::S, 1}, {CliffordGate::Kind::CX, 0, 1}};
  CHECK(circuit_to_string(c) == "H 0; S 1; CX 0 1");
  CHECK(circuit_from_string("H 0; S 1; CX 0 1") == c);
  CHECK(circuit_from_string("").empty());
  CHECK_THROWS(circuit_from_string("T 0"));
}
