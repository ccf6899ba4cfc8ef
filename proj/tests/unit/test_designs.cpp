#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace haar;

namespace {

FiniteUniform cl1() { return *enumerate_members(CliffordEnsemble{1}); }
FiniteUniform pauli1() { return *enumerate_members(PauliBasisEnsemble{1}); }

// Cl(1) modulo phase by conjugacy class: identity (|Tr| = 2), 3 Paulis (0), 6 Hadamard-like (0),
// 8 of order three (1), 6 of order four (sqrt 2). For a group, F = (1/|G|) sum_g |Tr g|^{2k}.
double cl1_frame_by_classes(int k) { return (std::pow(4.0, k) + 8.0 + 6.0 * std::pow(2.0, k)) / 24.0; }

}  // namespace

TEST_CASE("exact frame potentials") {
  CHECK(frame_potential_exact(pauli1(), 1) == doctest::Approx(1.0).epsilon(1e-13));
  // Paulis form a group modulo phase with only the identity having nonzero trace.
  CHECK(frame_potential_exact(pauli1(), 2) == doctest::Approx(4.0).epsilon(1e-13));
  for (int k = 1; k <= 4; ++k) {
    CHECK(frame_potential_exact(cl1(), k) == doctest::Approx(cl1_frame_by_classes(k)).epsilon(1e-12));
    CHECK(frame_potential_exact(FiniteUniform({identity(3)}), k) == doctest::Approx(std::pow(3.0, 2 * k)));
  }
  CHECK(frame_potential_exact(cl1(), 3) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(frame_potential_exact(cl1(), 4) > 14.0 + 0.5);
}

TEST_CASE("Haar frame potential is the commutant dimension") {
  CHECK(haar_frame_potential(2, 17) == 2);
  CHECK(haar_frame_potential(3, 2) == 5);
  CHECK(haar_frame_potential(4, 2) == 14);
  for (int k = 1; k <= 4; ++k) CHECK(haar_frame_potential(k, k) == static_cast<std::int64_t>(enumerate_sk(k).size()));
  // Above k > d the count is the number of permutations avoiding a decreasing run longer than d.
  CHECK(haar_frame_potential(3, 1) == 1);
  CHECK(haar_frame_potential(5, 2) == 42);
}

TEST_CASE("Monte Carlo frame potentials") {
  const MeanSE h42 = frame_potential_mc(HaarEnsemble{4}, 2, 40000, 71, 1);
  INFO("Haar(4) k=2: " << h42.mean << " +- " << h42.se);
  CHECK(std::abs(h42.mean - 2.0) <= 5 * h42.se);
  const MeanSE h23 = frame_potential_mc(HaarEnsemble{2}, 3, 40000, 72, 1);
  CHECK(std::abs(h23.mean - 5.0) <= 5 * h23.se);
  const MeanSE id = frame_potential_mc(FiniteUniform({identity(2)}), 1, 100, 73, 1);
  CHECK(id.mean == 4.0);
  CHECK(id.se == 0.0);
  // Thread count never changes the result.
  const MeanSE a = frame_potential_mc(CliffordEnsemble{2}, 2, 3000, 74, 1);
  const MeanSE b = frame_potential_mc(CliffordEnsemble{2}, 2, 3000, 74, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

TEST_CASE("certification verdicts") {
  const DesignReport c3 = certify_design(cl1(), 3);
  CHECK(c3.verdict == Verdict::Exact);
  CHECK(c3.frame_potential == doctest::Approx(5.0));
  REQUIRE(c3.tpe_norm.has_value());
  CHECK(*c3.tpe_norm < 1e-9);
  for (int k : {1, 2}) CHECK(certify_design(cl1(), k).verdict == Verdict::Exact);

  const DesignReport c4 = certify_design(cl1(), 4);
  CHECK(c4.verdict != Verdict::Exact);
  CHECK(c4.frame_potential > 14.0);

  const DesignReport p2 = certify_design(pauli1(), 2);
  CHECK(p2.verdict != Verdict::Exact);
  CHECK(p2.frame_potential == doctest::Approx(4.0));
  CHECK(certify_design(PauliBasisEnsemble{1}, 1).verdict == Verdict::Exact);

  CertifyParams mc;
  mc.mode = Mode::MonteCarlo;
  mc.samples = 20000;
  mc.seed = 75;
  mc.with_tpe = false;
  const DesignReport haar_mc = certify_design(HaarEnsemble{2}, 2, mc);
  CHECK(haar_mc.verdict == Verdict::Exact);
  CHECK(haar_mc.frame_potential_se > 0);
  CHECK(haar_mc.samples == 20000);

  // Invariants on every report.
  for (const DesignReport& r : {c3, c4, p2}) {
    CHECK(r.frame_potential >= r.haar_frame_potential - 1e-9);
    CHECK(r.l2_deviation * r.l2_deviation == doctest::Approx(r.frame_potential - r.haar_frame_potential).scale(1.0));
    REQUIRE(r.tpe_norm.has_value());
    CHECK(*r.tpe_norm <= r.l2_deviation + 1e-9);
    CHECK(r.derived_bounds.at("diamond_upper") == doctest::Approx(std::pow(r.d, r.k) * *r.tpe_norm));
  }
  CHECK_THROWS_AS(certify_design(CliffordEnsemble{2}, 2), DomainError);
}

TEST_CASE("frame potential difference equals the squared 2-norm distance") {
  RandomStream rng(76, 0);
  std::vector<FiniteUniform> cases{pauli1(), cl1(), FiniteUniform({identity(2)})};
  cases.emplace_back(std::vector<CMat>{sample_haar_unitary(2, rng), sample_haar_unitary(2, rng), sample_haar_unitary(2, rng)},
                     std::vector<double>{0.2, 0.3, 0.5});
  for (const auto& e : cases) {
    for (int k = 1; k <= 3; ++k) {
      const CMat diff = ensemble_moment_operator(e, k) - vectorized_moment_operator(k, 2);
      const double fro2 = std::pow(frobenius_norm(diff), 2);
      CHECK(frame_potential_exact(e, k) - static_cast<double>(haar_frame_potential(k, 2)) ==
            doctest::Approx(fro2).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("Pauli twirl is a 1-design") {
  for (int n : {1, 2}) {
    const int d = 1 << n;
    const CMat omega = vec(identity(d));
    const CMat m = ensemble_moment_operator(UnitaryEnsemble(PauliBasisEnsemble{n}), 1);
    CHECK(max_abs_diff(m, omega * omega.adjoint() / static_cast<double>(d)) < 1e-12);
  }
}

TEST_CASE("TPE norms and amplification") {
  CHECK(tpe_norm(FiniteUniform({identity(2)}), 1) == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k <= 3; ++k) CHECK(tpe_norm(cl1(), k) < 1e-9);
  const double eps = tpe_norm(pauli1(), 2);
  CHECK(eps > 0.1);

  auto inner = std::make_shared<const UnitaryEnsemble>(PauliBasisEnsemble{1});
  CHECK(tpe_norm(amplify(*inner, 1), 2) == doctest::Approx(eps).epsilon(1e-12));
  for (int p = 1; p <= 4; ++p) CHECK(tpe_norm(amplify(*inner, p), 2) <= std::pow(eps, p) + 1e-9);
  for (int p = 1; p <= 3; ++p) CHECK(tpe_norm(amplify(cl1(), p), 3) < 1e-9);

  // Products of two independent Pauli samples, enumerated explicitly.
  std::vector<CMat> products;
  for (const auto& a : pauli1().members) {
    for (const auto& b : pauli1().members) products.push_back(a * b);
  }
  const CMat m2 = ensemble_moment_operator(amplify(*inner, 2), 2);
  CHECK(max_abs_diff(m2, ensemble_moment_operator(FiniteUniform(products), 2)) < 1e-12);

  // The sampled estimate of an exact design lands near zero, biased upward by sampling noise.
  const double mc = tpe_norm_mc(CliffordEnsemble{1}, 1, 20000, 77, 1);
  CHECK(mc >= 0.0);
  CHECK(mc < 0.05);
}

TEST_CASE("bound conversions") {
  DesignReport r;
  r.k = 2;
  r.d = 2;
  r.l2_deviation = 0.0;
  r.tpe_norm = 0.0;
  for (const auto& [name, v] : bound_conversions(r)) CHECK(v == 0.0);
  r.l2_deviation = 0.3;
  r.tpe_norm = 0.1;
  const auto b = bound_conversions(r);
  CHECK(b.at("diamond_upper") == doctest::Approx(0.4));
  CHECK(b.at("tpe_upper_from_frame") == doctest::Approx(0.3));
  CHECK(b.at("frame_upper_from_tpe") == doctest::Approx(0.4));
  CHECK(b.at("tpe_upper_from_diamond") >= *r.tpe_norm);
  CHECK(b.at("frame_upper_from_diamond") >= r.l2_deviation);
}

TEST_CASE("relative error check") {
  for (double eps : {0.0, 0.1, 1.0}) CHECK(relative_error_check(cl1(), 3, eps));
  CHECK_FALSE(relative_error_check(FiniteUniform({identity(2)}), 1, 0.0));
  const FiniteUniform p = pauli1();
  bool seen_true = false;
  for (double eps = 0.0; eps <= 8.0; eps += 0.25) {
    const bool ok = relative_error_check(p, 2, eps);
    if (seen_true) CHECK(ok);
    seen_true = seen_true || ok;
  }
  const CMat s = vectorized_moment_operator(1, 2);
  // Choi of the fully depolarizing map X -> Tr(X) I/2 is I/2.
  CHECK(max_abs_diff(choi_from_superoperator(s, 2), identity(4) / 2.0) < 1e-14);
}

TEST_CASE("cardinality bound") {
  CHECK(design_cardinality_lower_bound(1, 2) == doctest::Approx(4.0));
  CHECK(design_cardinality_lower_bound(2, 2) == doctest::Approx(8.0));
  CHECK(design_cardinality_lower_bound(3, 2) == doctest::Approx(64.0 / 6));
  CHECK(24.0 >= design_cardinality_lower_bound(3, 2));
  CHECK(static_cast<double>(pauli1().members.size()) >= design_cardinality_lower_bound(1, 2));
}

TEST_CASE("state frame potentials") {
  const auto h = state_frame_potential(HaarStates{2}, 2);
  CHECK(h.frame_potential == doctest::Approx(1.0 / 3));
  CHECK(h.is_design);
  const auto hmc = state_frame_potential(HaarStates{2}, 2, Mode::MonteCarlo, 20000, 78, 1);
  CHECK(std::abs(hmc.frame_potential - 1.0 / 3) <= 5 * hmc.se);

  const auto single = state_frame_potential(FiniteStates({haar::testing::ket(3, 0)}), 2);
  CHECK(single.frame_potential == doctest::Approx(1.0));
  CHECK_FALSE(single.is_design);

  const auto induced = state_frame_potential(induced_states(cl1(), haar::testing::ket(2, 0)), 3);
  CHECK(induced.frame_potential == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(induced.haar_value == doctest::Approx(0.25));
  CHECK(induced.is_design);
}
