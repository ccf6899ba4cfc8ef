#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace haar;
using haar::testing::random_density;
using haar::testing::random_hermitian;

namespace {

struct BruteForce {
  CMat channel_output;  // E[U^dagger |b><b| U]
  double mean = 0.0;
  double variance = 0.0;
};

// Exact enumeration over the 24 single-qubit Cliffords and both outcomes.
BruteForce enumerate_n1(const CMat& rho, const CMat& o) {
  BruteForce out;
  out.channel_output = CMat::Zero(2, 2);
  double m1 = 0, m2 = 0;
  for (const auto& c : clifford_group_1q()) {
    const CMat& u = c.matrix;
    const CMat r = u * rho * u.adjoint();
    for (int b = 0; b < 2; ++b) {
      const double p = r(b, b).real() / 24.0;
      const CMat ket = u.adjoint() * haar::testing::ket(2, b);
      const CMat proj = ket * ket.adjoint();
      out.channel_output += p * proj;
      const double x = (o * inverse_channel(proj, 2)).trace().real();
      m1 += p * x;
      m2 += p * x * x;
    }
  }
  out.mean = m1;
  out.variance = m2 - m1 * m1;
  return out;
}

}  // namespace

TEST_CASE("measurement channel and its inverse") {
  CHECK(max_abs_diff(measurement_channel(identity(2) / 2.0, 2), identity(2) / 2.0) < 1e-15);
  CMat p0 = CMat::Zero(2, 2);
  p0(0, 0) = 1.0;
  CMat expect = CMat::Zero(2, 2);
  expect(0, 0) = 2.0 / 3;
  expect(1, 1) = 1.0 / 3;
  CHECK(max_abs_diff(measurement_channel(p0, 2), expect) < 1e-15);
  CMat inv = CMat::Zero(2, 2);
  inv(0, 0) = 2.0;
  inv(1, 1) = -1.0;
  CHECK(max_abs_diff(inverse_channel(p0, 2), inv) < 1e-15);
  CHECK(max_abs_diff(inverse_channel(identity(2) / 2.0, 2), identity(2) / 2.0) < 1e-15);

  RandomStream rng(101, 0);
  const CMat rho = random_density(4, rng);
  CHECK(max_abs_diff(inverse_channel(measurement_channel(rho, 4), 4), rho) < 1e-12);
  CHECK(max_abs_diff(measurement_channel(inverse_channel(rho, 4), 4), rho) < 1e-12);
  CHECK(std::abs(measurement_channel(rho, 4).trace() - 1.0) < 1e-12);
  CHECK(std::abs(inverse_channel(rho, 4).trace() - 1.0) < 1e-12);
  for (int t = 0; t < 5; ++t) {
    const CMat a = haar::testing::random_matrix(4, 4, rng), b = haar::testing::random_matrix(4, 4, rng);
    CHECK(std::abs((a * measurement_channel(b, 4)).trace() - (measurement_channel(a, 4) * b).trace()) < 1e-12);
  }
  CHECK_THROWS_AS(measurement_channel(rho, 2), DimensionError);

  // It is the Haar twirl of the dephasing map, i.e. a depolarizing channel with p = 1/(d+1).
  const auto stats = parallel_matrix_mean(40000, 1, 2, 2, [&](std::size_t i) {
    RandomStream r(102, i);
    const CMat u = sample_clifford(1, r).matrix;
    const int b = simulate_measurement(p0, u, r);
    const CMat ket = u.adjoint() * haar::testing::ket(2, b);
    return CMat(ket * ket.adjoint());
  });
  CHECK(within_se(stats, measurement_channel(p0, 2), 5.0));
}

TEST_CASE("Born sampling") {
  RandomStream rng(103, 0);
  const CMat rho = random_density(4, rng);
  const CMat u = sample_haar_unitary(4, rng);
  const CMat r = u * rho * u.adjoint();
  std::vector<double> counts(4, 0.0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) counts[simulate_measurement(rho, u, rng)] += 1;
  for (int b = 0; b < 4; ++b) {
    const double p = r(b, b).real();
    CHECK(std::abs(counts[b] / n - p) <= 5 * std::sqrt(p * (1 - p) / n) + 1e-12);
  }
  CHECK_THROWS_AS(simulate_measurement(2.0 * rho, u, rng), DomainError);
}

TEST_CASE("brute-force enumeration over Cl(1)") {
  RandomStream rng(104, 0);
  std::vector<CMat> obs{pauli_string("X"), pauli_string("Y"), pauli_string("Z")};
  for (int t = 0; t < 4; ++t) obs.push_back(random_hermitian(2, rng));
  for (int t = 0; t < 4; ++t) {
    const CMat rho = random_density(2, rng);
    for (const auto& o : obs) {
      const BruteForce bf = enumerate_n1(rho, o);
      CHECK(max_abs_diff(bf.channel_output, measurement_channel(rho, 2)) < 1e-12);
      CHECK(bf.mean == doctest::Approx((o * rho).trace().real()).epsilon(1e-12).scale(1.0));
      CHECK(bf.variance == doctest::Approx(shadow_variance_exact(rho, o)).epsilon(1e-12).scale(1.0));
      CHECK(bf.variance <= shadow_variance_bound(o) + 1e-12);
    }
  }
  CHECK(shadow_variance_exact(identity(2) / 2.0, pauli_string("Z")) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(shadow_variance_bound(pauli_string("Z")) == 6.0);
  CHECK(shadow_variance_exact(identity(2) / 2.0, identity(2)) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("single-shot estimator is unbiased and respects the variance bound") {
  RandomStream rng(105, 0);
  for (int n : {1, 2}) {
    const int d = 1 << n;
    const CMat rho = random_density(d, rng);
    std::vector<CMat> obs;
    if (n == 1) {
      obs = {pauli_string("X"), pauli_string("Y"), pauli_string("Z")};
    } else {
      obs = {pauli_string("XI"), pauli_string("YI"), pauli_string("ZI"), pauli_string("ZZ")};
    }
    const SnapshotLog log = generate_snapshots(rho, 20000, 106 + n, 1);
    const auto est = estimate_observables(log, obs, 10, 1);
    for (std::size_t m = 0; m < obs.size(); ++m) {
      INFO("n=" << n << " obs " << m);
      CHECK(std::abs(est[m].grand_mean - (obs[m] * rho).trace().real()) <= 5 * est[m].grand_se);
      const VarianceSE v = shadow_variance_empirical(rho, obs[m], 20000, 110 + n, 1);
      CHECK(v.variance <= shadow_variance_bound(obs[m]));
      CHECK(std::abs(v.variance - shadow_variance_exact(rho, obs[m])) <= 5 * v.se);
    }
  }

  // O = I: every single-shot estimate is exactly 1.
  RandomStream r(111, 0);
  for (int i = 0; i < 50; ++i) {
    const CMat u = sample_clifford(2, r).matrix;
    CHECK(single_shot_estimate(identity(4), u, i % 4) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("median-of-means estimates") {
  CMat p0 = CMat::Zero(2, 2);
  p0(0, 0) = 1.0;
  const auto a = estimate_observables(p0, {pauli_string("Z"), identity(2)}, 10000, 10, 112, 1);
  CHECK(std::abs(a[0].estimate - 1.0) < 0.1);
  CHECK(a[0].batch_means.size() == 10);
  CHECK(a[1].estimate == doctest::Approx(1.0).epsilon(1e-12));
  const auto b = estimate_observables(identity(2) / 2.0, {pauli_string("Z")}, 10000, 10, 113, 1);
  CHECK(std::abs(b[0].estimate) < 0.1);
  CHECK(b[0].estimate == median(b[0].batch_means));

  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS_AS(estimate_observables(p0, {pauli_string("Z")}, 50, 10, 1, 1), DomainError);
  CHECK_THROWS_AS(generate_snapshots(identity(16) / 16.0, 10, 1, 1), ResourceError);
}

TEST_CASE("snapshot logs replay exactly") {
  RandomStream rng(114, 0);
  const CMat rho = random_density(4, rng);
  const std::vector<CMat> obs{pauli_string("ZZ"), pauli_string("XY")};
  const SnapshotLog one = generate_snapshots(rho, 3000, 115, 1);
  const SnapshotLog three = generate_snapshots(rho, 3000, 115, 3);
  CHECK(one.to_json() == three.to_json());
  const SnapshotLog back = SnapshotLog::from_json(nlohmann::json::parse(one.to_json().dump()));
  const auto e1 = estimate_observables(one, obs, 6, 1);
  const auto e2 = estimate_observables(back, obs, 6, 2);
  for (std::size_t m = 0; m < obs.size(); ++m) {
    CHECK(e1[m].estimate == e2[m].estimate);
    CHECK(e1[m].batch_means == e2[m].batch_means);
  }
  nlohmann::json broken = one.to_json();
  broken["snapshots"][0][1] = 9;
  CHECK_THROWS_AS(SnapshotLog::from_json(broken), DomainError);
}

TEST_CASE("sample complexity constants") {
  const std::size_t n = sample_complexity(1, 0.1, 0.05, 6.0);
  CHECK(n == static_cast<std::size_t>(std::ceil(4 * std::log(40.0) * 600)));
  CHECK(n == 8854);
  CHECK(median_of_means_batches(1, 0.05) == 8);
  const std::size_t n2 = sample_complexity(2, 0.1, 0.05, 6.0);
  CHECK(std::abs(static_cast<double>(n2 - n) - 4 * std::log(2.0) * 600) <= 1.0);
  const double ratio = static_cast<double>(sample_complexity(1, 0.05, 0.05, 6.0)) / static_cast<double>(n);
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(sample_complexity(1, 0.1, 0.01, 6.0) > n);
  CHECK(sample_complexity(1, 0.1, 0.05, 12.0) > n);
  CHECK_THROWS_AS(sample_complexity(0, 0.1, 0.05, 1.0), DomainError);
  CHECK_THROWS_AS(sample_complexity(1, 1.5, 0.05, 1.0), DomainError);
}

TEST_CASE("median-of-means failure rate at the computed budget") {
  // A reduced repetition count keeps the unit suite quick; the acceptance run uses 200.
  const double eps = 0.1, delta = 0.05;
  const CMat z = pauli_string("Z");
  const std::size_t n = sample_complexity(1, eps, delta, shadow_variance_bound(z));
  const std::size_t k = median_of_means_batches(1, delta);
  RandomStream rng(116, 0);
  const CMat rho = random_density(2, rng);
  const double truth = (z * rho).trace().real();
  const int reps = 40;
  int failures = 0;
  for (int r = 0; r < reps; ++r) {
    const auto e = estimate_observables(rho, {z}, n, k, 1000 + r, 1);
    failures += std::abs(e[0].estimate - truth) > eps;
  }
  CHECK(failures <= delta * reps + 3 * std::sqrt(reps * delta * (1 - delta)));
}
