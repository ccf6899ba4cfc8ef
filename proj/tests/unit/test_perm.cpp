#include <doctest.h>

#include "helpers.hpp"

using namespace haar;
using haar::testing::ket;
using haar::testing::random_matrix;

namespace {

// V(pi) built from kets: column |i_0..i_{k-1}> maps to |i_{pi^-1(0)}..i_{pi^-1(k-1)}>.
CMat perm_matrix_oracle(const Permutation& p, int d) {
  const int k = p.size();
  const Permutation inv = p.inverse();
  const std::int64_t dim = ipow(d, k);
  CMat m = CMat::Zero(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    std::vector<int> digits(k);
    std::int64_t rem = col;
    for (int s = k - 1; s >= 0; --s) {
      digits[s] = static_cast<int>(rem % d);
      rem /= d;
    }
    CMat in = CMat::Identity(1, 1), out = CMat::Identity(1, 1);
    for (int s = 0; s < k; ++s) {
      in = kron(in, ket(d, digits[s]));
      out = kron(out, ket(d, digits[inv(s)]));
    }
    m += out * in.adjoint();
  }
  return m;
}

}  // namespace

TEST_CASE("permutation group operations") {
  const auto t = Permutation::transposition(2, 0, 1);
  CHECK(compose(t, t).is_identity());
  const Permutation three_cycle({1, 2, 0});
  CHECK(three_cycle.sign() == 1);
  CHECK(Permutation::transposition(3, 0, 2).sign() == -1);
  CHECK(Permutation::identity(3).cycle_count() == 3);
  CHECK(three_cycle.cycle_count() == 1);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), DomainError);
  CHECK_THROWS_AS(compose(Permutation::identity(2), Permutation::identity(3)), DomainError);

  const auto s4 = enumerate_sk(4);
  for (const auto& a : s4) {
    CHECK(compose(a, a.inverse()).is_identity());
    for (const auto& b : s4) CHECK(sign(compose(a, b)) == a.sign() * b.sign());
  }
}

TEST_CASE("enumerate_sk") {
  CHECK(enumerate_sk(1).size() == 1);
  CHECK(enumerate_sk(1)[0].is_identity());
  const auto s3 = enumerate_sk(3);
  CHECK(s3.size() == 6);
  CHECK(s3.front().is_identity());
  CHECK(std::is_sorted(s3.begin(), s3.end()));
  CHECK(enumerate_sk(5).size() == 120);
  CHECK_THROWS_AS(enumerate_sk(9), ResourceError);
}

TEST_CASE("permutation operators match the basis action") {
  for (int k : {1, 2, 3}) {
    for (int d : {2, 3}) {
      for (const auto& p : enumerate_sk(k)) {
        CHECK(max_abs_diff(perm_operator_matrix(p, d), perm_matrix_oracle(p, d)) == 0.0);
      }
    }
  }
  CHECK(max_abs_diff(perm_operator_matrix(Permutation::identity(2), 2), identity(4)) == 0.0);
  CHECK(max_abs_diff(perm_operator_matrix(Permutation::transposition(2, 0, 1), 2), flip(2)) == 0.0);
  CHECK(std::abs(perm_operator_matrix(Permutation::transposition(2, 0, 1), 3).trace() - Complex(3)) == 0.0);
}

TEST_CASE("representation property and commutation with U^{(x)k}") {
  RandomStream rng(11, 0);
  for (int d : {2, 3}) {
    const auto s3 = enumerate_sk(3);
    const CMat u3 = kron_power(sample_haar_unitary(d, rng), 3);
    for (const auto& a : s3) {
      const CMat va = perm_operator_matrix(a, d);
      CHECK(max_abs_diff(perm_operator_matrix(a.inverse(), d), va.adjoint()) == 0.0);
      CHECK(max_abs_diff(va * u3, u3 * va) < 1e-12);
      for (const auto& b : s3) {
        CHECK(max_abs_diff(va * perm_operator_matrix(b, d), perm_operator_matrix(compose(a, b), d)) == 0.0);
      }
    }
  }
}

TEST_CASE("apply and trace_against agree with the dense form") {
  RandomStream rng(12, 0);
  const Permutation p({2, 0, 1});
  const PermOperator v(p, 3);
  const CMat x = random_matrix(27, 1, rng);
  CHECK(max_abs_diff(v.apply(x), v.dense() * x) == 0.0);
  const CMat o = random_matrix(27, 27, rng);
  CHECK(std::abs(v.trace_against(o) - (v.dense().adjoint() * o).trace()) < 1e-12);
}

TEST_CASE("gram matrix") {
  RMat g1 = gram_matrix(1, 5);
  CHECK(g1.rows() == 1);
  CHECK(g1(0, 0) == 5.0);

  const RMat g22 = gram_matrix(2, 2);
  CHECK(g22(0, 0) == 4.0);
  CHECK(g22(0, 1) == 2.0);
  CHECK(g22(1, 0) == 2.0);
  CHECK(g22(1, 1) == 4.0);

  for (int k : {1, 2, 3}) {
    for (int d : {1, 2, 3}) {
      const auto perms = enumerate_sk(k);
      const RMat g = gram_matrix(k, d);
      for (std::size_t a = 0; a < perms.size(); ++a) {
        for (std::size_t b = 0; b < perms.size(); ++b) {
          const Complex t = (perm_operator_matrix(perms[a], d).adjoint() * perm_operator_matrix(perms[b], d)).trace();
          CHECK(g(a, b) == t.real());
        }
      }
    }
  }
  CHECK(numerical_rank(gram_matrix(3, 2)) == 5);
  CHECK(numerical_rank(gram_matrix(4, 2)) == 14);
  for (int k = 1; k <= 4; ++k) {
    for (int d = 1; d <= 4; ++d) {
      const int full = static_cast<int>(enumerate_sk(k).size());
      CHECK((numerical_rank(gram_matrix(k, d)) == full) == (k <= d));
    }
  }
}

TEST_CASE("antisymmetrizer vanishes when k > d") {
  for (auto [k, d] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{4, 3}, std::pair{4, 2}}) {
    const std::int64_t dim = ipow(d, k);
    CMat s = CMat::Zero(dim, dim);
    for (const auto& p : enumerate_sk(k)) s += static_cast<double>(p.sign()) * perm_operator_matrix(p, d);
    CHECK(s.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cyclic permutation trick") {
  RandomStream rng(13, 0);
  for (int k : {2, 3}) {
    for (int d : {2, 3}) {
      std::vector<CMat> as;
      CMat prod = CMat::Identity(d, d), tensor = CMat::Identity(1, 1);
      for (int i = 0; i < k; ++i) {
        as.push_back(random_matrix(d, d, rng));
        prod = prod * as.back();
        tensor = kron(tensor, as.back());
      }
      const CMat vc = perm_operator_matrix(Permutation::cyclic_shift(k), d);
      CHECK(std::abs((tensor * vc).trace() - prod.trace()) < 1e-11);
      // Generalized partial version: tracing out all but the first factor gives A_1...A_k.
      const CMat reduced = partial_trace(tensor * vc, SubsystemDims::uniform(d, k), {0});
      CHECK(max_abs_diff(reduced, prod) < 1e-11);
    }
  }
}
