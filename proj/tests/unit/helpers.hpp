#pragma once

#include <cmath>

#include "haar/haar.hpp"

namespace haar::testing {

inline CMat random_matrix(int rows, int cols, RandomStream& rng) {
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
  return m;
}

inline CMat random_hermitian(int d, RandomStream& rng) {
  const CMat a = random_matrix(d, d, rng);
  return (a + a.adjoint()) / 2.0;
}

inline CMat random_density(int d, RandomStream& rng) {
  const CMat a = random_matrix(d, d, rng);
  CMat r = a * a.adjoint();
  return r / r.trace();
}

inline CMat ket(int d, int i) {
  CMat v = CMat::Zero(d, 1);
  v(i, 0) = 1.0;
  return v;
}

inline CMat projector(int d, int i) { return ket(d, i) * ket(d, i).adjoint(); }

inline double chi_square(const std::vector<double>& counts, double expected_each) {
  double c = 0;
  for (double x : counts) c += (x - expected_each) * (x - expected_each) / expected_each;
  return c;
}

// Upper 0.001 quantiles of the chi-square distribution for the degrees of freedom used here.
inline double chi2_crit_001(int dof) {
  switch (dof) {
    case 1: return 10.828;
    case 3: return 16.266;
    case 23: return 49.728;
    case 29: return 58.301;
    default: return 1e300;
  }
}

// U^{(x)k} X U^dagger{(x)k}, applying U one tensor slot at a time.
inline CMat conjugate_by_tensor_power(const CMat& u, const CMat& x, int k) {
  const std::int64_t d = u.rows();
  const std::int64_t dim = x.rows();
  CMat cur = x;
  for (int s = 0; s < k; ++s) {
    std::int64_t inner = 1;
    for (int t = s + 1; t < k; ++t) inner *= d;
    const std::int64_t outer = dim / (inner * d);
    // Rows: (a, i, b) -> sum_j U[i][j] (a, j, b).
    CMat left = CMat::Zero(dim, dim);
    for (std::int64_t a = 0; a < outer; ++a) {
      for (std::int64_t i = 0; i < d; ++i) {
        for (std::int64_t j = 0; j < d; ++j) {
          const Complex w = u(i, j);
          for (std::int64_t b = 0; b < inner; ++b) {
            left.row((a * d + i) * inner + b) += w * cur.row((a * d + j) * inner + b);
          }
        }
      }
    }
    // Columns: (a, i, b) -> sum_j conj(U[i][j]) (a, j, b).
    CMat right = CMat::Zero(dim, dim);
    for (std::int64_t a = 0; a < outer; ++a) {
      for (std::int64_t i = 0; i < d; ++i) {
        for (std::int64_t j = 0; j < d; ++j) {
          const Complex w = std::conj(u(i, j));
          for (std::int64_t b = 0; b < inner; ++b) {
            right.col((a * d + i) * inner + b) += w * left.col((a * d + j) * inner + b);
          }
        }
      }
    }
    cur = std::move(right);
  }
  return cur;
}

}  // namespace haar::testing
