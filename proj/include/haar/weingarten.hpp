#pragma once

#include <memory>
#include <span>
#include <vector>

#include "haar/linalg.hpp"
#include "haar/perm.hpp"

namespace haar {

// Gram systems above this k are too large to pseudo-invert densely.
inline constexpr int kMaxWeingartenK = 6;

// Relative singular-value cutoff used for the Gram pseudo-inverse.
inline constexpr double kPinvCutoff = 1e-10;

struct WeingartenTable {
  int k = 0;
  int d = 0;
  std::vector<Permutation> perms;  // enumerate_sk(k) order
  std::vector<double> coefficients;  // Wg(perms[i], d)
  RMat pinv;                         // G^+, with (G^+)[pi][sigma] = Wg(pi^-1 sigma)
  int gram_rank = 0;

  double operator()(const Permutation& p) const;
  std::size_t index_of(const Permutation& p) const;
};

// Cached per (k, d); the returned table is immutable.
std::shared_ptr<const WeingartenTable> weingarten_table(int k, int d);

struct MomentCoefficients {
  int k = 0;
  int d = 0;
  std::vector<Permutation> perms;
  std::vector<Complex> c;
  double residual = 0.0;  // ||G c - t||_inf
};

MomentCoefficients moment_coefficients(const CMat& o, int k, int d);

// E[U^{(x)k} O U^dagger{(x)k}] as sum_pi c_pi V(pi).
CMat moment_apply_exact(const CMat& o, int k, int d);
CMat combine_permutations(const MomentCoefficients& mc);

CMat first_moment_closed_form(const CMat& o, int d);

struct SecondMomentCoefficients {
  Complex c_identity;
  Complex c_flip;
};
SecondMomentCoefficients second_moment_coefficients(const CMat& o, int d);
CMat second_moment_closed_form(const CMat& o, int d);

// E[U^{(x)k} (x) conj(U)^{(x)k}] with factor order (U..U, U*..U*).
CMat vectorized_moment_operator(int k, int d);

// E[U_{l1 i1} ... U_{lk ik} U*_{m1 j1} ... U*_{mk' jk'}]; zero when k != k'.
Complex entry_moment(std::span<const int> row_indices, std::span<const int> col_indices,
                     std::span<const int> conj_row_indices, std::span<const int> conj_col_indices,
                     int d);

}  // namespace haar
