#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace haar {

using Complex = std::complex<double>;

// Dense complex matrix, row-major so that the flat storage of A is exactly vec(A).
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Largest dense matrix side we are willing to materialize.
inline constexpr std::int64_t kDenseCap = 4096;

struct SubsystemDims {
  std::vector<int> dims;

  std::int64_t total() const;
  static SubsystemDims uniform(int d, int k);
};

// Integer power d^k; throws ResourceError past 2^62.
std::int64_t ipow(std::int64_t d, int k);

CMat identity(std::int64_t d);
CMat kron(const CMat& a, const CMat& b);
CMat kron_power(const CMat& a, int k);

// Trace out every subsystem not listed in `keep` (0-based, any order; output keeps
// the original factor order).
CMat partial_trace(const CMat& a, const SubsystemDims& dims, std::span<const int> keep);
CMat partial_trace(const CMat& a, const SubsystemDims& dims, std::initializer_list<int> keep);

// Transpose of one tensor factor.
CMat partial_transpose(const CMat& a, const SubsystemDims& dims, int subsystem);

// vec(|i><j|) = |i> (x) |j>; result is a (rows*cols) x 1 column.
CMat vec(const CMat& a);
CMat unvec(const CMat& v, std::int64_t rows, std::int64_t cols);

// <<A|B>> = Tr(A^dagger B)
Complex hs_inner(const CMat& a, const CMat& b);

std::vector<double> singular_values(const CMat& a);

// p in [1, inf]; pass std::numeric_limits<double>::infinity() for the operator norm.
double schatten_norm(const CMat& a, double p);
double operator_norm(const CMat& a);
double frobenius_norm(const CMat& a);

CMat flip(int d);
CMat identity2(int d);

// Eigenvalues of the Hermitian part, ascending.
std::vector<double> hermitian_eigenvalues(const CMat& a);

bool is_square(const CMat& a);
bool is_hermitian(const CMat& a, double tol = 1e-10);
bool is_unitary(const CMat& a, double tol = 1e-10);
bool is_density(const CMat& a, double tol = 1e-10);

// Largest absolute entrywise difference.
double max_abs_diff(const CMat& a, const CMat& b);

CMat dagger(const CMat& a);

}  // namespace haar
