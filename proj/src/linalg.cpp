#include "haar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "haar/errors.hpp"

namespace haar {

std::int64_t SubsystemDims::total() const {
  std::int64_t t = 1;
  for (int d : dims) t *= d;
  return t;
}

SubsystemDims SubsystemDims::uniform(int d, int k) {
  return SubsystemDims{std::vector<int>(static_cast<std::size_t>(k), d)};
}

std::int64_t ipow(std::int64_t d, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (d != 0 && r > (std::int64_t{1} << 62) / d) throw ResourceError("integer power overflow");
    r *= d;
  }
  return r;
}

CMat identity(std::int64_t d) { return CMat::Identity(d, d); }

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat kron_power(const CMat& a, int k) {
  if (k < 0) throw DomainError("kron_power: negative exponent");
  if (ipow(a.rows(), k) > kDenseCap * 16 || ipow(a.cols(), k) > kDenseCap * 16) {
    throw ResourceError("kron_power: result too large");
  }
  CMat out = CMat::Identity(1, 1);
  for (int i = 0; i < k; ++i) out = kron(out, a);
  return out;
}

namespace {

void check_square_dims(const CMat& a, const SubsystemDims& dims, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": matrix not square");
  for (int d : dims.dims) {
    if (d < 1) throw DimensionError(std::string(who) + ": non-positive local dimension");
  }
  if (dims.total() != a.rows()) {
    throw DimensionError(std::string(who) + ": subsystem dims do not match matrix size");
  }
}

}  // namespace

CMat partial_trace(const CMat& a, const SubsystemDims& dims, std::span<const int> keep) {
  check_square_dims(a, dims, "partial_trace");
  const int n = static_cast<int>(dims.dims.size());
  std::vector<bool> kept(n, false);
  for (int s : keep) {
    if (s < 0 || s >= n) throw DimensionError("partial_trace: subsystem index out of range");
    kept[s] = true;
  }

  std::int64_t dk = 1, dt = 1;
  for (int s = 0; s < n; ++s) (kept[s] ? dk : dt) *= dims.dims[s];

  // Split each full index into (kept index, traced index), both mixed-radix with
  // the original factor order.
  const std::int64_t total = dims.total();
  std::vector<std::int64_t> kidx(total), tidx(total);
  for (std::int64_t i = 0; i < total; ++i) {
    std::int64_t rem = i, kv = 0, tv = 0, kmul = 1, tmul = 1;
    for (int s = n - 1; s >= 0; --s) {
      const int digit = static_cast<int>(rem % dims.dims[s]);
      rem /= dims.dims[s];
      if (kept[s]) {
        kv += digit * kmul;
        kmul *= dims.dims[s];
      } else {
        tv += digit * tmul;
        tmul *= dims.dims[s];
      }
    }
    kidx[i] = kv;
    tidx[i] = tv;
  }

  std::vector<std::vector<std::int64_t>> by_trace(dt);
  for (std::int64_t i = 0; i < total; ++i) by_trace[tidx[i]].push_back(i);

  CMat out = CMat::Zero(dk, dk);
  for (const auto& group : by_trace) {
    for (std::int64_t r : group) {
      for (std::int64_t c : group) out(kidx[r], kidx[c]) += a(r, c);
    }
  }
  return out;
}

CMat partial_trace(const CMat& a, const SubsystemDims& dims, std::initializer_list<int> keep) {
  return partial_trace(a, dims, std::span<const int>(keep.begin(), keep.size()));
}

CMat partial_transpose(const CMat& a, const SubsystemDims& dims, int subsystem) {
  check_square_dims(a, dims, "partial_transpose");
  const int n = static_cast<int>(dims.dims.size());
  if (subsystem < 0 || subsystem >= n) {
    throw DimensionError("partial_transpose: subsystem index out of range");
  }
  std::int64_t stride = 1;
  for (int s = n - 1; s > subsystem; --s) stride *= dims.dims[s];
  const std::int64_t ds = dims.dims[subsystem];

  CMat out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const std::int64_t di = (i / stride) % ds;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const std::int64_t dj = (j / stride) % ds;
      out(i + (dj - di) * stride, j + (di - dj) * stride) = a(i, j);
    }
  }
  return out;
}

CMat vec(const CMat& a) {
  CMat v(a.size(), 1);
  std::copy(a.data(), a.data() + a.size(), v.data());
  return v;
}

CMat unvec(const CMat& v, std::int64_t rows, std::int64_t cols) {
  if (rows < 1 || cols < 1 || rows * cols != v.size()) {
    throw DimensionError("unvec: rows*cols does not match vector length");
  }
  CMat a(rows, cols);
  std::copy(v.data(), v.data() + v.size(), a.data());
  return a;
}

Complex hs_inner(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
  Complex s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

std::vector<double> singular_values(const CMat& a) {
  Eigen::MatrixXcd m = a;  // column-major copy for the decomposition
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double schatten_norm(const CMat& a, double p) {
  if (!(p >= 1.0)) throw DomainError("schatten_norm: p must be >= 1");
  const auto s = singular_values(a);
  if (s.empty()) return 0.0;
  if (std::isinf(p)) return *std::max_element(s.begin(), s.end());
  double acc = 0;
  for (double x : s) acc += std::pow(x, p);
  return std::pow(acc, 1.0 / p);
}

double operator_norm(const CMat& a) {
  return schatten_norm(a, std::numeric_limits<double>::infinity());
}

double frobenius_norm(const CMat& a) { return a.norm(); }

CMat flip(int d) {
  if (d < 1) throw DomainError("flip: d must be >= 1");
  CMat f = CMat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  }
  return f;
}

CMat identity2(int d) {
  if (d < 1) throw DomainError("identity2: d must be >= 1");
  return CMat::Identity(d * d, d * d);
}

std::vector<double> hermitian_eigenvalues(const CMat& a) {
  if (!is_square(a)) throw DimensionError("hermitian_eigenvalues: matrix not square");
  Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

bool is_square(const CMat& a) { return a.rows() == a.cols(); }

bool is_hermitian(const CMat& a, double tol) {
  return is_square(a) && max_abs_diff(a, a.adjoint()) <= tol;
}

bool is_unitary(const CMat& a, double tol) {
  if (!is_square(a)) return false;
  const CMat g = a.adjoint() * a;
  return operator_norm(g - CMat::Identity(a.rows(), a.cols())) <= tol;
}

bool is_density(const CMat& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  if (std::abs(a.trace() - Complex(1.0)) > tol) return false;
  const auto ev = hermitian_eigenvalues(a);
  return ev.front() >= -tol;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

CMat dagger(const CMat& a) { return a.adjoint(); }

}  // namespace haar
