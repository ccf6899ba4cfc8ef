#include "haar/weingarten.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "haar/errors.hpp"

namespace haar {

double WeingartenTable::operator()(const Permutation& p) const { return coefficients[index_of(p)]; }

std::size_t WeingartenTable::index_of(const Permutation& p) const {
  auto it = std::lower_bound(perms.begin(), perms.end(), p);
  if (it == perms.end() || !(*it == p)) throw DomainError("permutation not in S_k of this table");
  return static_cast<std::size_t>(it - perms.begin());
}

namespace {

std::shared_ptr<const WeingartenTable> build_table(int k, int d) {
  auto t = std::make_shared<WeingartenTable>();
  t->k = k;
  t->d = d;
  t->perms = enumerate_sk(k);

  const RMat g = gram_matrix(k, d);
  Eigen::MatrixXd gm = g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm);
  const auto& ev = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const double cut = kPinvCutoff * ev.cwiseAbs().maxCoeff();

  Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(g.rows(), g.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cut) {
      pinv += (vecs.col(i) * vecs.col(i).transpose()) / ev[i];
      ++rank;
    }
  }
  t->pinv = pinv;
  t->gram_rank = rank;
  // Identity is first in lexicographic order, so row 0 holds Wg(e^-1 sigma).
  t->coefficients.resize(static_cast<std::size_t>(pinv.cols()));
  for (Eigen::Index j = 0; j < pinv.cols(); ++j) t->coefficients[j] = pinv(0, j);
  return t;
}

}  // namespace

std::shared_ptr<const WeingartenTable> weingarten_table(int k, int d) {
  if (k < 1) throw DomainError("weingarten_table: k must be >= 1");
  if (d < 1) throw DomainError("weingarten_table: d must be >= 1");
  if (k > kMaxWeingartenK) throw ResourceError("weingarten_table: k exceeds cap of 6");

  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const WeingartenTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{k, d}];
  if (!slot) slot = build_table(k, d);
  return slot;
}

MomentCoefficients moment_coefficients(const CMat& o, int k, int d) {
  const std::int64_t dim = ipow(d, k);
  if (o.rows() != dim || o.cols() != dim) throw DimensionError("moment_coefficients: O must be d^k x d^k");
  const auto table = weingarten_table(k, d);
  const auto n = static_cast<Eigen::Index>(table->perms.size());

  Eigen::VectorXcd t(n);
  for (Eigen::Index s = 0; s < n; ++s) t[s] = PermOperator(table->perms[s], d).trace_against(o);

  const Eigen::MatrixXcd pinv = table->pinv.cast<Complex>();
  const Eigen::VectorXcd c = pinv * t;
  const Eigen::MatrixXcd g = gram_matrix(k, d).cast<Complex>();

  MomentCoefficients mc;
  mc.k = k;
  mc.d = d;
  mc.perms = table->perms;
  mc.c.assign(c.data(), c.data() + c.size());
  mc.residual = (g * c - t).cwiseAbs().maxCoeff();
  return mc;
}

CMat combine_permutations(const MomentCoefficients& mc) {
  const std::int64_t dim = ipow(mc.d, mc.k);
  if (dim > kDenseCap) throw ResourceError("dense moment exceeds cap");
  CMat out = CMat::Zero(dim, dim);
  for (std::size_t p = 0; p < mc.perms.size(); ++p) {
    const PermOperator v(mc.perms[p], mc.d);
    const auto& image = v.image();
    for (std::int64_t in = 0; in < dim; ++in) out(image[in], in) += mc.c[p];
  }
  return out;
}

CMat moment_apply_exact(const CMat& o, int k, int d) { return combine_permutations(moment_coefficients(o, k, d)); }

CMat first_moment_closed_form(const CMat& o, int d) {
  if (o.rows() != d || o.cols() != d) throw DimensionError("first moment: O must be d x d");
  return (o.trace() / static_cast<double>(d)) * CMat::Identity(d, d);
}

SecondMomentCoefficients second_moment_coefficients(const CMat& o, int d) {
  if (d < 2) throw DomainError("second moment closed form needs d >= 2");
  if (o.rows() != d * d || o.cols() != d * d) throw DimensionError("second moment: O must be d^2 x d^2");
  const Complex tr = o.trace();
  const Complex trf = PermOperator(Permutation::transposition(2, 0, 1), d).trace_against(o);
  const double dd = d;
  return {(tr - trf / dd) / (dd * dd - 1.0), (trf - tr / dd) / (dd * dd - 1.0)};
}

CMat second_moment_closed_form(const CMat& o, int d) {
  const auto c = second_moment_coefficients(o, d);
  return c.c_identity * identity2(d) + c.c_flip * flip(d);
}

CMat vectorized_moment_operator(int k, int d) {
  const std::int64_t dk = ipow(d, k);
  if (dk * dk > kDenseCap) throw ResourceError("vectorized moment operator: d^{2k} exceeds cap");
  const auto table = weingarten_table(k, d);
  const auto n = table->perms.size();

  std::vector<std::vector<std::int64_t>> images;
  images.reserve(n);
  for (const auto& p : table->perms) images.push_back(PermOperator(p, d).image());

  // |V_pi>> has ones at positions image[in] * d^k + in.
  CMat m = CMat::Zero(dk * dk, dk * dk);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double w = table->pinv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (w == 0.0) continue;
      for (std::int64_t r = 0; r < dk; ++r) {
        const std::int64_t row = images[a][r] * dk + r;
        for (std::int64_t c = 0; c < dk; ++c) m(row, images[b][c] * dk + c) += w;
      }
    }
  }
  return m;
}

Complex entry_moment(std::span<const int> row_indices, std::span<const int> col_indices,
                     std::span<const int> conj_row_indices, std::span<const int> conj_col_indices,
                     int d) {
  if (row_indices.size() != col_indices.size() || conj_row_indices.size() != conj_col_indices.size()) {
    throw DimensionError("entry_moment: each factor needs a row and a column index");
  }
  auto check = [d](std::span<const int> xs) {
    for (int x : xs) {
      if (x < 0 || x >= d) throw DimensionError("entry_moment: index out of range");
    }
  };
  check(row_indices);
  check(col_indices);
  check(conj_row_indices);
  check(conj_col_indices);
  if (row_indices.size() != conj_row_indices.size()) return 0.0;
  const int k = static_cast<int>(row_indices.size());
  if (k == 0) return 1.0;

  const auto table = weingarten_table(k, d);
  // pi contributes when l_{pi(b)} = m_b for every b.
  auto matches = [k](const Permutation& p, std::span<const int> l, std::span<const int> m) {
    for (int b = 0; b < k; ++b) {
      if (l[p(b)] != m[b]) return false;
    }
    return true;
  };
  double s = 0.0;
  for (std::size_t a = 0; a < table->perms.size(); ++a) {
    if (!matches(table->perms[a], row_indices, conj_row_indices)) continue;
    for (std::size_t b = 0; b < table->perms.size(); ++b) {
      if (!matches(table->perms[b], col_indices, conj_col_indices)) continue;
      s += table->pinv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return s;
}

}  // namespace haar
