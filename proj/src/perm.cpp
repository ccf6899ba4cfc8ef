#include "haar/perm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "haar/errors.hpp"

namespace haar {

namespace {

constexpr std::int64_t kIndexMapCap = 65536;

void require_same_size(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw DomainError("permutations act on different k");
}

}  // namespace

Permutation::Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
  const int k = size();
  if (k < 1) throw DomainError("permutation must have k >= 1");
  std::vector<bool> seen(k, false);
  for (int v : map_) {
    if (v < 0 || v >= k || seen[v]) throw DomainError("mapping is not a bijection on [k]");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int k) {
  std::vector<int> m(static_cast<std::size_t>(std::max(k, 0)));
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::transposition(int k, int a, int b) {
  auto m = identity(k).map_;
  if (a < 0 || b < 0 || a >= k || b >= k) throw DomainError("transposition index out of range");
  std::swap(m[a], m[b]);
  return Permutation(std::move(m));
}

Permutation Permutation::cyclic_shift(int k) {
  std::vector<int> m(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) m[i] = (i + k - 1) % k;
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (int i = 0; i < size(); ++i) inv[map_[i]] = i;
  return Permutation(std::move(inv));
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<bool> seen(map_.size(), false);
  std::vector<int> lengths;
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = map_[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

int Permutation::cycle_count() const { return static_cast<int>(cycle_type().size()); }

int Permutation::sign() const { return ((size() - cycle_count()) % 2 == 0) ? 1 : -1; }

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i) {
    if (map_[i] != i) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < size(); ++i) os << (i ? "," : "") << map_[i];
  os << ']';
  return os.str();
}

Permutation compose(const Permutation& a, const Permutation& b) {
  require_same_size(a, b);
  std::vector<int> m(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) m[i] = a(b(i));
  return Permutation(std::move(m));
}

Permutation inverse(const Permutation& a) { return a.inverse(); }
int sign(const Permutation& a) { return a.sign(); }
int cycle_count(const Permutation& a) { return a.cycle_count(); }

std::vector<Permutation> enumerate_sk(int k) {
  if (k < 1) throw DomainError("enumerate_sk: k must be >= 1");
  if (k > kMaxPermK) throw ResourceError("enumerate_sk: k exceeds cap of 8");
  std::vector<int> m(static_cast<std::size_t>(k));
  std::iota(m.begin(), m.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

PermOperator::PermOperator(Permutation perm, int local_dim) : perm_(std::move(perm)), d_(local_dim) {
  if (d_ < 1) throw DomainError("PermOperator: d must be >= 1");
  const int k = perm_.size();
  const std::int64_t total = ipow(d_, k);
  if (total > kIndexMapCap) throw ResourceError("PermOperator: d^k exceeds 65536");

  // Slot weights: slot 0 is the most significant digit.
  std::vector<std::int64_t> weight(k);
  std::int64_t w = 1;
  for (int s = k - 1; s >= 0; --s) {
    weight[s] = w;
    w *= d_;
  }
  image_.resize(static_cast<std::size_t>(total));
  std::vector<int> digit(k, 0);
  for (std::int64_t in = 0; in < total; ++in) {
    std::int64_t out = 0;
    for (int m = 0; m < k; ++m) out += digit[m] * weight[perm_(m)];
    image_[in] = out;
    for (int s = k - 1; s >= 0; --s) {
      if (++digit[s] < d_) break;
      digit[s] = 0;
    }
  }
}

CMat PermOperator::apply(const CMat& column) const {
  if (column.rows() != dim()) throw DimensionError("PermOperator::apply: length mismatch");
  CMat out(column.rows(), column.cols());
  for (std::int64_t in = 0; in < dim(); ++in) out.row(image_[in]) = column.row(in);
  return out;
}

Complex PermOperator::trace_against(const CMat& o) const {
  if (o.rows() != dim() || o.cols() != dim()) throw DimensionError("trace_against: shape mismatch");
  Complex s = 0;
  for (std::int64_t in = 0; in < dim(); ++in) s += o(image_[in], in);
  return s;
}

CMat PermOperator::dense() const {
  if (dim() > kDenseCap) throw ResourceError("PermOperator::dense: d^k exceeds dense cap");
  CMat m = CMat::Zero(dim(), dim());
  for (std::int64_t in = 0; in < dim(); ++in) m(image_[in], in) = 1.0;
  return m;
}

CMat perm_operator_matrix(const PermOperator& p) { return p.dense(); }

CMat perm_operator_matrix(const Permutation& p, int d) { return PermOperator(p, d).dense(); }

RMat gram_matrix(int k, int d) {
  if (d < 1) throw DomainError("gram_matrix: d must be >= 1");
  const auto perms = enumerate_sk(k);
  const auto n = static_cast<Eigen::Index>(perms.size());
  RMat g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Permutation ainv = perms[a].inverse();
    for (Eigen::Index b = 0; b < n; ++b) {
      g(a, b) = static_cast<double>(ipow(d, compose(ainv, perms[b]).cycle_count()));
    }
  }
  return g;
}

int numerical_rank(const RMat& sym, double rel_tol) {
  Eigen::MatrixXd m = sym;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > rel_tol * top) ++r;
  }
  return r;
}

}  // namespace haar
