#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haar/linalg.hpp"

namespace haar {

inline constexpr int kMaxPermK = 8;

// Element of S_k in one-line notation: pi(i) = mapping[i], 0-based.
class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(int k);
  static Permutation transposition(int k, int a, int b);
  // i -> i-1 mod k, the cyclic shift with V(pi) = sum |i2..ik i1><i1..ik|.
  static Permutation cyclic_shift(int k);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int i) const { return map_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& mapping() const { return map_; }

  Permutation inverse() const;
  int sign() const;
  int cycle_count() const;
  // Sorted (descending) cycle lengths.
  std::vector<int> cycle_type() const;
  bool is_identity() const;

  std::string to_string() const;  // "[0,2,1]"

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

// (a*b)(i) = a(b(i)); with this order V(a)V(b) = V(a*b).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& a);
int sign(const Permutation& a);
int cycle_count(const Permutation& a);

// All k! permutations in lexicographic one-line order, identity first.
std::vector<Permutation> enumerate_sk(int k);

// V_d(pi) on (C^d)^{(x)k}, stored as an index map: V|in> = |image[in]>.
class PermOperator {
 public:
  PermOperator(Permutation perm, int local_dim);

  const Permutation& perm() const { return perm_; }
  int local_dim() const { return d_; }
  std::int64_t dim() const { return static_cast<std::int64_t>(image_.size()); }
  const std::vector<std::int64_t>& image() const { return image_; }

  CMat apply(const CMat& column) const;
  // Tr(V^dagger O) in O(d^k).
  Complex trace_against(const CMat& o) const;
  CMat dense() const;

 private:
  Permutation perm_;
  int d_;
  std::vector<std::int64_t> image_;
};

CMat perm_operator_matrix(const PermOperator& p);
CMat perm_operator_matrix(const Permutation& p, int d);

// G[pi][sigma] = d^{#cycles(pi^-1 sigma)}, rows/cols in enumerate_sk order.
RMat gram_matrix(int k, int d);

// Number of eigenvalues above rel_tol * largest for a real symmetric matrix.
int numerical_rank(const RMat& sym, double rel_tol = 1e-10);

}  // namespace haar
