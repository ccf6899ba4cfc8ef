#include "haar/subspaces.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "haar/errors.hpp"
#include "haar/perm.hpp"

namespace haar {

std::int64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    // out * (n - r + i) is divisible by i at every step.
    const std::int64_t num = n - r + i;
    if (out > (std::int64_t{1} << 62) / num) throw ResourceError("binomial overflow");
    out = out * num / i;
  }
  return out;
}

std::int64_t sym_dim(int d, int k) {
  if (d < 1 || k < 0) throw DomainError("sym_dim: need d >= 1, k >= 0");
  return binomial(k + d - 1, k);
}

std::int64_t asym_dim(int d, int k) {
  if (d < 1 || k < 0) throw DomainError("asym_dim: need d >= 1, k >= 0");
  return d >= k ? binomial(d, k) : 0;
}

namespace {

CMat build_projector(int d, int k, bool antisymmetric) {
  if (d < 1 || k < 1) throw DomainError("projector: need d >= 1, k >= 1");
  const std::int64_t dim = ipow(d, k);
  if (dim > kDenseCap) throw ResourceError("projector: d^k exceeds dense cap");
  const auto perms = enumerate_sk(k);
  CMat p = CMat::Zero(dim, dim);
  for (const auto& pi : perms) {
    const double w = antisymmetric ? pi.sign() : 1.0;
    const PermOperator op(pi, d);
    const auto& image = op.image();
    for (std::int64_t in = 0; in < dim; ++in) p(image[in], in) += w;
  }
  return p / static_cast<double>(perms.size());
}

const CMat& cached_projector(int d, int k, bool antisymmetric) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, bool>, std::unique_ptr<const CMat>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, k, antisymmetric}];
  if (!slot) slot = std::make_unique<const CMat>(build_projector(d, k, antisymmetric));
  return *slot;
}

}  // namespace

const CMat& p_sym(int d, int k) { return cached_projector(d, k, false); }
const CMat& p_asym(int d, int k) { return cached_projector(d, k, true); }

CMat haar_state_moment(int d, int k) {
  return p_sym(d, k) / static_cast<double>(sym_dim(d, k));
}

}  // namespace haar
