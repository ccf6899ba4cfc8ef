#include "haar/designs.hpp"

#include <cmath>

#include "haar/errors.hpp"
#include "haar/perm.hpp"
#include "haar/subspaces.hpp"
#include "haar/weingarten.hpp"

namespace haar {

namespace {

constexpr std::int64_t kChoiCap = 1024;

double ipow_real(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

CMat moment_power(const CMat& m, int power) {
  CMat out = m;
  for (int i = 1; i < power; ++i) out = out * m;
  return out;
}

void check_vectorized_cap(int d, int k) {
  const std::int64_t dk = ipow(d, k);
  if (dk * dk > kDenseCap) throw ResourceError("d^{2k} exceeds the dense cap");
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "mc"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Exact: return "exact";
    case Verdict::Approximate: return "approximate";
    case Verdict::NotADesign: return "not-a-design";
  }
  return "unknown";
}

double frame_potential_exact(const FiniteUniform& e, int k) {
  if (k < 1) throw DomainError("frame potential: k must be >= 1");
  const std::size_t n = e.members.size();
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = std::norm(hs_inner(e.members[j], e.members[i]));
      row[i] += e.weights[j] * ipow_real(t, k);
    }
  }
  double f = 0;
  for (std::size_t i = 0; i < n; ++i) f += e.weights[i] * row[i];
  return f;
}

MeanSE frame_potential_mc(const UnitaryEnsemble& e, int k, std::size_t pairs, std::uint64_t seed, int threads) {
  if (pairs < 2) throw DomainError("frame_potential_mc: need at least 2 pairs");
  if (k < 1) throw DomainError("frame potential: k must be >= 1");
  const auto xs = parallel_samples(pairs, threads, [&](std::size_t i) {
    RandomStream ru(seed, 2 * i), rv(seed, 2 * i + 1);
    const CMat u = sample_from(e, ru);
    const CMat v = sample_from(e, rv);
    return ipow_real(std::norm(hs_inner(v, u)), k);
  });
  return mean_se(xs);
}

std::int64_t haar_frame_potential(int k, int d) {
  if (k < 1 || d < 1) throw DomainError("haar_frame_potential: need k, d >= 1");
  return weingarten_table(k, d)->gram_rank;
}

bool has_exact_moments(const UnitaryEnsemble& e) {
  const auto& v = e.variant();
  if (std::holds_alternative<HaarEnsemble>(v) || std::holds_alternative<FiniteUniform>(v) ||
      std::holds_alternative<PauliBasisEnsemble>(v)) {
    return true;
  }
  if (auto* c = std::get_if<CliffordEnsemble>(&v)) return c->n == 1;
  if (auto* p = std::get_if<ProductPower>(&v)) return has_exact_moments(*p->inner);
  return false;
}

CMat ensemble_moment_operator(const FiniteUniform& e, int k) {
  check_vectorized_cap(e.dim(), k);
  const std::int64_t dk = ipow(e.dim(), k);
  CMat m = CMat::Zero(dk * dk, dk * dk);
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    const CMat uk = kron_power(e.members[i], k);
    m += e.weights[i] * kron(uk, uk.conjugate());
  }
  return m;
}

CMat ensemble_moment_operator(const UnitaryEnsemble& e, int k) {
  check_vectorized_cap(e.dim(), k);
  if (auto* h = std::get_if<HaarEnsemble>(&e.variant())) return vectorized_moment_operator(k, h->d);
  if (auto* p = std::get_if<ProductPower>(&e.variant())) {
    return moment_power(ensemble_moment_operator(*p->inner, k), p->power);
  }
  const auto members = enumerate_members(e);
  if (!members) throw DomainError("no exact moment operator for " + e.name() + "; use Monte Carlo");
  return ensemble_moment_operator(*members, k);
}

CMat ensemble_moment_operator_mc(const UnitaryEnsemble& e, int k, std::size_t samples, std::uint64_t seed,
                                 int threads) {
  check_vectorized_cap(e.dim(), k);
  const std::int64_t dk = ipow(e.dim(), k);
  const auto stats = parallel_matrix_mean(samples, threads, dk * dk, dk * dk, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat uk = kron_power(sample_from(e, rng), k);
    return CMat(kron(uk, uk.conjugate()));
  });
  return stats.mean;
}

double tpe_norm(const UnitaryEnsemble& e, int k) {
  const CMat m = ensemble_moment_operator(e, k);
  return operator_norm(m - vectorized_moment_operator(k, e.dim()));
}

double tpe_norm_mc(const UnitaryEnsemble& e, int k, std::size_t samples, std::uint64_t seed, int threads) {
  const CMat m = ensemble_moment_operator_mc(e, k, samples, seed, threads);
  return operator_norm(m - vectorized_moment_operator(k, e.dim()));
}

UnitaryEnsemble amplify(const UnitaryEnsemble& e, int power) {
  if (power < 1) throw DomainError("amplify: P must be >= 1");
  return UnitaryEnsemble(ProductPower{std::make_shared<const UnitaryEnsemble>(e), power});
}

std::map<std::string, double> bound_conversions(const DesignReport& r) {
  std::map<std::string, double> out;
  const double dk = ipow_real(r.d, r.k);
  out["tpe_upper_from_frame"] = r.l2_deviation;
  out["diamond_upper_from_frame"] = dk * r.l2_deviation;
  double diamond = dk * r.l2_deviation;
  if (r.tpe_norm) {
    out["diamond_upper"] = dk * *r.tpe_norm;
    out["frame_upper_from_tpe"] = dk * *r.tpe_norm;
    diamond = std::min(diamond, dk * *r.tpe_norm);
  }
  out["tpe_upper_from_diamond"] = std::sqrt(dk) * diamond;
  out["frame_upper_from_diamond"] = dk * std::sqrt(dk) * diamond;
  return out;
}

DesignReport certify_design(const UnitaryEnsemble& e, int k, const CertifyParams& params) {
  DesignReport r;
  r.k = k;
  r.d = e.dim();
  r.mode = params.mode;
  r.haar_frame_potential = static_cast<double>(haar_frame_potential(k, r.d));

  if (params.mode == Mode::Exact) {
    if (!has_exact_moments(e)) throw DomainError("exact certification unavailable for " + e.name());
    if (auto members = enumerate_members(e)) {
      r.frame_potential = frame_potential_exact(*members, k);
    } else if (std::holds_alternative<HaarEnsemble>(e.variant())) {
      r.frame_potential = r.haar_frame_potential;
    } else {
      // F = ||M_nu||_2^2; used for product powers, where pairs are not enumerable.
      const double n2 = frobenius_norm(ensemble_moment_operator(e, k));
      r.frame_potential = n2 * n2;
    }
    r.tolerance = params.tolerance.value_or(1e-8);
    const std::int64_t dk = ipow(r.d, k);
    if (params.with_tpe && dk * dk <= kDenseCap) r.tpe_norm = tpe_norm(e, k);
  } else {
    const MeanSE est = frame_potential_mc(e, k, params.samples, params.seed, params.threads);
    r.frame_potential = est.mean;
    r.frame_potential_se = est.se;
    r.samples = params.samples;
    r.tolerance = params.tolerance.value_or(3.0) * est.se;
  }

  r.l2_deviation = std::sqrt(std::max(r.frame_potential - r.haar_frame_potential, 0.0));
  if (std::abs(r.frame_potential - r.haar_frame_potential) <= r.tolerance) {
    r.verdict = Verdict::Exact;
  } else {
    // An eps-approximate TPE design is only meaningful (and amplifiable) for eps < 1.
    const double eps = r.tpe_norm.value_or(r.l2_deviation);
    r.verdict = eps < 1.0 - 1e-9 ? Verdict::Approximate : Verdict::NotADesign;
  }
  r.derived_bounds = bound_conversions(r);
  return r;
}

CMat choi_from_superoperator(const CMat& s, std::int64_t dim) {
  if (s.rows() != dim * dim || s.cols() != dim * dim) throw DimensionError("choi: superoperator shape");
  CMat c(dim * dim, dim * dim);
  for (std::int64_t a = 0; a < dim; ++a) {
    for (std::int64_t b = 0; b < dim; ++b) {
      for (std::int64_t i = 0; i < dim; ++i) {
        for (std::int64_t j = 0; j < dim; ++j) c(a * dim + i, b * dim + j) = s(a * dim + b, i * dim + j);
      }
    }
  }
  return c;
}

bool relative_error_check(const FiniteUniform& e, int k, double eps) {
  if (eps < 0) throw DomainError("relative_error_check: eps must be >= 0");
  const std::int64_t dk = ipow(e.dim(), k);
  if (dk * dk > kChoiCap) throw ResourceError("relative_error_check: d^{2k} exceeds 1024");
  const CMat cn = choi_from_superoperator(ensemble_moment_operator(e, k), dk);
  const CMat ch = choi_from_superoperator(vectorized_moment_operator(k, e.dim()), dk);
  const double lower = hermitian_eigenvalues(ch - (1.0 - eps) * cn).front();
  const double upper = hermitian_eigenvalues((1.0 + eps) * cn - ch).front();
  return lower >= -1e-9 && upper >= -1e-9;
}

double design_cardinality_lower_bound(int k, int d) {
  if (k < 1 || d < 1) throw DomainError("cardinality bound: need k, d >= 1");
  double fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return ipow_real(d, 2 * k) / fact;
}

FiniteStates::FiniteStates(std::vector<CMat> s, std::vector<double> w) : states(std::move(s)), weights(std::move(w)) {
  if (states.empty()) throw DomainError("FiniteStates: no states");
  for (const auto& psi : states) {
    if (psi.cols() != 1 || psi.rows() != states.front().rows()) throw DimensionError("FiniteStates: shape");
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("FiniteStates: state not normalized");
  }
  if (weights.empty()) weights.assign(states.size(), 1.0 / static_cast<double>(states.size()));
  if (weights.size() != states.size()) throw DimensionError("FiniteStates: weight count mismatch");
}

int FiniteStates::dim() const { return static_cast<int>(states.front().rows()); }

FiniteStates induced_states(const FiniteUniform& e, const CMat& ref) {
  std::vector<CMat> s;
  s.reserve(e.members.size());
  for (const auto& u : e.members) s.push_back(u * ref);
  return FiniteStates(std::move(s), e.weights);
}

StateFrameReport state_frame_potential(const StateEnsemble& e, int k, Mode mode, std::size_t pairs,
                                       std::uint64_t seed, int threads, double tol) {
  if (k < 1) throw DomainError("state frame potential: k must be >= 1");
  StateFrameReport r;
  r.k = k;
  r.mode = mode;
  r.d = std::holds_alternative<HaarStates>(e) ? std::get<HaarStates>(e).d : std::get<FiniteStates>(e).dim();
  r.haar_value = 1.0 / static_cast<double>(sym_dim(r.d, k));

  auto overlap = [k](const CMat& a, const CMat& b) { return ipow_real(std::norm(hs_inner(a, b)), k); };

  if (mode == Mode::Exact) {
    if (std::holds_alternative<HaarStates>(e)) {
      r.frame_potential = r.haar_value;
    } else {
      const auto& f = std::get<FiniteStates>(e);
      double acc = 0;
      for (std::size_t i = 0; i < f.states.size(); ++i) {
        double row = 0;
        for (std::size_t j = 0; j < f.states.size(); ++j) row += f.weights[j] * overlap(f.states[i], f.states[j]);
        acc += f.weights[i] * row;
      }
      r.frame_potential = acc;
    }
    r.is_design = std::abs(r.frame_potential - r.haar_value) <= tol;
    return r;
  }

  if (pairs < 2) throw DomainError("state frame potential (mc): need at least 2 pairs");
  auto draw = [&](RandomStream& rng) -> CMat {
    if (auto* h = std::get_if<HaarStates>(&e)) return sample_haar_state(h->d, rng);
    const auto& f = std::get<FiniteStates>(e);
    const double u = rng.uniform();
    double acc = 0;
    for (std::size_t i = 0; i < f.weights.size(); ++i) {
      acc += f.weights[i];
      if (u < acc) return f.states[i];
    }
    return f.states.back();
  };
  const auto xs = parallel_samples(pairs, threads, [&](std::size_t i) {
    RandomStream ra(seed, 2 * i), rb(seed, 2 * i + 1);
    return overlap(draw(ra), draw(rb));
  });
  const MeanSE m = mean_se(xs);
  r.frame_potential = m.mean;
  r.se = m.se;
  r.is_design = std::abs(m.mean - r.haar_value) <= 3.0 * m.se + 1e-12;
  return r;
}

}  // namespace haar
