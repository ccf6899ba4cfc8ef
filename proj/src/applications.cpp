#include "haar/applications.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "haar/ensembles.hpp"
#include "haar/errors.hpp"
#include "haar/perm.hpp"
#include "haar/subspaces.hpp"
#include "haar/weingarten.hpp"

namespace haar {

ChannelKraus::ChannelKraus(std::vector<CMat> kraus, double tol) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw DomainError("channel: empty Kraus set");
  d_ = static_cast<int>(kraus_.front().rows());
  CMat s = CMat::Zero(d_, d_);
  for (const auto& k : kraus_) {
    if (k.rows() != d_ || k.cols() != d_) throw DimensionError("channel: Kraus operators must be d x d");
    s += k.adjoint() * k;
  }
  if (max_abs_diff(s, CMat::Identity(d_, d_)) > tol) throw DomainError("channel: Kraus operators not trace preserving");
}

CMat ChannelKraus::apply(const CMat& rho) const {
  CMat out = CMat::Zero(d_, d_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

ChannelKraus ChannelKraus::identity(int d) { return ChannelKraus({CMat::Identity(d, d)}); }

ChannelKraus ChannelKraus::unitary(const CMat& u) { return ChannelKraus({u}); }

ChannelKraus ChannelKraus::fully_depolarizing(int d) {
  std::vector<CMat> ks;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CMat k = CMat::Zero(d, d);
      k(i, j) = 1.0 / std::sqrt(static_cast<double>(d));
      ks.push_back(k);
    }
  }
  return ChannelKraus(std::move(ks));
}

ChannelKraus ChannelKraus::random(int d, int kraus_rank, RandomStream& rng) {
  if (d < 1 || kraus_rank < 1) throw DomainError("random channel: need d, rank >= 1");
  const CMat w = sample_haar_unitary(d * kraus_rank, rng);
  // Isometry V = first d columns; K_i[a][b] = V[a * r + i][b].
  std::vector<CMat> ks(kraus_rank, CMat::Zero(d, d));
  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < kraus_rank; ++i) {
      for (int b = 0; b < d; ++b) ks[i](a, b) = w(a * kraus_rank + i, b);
    }
  }
  return ChannelKraus(std::move(ks));
}

double entanglement_fidelity(const ChannelKraus& ch) {
  double s = 0;
  for (const auto& k : ch.kraus()) s += std::norm(k.trace());
  const double d = ch.dim();
  return s / (d * d);
}

double twirl_depolarizing_parameter(const ChannelKraus& ch) {
  const double d = ch.dim();
  if (ch.dim() < 2) throw DomainError("twirl: d must be >= 2");
  return (d * d * entanglement_fidelity(ch) - 1.0) / (d * d - 1.0);
}

CMat twirl_channel_exact(const ChannelKraus& ch, const CMat& rho) {
  const int d = ch.dim();
  if (rho.rows() != d || rho.cols() != d) throw DimensionError("twirl: rho must be d x d");
  // U^dag K U rho U^dag K^dag U = Tr_2[(A (x) B)(rho (x) I) F] with A (x) B twirled as a pair.
  const SubsystemDims dims{{d, d}};
  const CMat rho_i = kron(rho, CMat::Identity(d, d));
  const CMat f = flip(d);
  CMat out = CMat::Zero(d, d);
  for (const auto& k : ch.kraus()) {
    const CMat m = second_moment_closed_form(kron(k, k.adjoint()), d);
    out += partial_trace(m * rho_i * f, dims, {0});
  }
  return out;
}

MatrixStats twirl_channel_mc(const ChannelKraus& ch, const CMat& rho, std::size_t samples, std::uint64_t seed,
                             int threads) {
  const int d = ch.dim();
  return parallel_matrix_mean(samples, threads, d, d, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat u = sample_haar_unitary(d, rng);
    return CMat(u.adjoint() * ch.apply(u * rho * u.adjoint()) * u);
  });
}

double average_gate_fidelity(const ChannelKraus& ch, const CMat& target) {
  const int d = ch.dim();
  if (target.rows() != d || !is_unitary(target)) throw DomainError("average_gate_fidelity: bad target");
  double fe = 0;
  for (const auto& k : ch.kraus()) fe += std::norm((target.adjoint() * k).trace());
  fe /= static_cast<double>(d) * d;
  return (d * fe + 1.0) / (d + 1.0);
}

MeanSE average_gate_fidelity_mc(const ChannelKraus& ch, const CMat& target, std::size_t samples, std::uint64_t seed,
                                int threads) {
  const int d = ch.dim();
  const auto xs = parallel_samples(samples, threads, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat psi = sample_haar_state(d, rng);
    const CMat out = target.adjoint() * ch.apply(psi * psi.adjoint()) * target;
    return (psi.adjoint() * out * psi)(0, 0).real();
  });
  return mean_se(xs);
}

ConjugateTwirl conjugate_twirl_state(const CMat& rho, int d) {
  if (d < 2) throw DomainError("conjugate twirl: d must be >= 2");
  if (rho.rows() != d * d || !is_density(rho, 1e-10)) throw DomainError("conjugate twirl: invalid state");
  const SubsystemDims dims{{d, d}};
  // (U (x) U*) rho (U (x) U*)^dag = [(U (x) U) rho^{T_B} (U (x) U)^dag]^{T_B}
  ConjugateTwirl out;
  out.output = partial_transpose(second_moment_closed_form(partial_transpose(rho, dims, 1), d), dims, 1);
  const CMat omega = vec(CMat::Identity(d, d));
  const double overlap = (omega.adjoint() * rho * omega)(0, 0).real();
  const double dd = d;
  out.p = dd * dd * (1.0 - overlap / dd) / (dd * dd - 1.0);
  return out;
}

MatrixStats conjugate_twirl_mc(const CMat& rho, int d, std::size_t samples, std::uint64_t seed, int threads) {
  return parallel_matrix_mean(samples, threads, d * d, d * d, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat u = sample_haar_unitary(d, rng);
    const CMat w = kron(u, u.conjugate());
    return CMat(w * rho * w.adjoint());
  });
}

double expected_purity(int dA, int dB) {
  if (dA < 1 || dB < 1) throw DomainError("purity: dimensions must be >= 1");
  return static_cast<double>(dA + dB) / (static_cast<double>(dA) * dB + 1.0);
}

double page_entropy(int dA, int dB) {
  if (dA < 1 || dB < 1) throw DomainError("page entropy: dimensions must be >= 1");
  // Entropy of the smaller factor; both marginals of a pure state agree.
  const int m = std::min(dA, dB), n = std::max(dA, dB);
  double h = 0;
  for (long long j = n + 1; j <= static_cast<long long>(m) * n; ++j) h += 1.0 / static_cast<double>(j);
  return (h - (m - 1.0) / (2.0 * n)) / std::numbers::ln2;
}

double page_entropy_lower_bound(int dA, int dB) {
  return std::log2(static_cast<double>(dA)) - dA / (2.0 * dB * std::numbers::ln2);
}

MeanSE purity_mc(int dA, int dB, std::size_t samples, std::uint64_t seed, int threads) {
  const auto xs = parallel_samples(samples, threads, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat psi = sample_haar_state(dA * dB, rng);
    // Rows of the dA x dB reshape index subsystem A.
    const CMat m = unvec(psi, dA, dB);
    const CMat rho_a = m * m.adjoint();
    return (rho_a * rho_a).trace().real();
  });
  return mean_se(xs);
}

double expectation_moment(const CMat& o, int k) {
  if (!is_hermitian(o)) throw DomainError("expectation_moment: O must be Hermitian");
  if (k < 1) throw DomainError("expectation_moment: k must be >= 1");
  const int d = static_cast<int>(o.rows());
  const std::int64_t dim = ipow(d, k);
  double num = 0;
  if (dim <= 1024) {
    const CMat ok = kron_power(o, k);
    num = ok.cwiseProduct(p_sym(d, k).transpose()).sum().real();
  } else {
    // Tr(O^{(x)k} V_pi) = prod over cycles of Tr(O^{len}).
    std::vector<double> power_traces(k + 1, 0.0);
    CMat p = CMat::Identity(d, d);
    for (int j = 1; j <= k; ++j) {
      p = p * o;
      power_traces[j] = p.trace().real();
    }
    const auto perms = enumerate_sk(k);
    for (const auto& pi : perms) {
      double t = 1;
      for (int len : pi.cycle_type()) t *= power_traces[len];
      num += t;
    }
    num /= static_cast<double>(perms.size());
  }
  return num / static_cast<double>(sym_dim(d, k));
}

double expectation_moment_k2(const CMat& o) {
  const double d = static_cast<double>(o.rows());
  const double tr = o.trace().real();
  const double tr2 = (o * o).trace().real();
  return (tr * tr + tr2) / (d * (d + 1.0));
}

double overlap_moment(int k, int d) { return 1.0 / static_cast<double>(sym_dim(d, k)); }

std::string to_string(TailKind k) {
  switch (k) {
    case TailKind::MarkovPauli: return "markov_pauli";
    case TailKind::Levy: return "levy";
    case TailKind::ExpOverlap: return "exp_overlap";
  }
  return "unknown";
}

TailKind tail_kind_from_string(const std::string& s) {
  if (s == "markov_pauli") return TailKind::MarkovPauli;
  if (s == "levy") return TailKind::Levy;
  if (s == "exp_overlap") return TailKind::ExpOverlap;
  throw DomainError("unknown tail kind '" + s + "'");
}

namespace {

bool is_power_of_two(int d) { return d >= 2 && (d & (d - 1)) == 0; }

// diag(+1 x floor(d/2), -1 x floor(d/2), 0 if d odd); Z on the first qubit when d = 2^n.
double split_observable_diag(int d, int i) {
  const int h = d / 2;
  if (i < h) return 1.0;
  return i < 2 * h ? -1.0 : 0.0;
}

}  // namespace

double tail_bound(TailKind kind, int d, double eps) {
  const double dd = d;
  switch (kind) {
    case TailKind::MarkovPauli:
      return eps == 0 ? std::numeric_limits<double>::infinity() : 1.0 / ((dd + 1.0) * eps * eps);
    case TailKind::Levy: {
      // ||O||_inf = 1 for the observable used here.
      const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
      return 2.0 * std::exp(-dd * eps * eps / (18.0 * pi3));
    }
    case TailKind::ExpOverlap:
      return 2.0 * std::exp(-dd * eps / 2.0);
  }
  return 0.0;
}

TailCheckReport tail_check(TailKind kind, int d, double eps, std::size_t samples, std::uint64_t seed, int threads) {
  if (d < 2) throw DomainError("tail_check: d must be >= 2");
  if (eps < 0) throw DomainError("tail_check: eps must be >= 0");
  if (samples < 2) throw DomainError("tail_check: need at least 2 samples");
  if (kind == TailKind::MarkovPauli && !is_power_of_two(d)) throw DomainError("markov_pauli needs d = 2^n");

  const auto hits = parallel_samples(samples, threads, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat psi = sample_haar_state(d, rng);
    double stat = 0;
    if (kind == TailKind::ExpOverlap) {
      stat = std::norm(psi(0, 0));
    } else {
      double ev = 0;
      for (int j = 0; j < d; ++j) ev += std::norm(psi(j, 0)) * split_observable_diag(d, j);
      stat = std::abs(ev);  // Tr(O) = 0, so no centering term
    }
    return stat >= eps ? 1.0 : 0.0;
  });
  const MeanSE m = mean_se(hits);
  TailCheckReport r;
  r.bound_name = to_string(kind);
  r.d = d;
  r.epsilon = eps;
  r.samples = samples;
  r.empirical_tail = m.mean;
  r.empirical_se = std::sqrt(m.mean * (1.0 - m.mean) / static_cast<double>(samples));
  r.bound_value = tail_bound(kind, d, eps);
  r.passed = r.empirical_tail <= r.bound_value + 3.0 * r.empirical_se;
  return r;
}

BarrenConfig BarrenConfig::z_family(int n_qubits, std::size_t samples) {
  if (n_qubits < 1 || n_qubits > 5) throw ResourceError("barren: n outside [1, 5]");
  BarrenConfig c;
  c.n_qubits = n_qubits;
  const int d = 1 << n_qubits;
  c.observable = kron(pauli_string("Z"), CMat::Identity(d / 2, d / 2));
  c.generator = c.observable;
  c.rho0 = CMat::Zero(d, d);
  c.rho0(0, 0) = 1.0;
  c.samples = samples;
  return c;
}

void BarrenConfig::validate() const {
  if (n_qubits < 1 || n_qubits > 5) throw ResourceError("barren: n outside [1, 5]");
  const int d = 1 << n_qubits;
  for (const CMat* m : {&observable, &generator, &rho0}) {
    if (m->rows() != d || m->cols() != d) throw DimensionError("barren: operators must be 2^n x 2^n");
  }
  for (const CMat* m : {&observable, &generator}) {
    if (!is_hermitian(*m) || std::abs(m->trace()) > 1e-10) {
      throw DomainError("barren: O and H must be Hermitian and traceless");
    }
  }
  if (!is_density(rho0)) throw DomainError("barren: rho0 is not a density matrix");
}

double barren_exact_var_C(const BarrenConfig& cfg) {
  cfg.validate();
  const double d = 1 << cfg.n_qubits;
  const double c_rho = ((cfg.rho0 * cfg.rho0).trace().real() - 1.0 / d) / (d * d - 1.0);
  return c_rho * (cfg.observable * cfg.observable).trace().real();
}

double barren_exact_var_dC(const BarrenConfig& cfg) {
  cfg.validate();
  const double d = 1 << cfg.n_qubits;
  const double c_rho = ((cfg.rho0 * cfg.rho0).trace().real() - 1.0 / d) / (d * d - 1.0);
  const double c_o = (cfg.observable * cfg.observable).trace().real() / (d * d - 1.0);
  return 2.0 * d * c_rho * c_o * (cfg.generator * cfg.generator).trace().real();
}

BarrenRecord barren_plateau_experiment(const BarrenConfig& cfg, std::uint64_t seed, int threads) {
  cfg.validate();
  if (cfg.samples < 2) throw DomainError("barren: need at least 2 samples");
  const int d = 1 << cfg.n_qubits;
  const std::size_t n = cfg.samples;

  const auto c = parallel_samples(n, threads, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const CMat u = sample_haar_unitary(d, rng);
    return (u * cfg.rho0 * u.adjoint() * cfg.observable).trace().real();
  });
  // Gradient samples draw from a disjoint block of stream ids.
  const std::uint64_t base = std::uint64_t{1} << 40;
  const auto dc = parallel_samples(n, threads, [&](std::size_t i) {
    RandomStream ra(seed, base + 2 * i), rb(seed, base + 2 * i + 1);
    const CMat ua = sample_haar_unitary(d, ra);
    const CMat ub = sample_haar_unitary(d, rb);
    const CMat a = ua.adjoint() * cfg.observable * ua;
    const CMat comm = cfg.generator * a - a * cfg.generator;
    return (Complex(0, 1) * (ub * cfg.rho0 * ub.adjoint() * comm).trace()).real();
  });

  BarrenRecord r;
  r.samples = n;
  const MeanSE mc = mean_se(c), mdc = mean_se(dc);
  const VarianceSE vc = variance_se(c), vdc = variance_se(dc);
  r.mean_C = mc.mean;
  r.mean_C_se = mc.se;
  r.var_C = vc.variance;
  r.var_C_se = vc.se;
  r.mean_dC = mdc.mean;
  r.mean_dC_se = mdc.se;
  r.var_dC = vdc.variance;
  r.var_dC_se = vdc.se;
  r.exact_var_C = barren_exact_var_C(cfg);
  r.exact_var_dC = barren_exact_var_dC(cfg);
  return r;
}

}  // namespace haar
