#include "haar/shadows.hpp"

#include <algorithm>
#include <cmath>

#include "haar/errors.hpp"

namespace haar {

namespace {

int qubits_for(std::int64_t d) {
  int n = 0;
  while ((std::int64_t{1} << n) < d) ++n;
  if ((std::int64_t{1} << n) != d || n < 1 || n > kMaxShadowQubits) {
    throw ResourceError("shadows: dimension must be 2^n with 1 <= n <= 3");
  }
  return n;
}

void check_square(const CMat& x, int d, const char* who) {
  if (x.rows() != d || x.cols() != d) throw DimensionError(std::string(who) + ": input must be d x d");
}

}  // namespace

int simulate_measurement(const CMat& rho, const CMat& u, RandomStream& rng) {
  if (!is_density(rho, 1e-10)) throw DomainError("simulate_measurement: rho is not a density matrix");
  if (u.rows() != rho.rows() || !is_unitary(u, 1e-10)) throw DomainError("simulate_measurement: bad unitary");
  const CMat r = u * rho * u.adjoint();
  const double x = rng.uniform();
  double acc = 0;
  for (Eigen::Index b = 0; b < r.rows(); ++b) {
    acc += std::max(0.0, r(b, b).real());
    if (x < acc) return static_cast<int>(b);
  }
  // Rounding left the cumulative sum short of 1; take the last outcome with weight.
  for (Eigen::Index b = r.rows() - 1; b > 0; --b) {
    if (r(b, b).real() > 0) return static_cast<int>(b);
  }
  return 0;
}

CMat measurement_channel(const CMat& x, int d) {
  check_square(x, d, "measurement_channel");
  return (x.trace() * CMat::Identity(d, d) + x) / static_cast<double>(d + 1);
}

CMat inverse_channel(const CMat& x, int d) {
  check_square(x, d, "inverse_channel");
  return static_cast<double>(d + 1) * x - x.trace() * CMat::Identity(d, d);
}

double single_shot_estimate(const CMat& o, const CMat& u, int outcome) {
  const auto d = u.rows();
  // U^dagger |b> is the conjugated b-th row of U.
  const CMat v = u.row(outcome).adjoint();
  const double overlap = (v.adjoint() * o * v)(0, 0).real();
  return static_cast<double>(d + 1) * overlap - o.trace().real();
}

nlohmann::json SnapshotLog::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["seed"] = seed;
  j["unitaries"] = nlohmann::json::array();
  for (const auto& c : unitaries) j["unitaries"].push_back(circuit_to_string(c));
  j["snapshots"] = nlohmann::json::array();
  for (const auto& s : snapshots) j["snapshots"].push_back({s.unitary_index, s.outcome});
  return j;
}

SnapshotLog SnapshotLog::from_json(const nlohmann::json& j) {
  SnapshotLog log;
  log.n_qubits = j.at("n_qubits").get<int>();
  log.seed = j.value("seed", std::uint64_t{0});
  for (const auto& c : j.at("unitaries")) log.unitaries.push_back(circuit_from_string(c.get<std::string>()));
  for (const auto& s : j.at("snapshots")) {
    Snapshot snap{s.at(0).get<std::size_t>(), s.at(1).get<int>()};
    if (snap.unitary_index >= log.unitaries.size() || snap.outcome < 0 || snap.outcome >= (1 << log.n_qubits)) {
      throw DomainError("snapshot log: record out of range");
    }
    log.snapshots.push_back(snap);
  }
  return log;
}

SnapshotLog generate_snapshots(const CMat& rho, std::size_t samples, std::uint64_t seed, int threads) {
  const int n = qubits_for(rho.rows());
  if (!is_density(rho, 1e-10)) throw DomainError("generate_snapshots: rho is not a density matrix");
  SnapshotLog log;
  log.n_qubits = n;
  log.seed = seed;
  log.unitaries.resize(samples);
  log.snapshots.resize(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    RandomStream rng(seed, i);
    CliffordElement c = sample_clifford(n, rng);
    log.snapshots[i] = {i, simulate_measurement(rho, c.matrix, rng)};
    log.unitaries[i] = std::move(c.circuit);
  });
  return log;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw DomainError("median of empty list");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::vector<ShadowEstimate> estimate_observables(const SnapshotLog& log, const std::vector<CMat>& observables,
                                                 std::size_t batches, int threads) {
  const std::size_t n = log.snapshots.size();
  const int d = 1 << log.n_qubits;
  if (batches < 1 || n / batches < 10) throw DomainError("estimate_observables: need at least 10 snapshots per batch");
  for (const auto& o : observables) {
    if (o.rows() != d || !is_hermitian(o)) throw DomainError("estimate_observables: observables must be Hermitian d x d");
  }

  // values[i * M + m]: single-shot estimate of observable m from snapshot i.
  const std::size_t m_count = observables.size();
  std::vector<double> values(n * m_count);
  parallel_for(n, threads, [&](std::size_t i) {
    const Snapshot& s = log.snapshots[i];
    const CMat u = canonicalize_phase(circuit_matrix(log.unitaries[s.unitary_index], log.n_qubits));
    for (std::size_t m = 0; m < m_count; ++m) values[i * m_count + m] = single_shot_estimate(observables[m], u, s.outcome);
  });

  std::vector<ShadowEstimate> out(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = values[i * m_count + m];
    ShadowEstimate& e = out[m];
    e.observable = m;
    e.samples = n;
    e.batches = batches;
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * n / batches, hi = (b + 1) * n / batches;
      double s = 0;
      for (std::size_t i = lo; i < hi; ++i) s += col[i];
      e.batch_means.push_back(s / static_cast<double>(hi - lo));
    }
    e.estimate = median(e.batch_means);
    const MeanSE g = mean_se(col);
    e.grand_mean = g.mean;
    e.grand_se = g.se;
  }
  return out;
}

std::vector<ShadowEstimate> estimate_observables(const CMat& rho, const std::vector<CMat>& observables,
                                                 std::size_t samples, std::size_t batches, std::uint64_t seed,
                                                 int threads) {
  return estimate_observables(generate_snapshots(rho, samples, seed, threads), observables, batches, threads);
}

double shadow_variance_bound(const CMat& o) { return 3.0 * (o * o).trace().real(); }

double shadow_variance_exact(const CMat& rho, const CMat& o) {
  const int d = static_cast<int>(o.rows());
  check_square(rho, d, "shadow_variance");
  const CMat o0 = o - (o.trace() / static_cast<double>(d)) * CMat::Identity(d, d);
  const CMat o0sq = o0 * o0;
  const double t = (o0 * rho).trace().real();
  return (d + 1.0) / (d + 2.0) * (o0sq.trace().real() + 2.0 * (rho * o0sq).trace().real()) - t * t;
}

VarianceSE shadow_variance_empirical(const CMat& rho, const CMat& o, std::size_t samples, std::uint64_t seed,
                                     int threads) {
  if (samples < 2) throw DomainError("shadow_variance: need at least 2 samples");
  const SnapshotLog log = generate_snapshots(rho, samples, seed, threads);
  const int n = log.n_qubits;
  const auto xs = parallel_samples(samples, threads, [&](std::size_t i) {
    const Snapshot& s = log.snapshots[i];
    return single_shot_estimate(o, canonicalize_phase(circuit_matrix(log.unitaries[s.unitary_index], n)), s.outcome);
  });
  return variance_se(xs);
}

double shadow_variance(const CMat& rho, const CMat& o, VarianceMode mode, std::size_t samples, std::uint64_t seed,
                       int threads) {
  switch (mode) {
    case VarianceMode::Bound: return shadow_variance_bound(o);
    case VarianceMode::Exact: return shadow_variance_exact(rho, o);
    case VarianceMode::Empirical: return shadow_variance_empirical(rho, o, samples, seed, threads).variance;
  }
  return 0.0;
}

std::size_t sample_complexity(std::size_t m, double eps, double delta, double max_variance) {
  if (m < 1 || !(eps > 0 && eps < 1) || !(delta > 0 && delta < 1) || max_variance < 0) {
    throw DomainError("sample_complexity: need M >= 1, eps and delta in (0,1), variance >= 0");
  }
  return static_cast<std::size_t>(std::ceil(4.0 * std::log(2.0 * m / delta) * max_variance / (eps * eps)));
}

std::size_t median_of_means_batches(std::size_t m, double delta) {
  if (m < 1 || !(delta > 0 && delta < 1)) throw DomainError("median_of_means_batches: bad M or delta");
  return static_cast<std::size_t>(std::ceil(2.0 * std::log(2.0 * m / delta)));
}

}  // namespace haar
