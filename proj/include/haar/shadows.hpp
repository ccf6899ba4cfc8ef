#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "haar/clifford.hpp"
#include "haar/linalg.hpp"
#include "haar/parallel.hpp"
#include "haar/rng.hpp"

namespace haar {

inline constexpr int kMaxShadowQubits = 3;

// Born-rule sample of the computational-basis outcome after rho -> U rho U^dagger.
int simulate_measurement(const CMat& rho, const CMat& u, RandomStream& rng);

// M(x) = (Tr(x) I + x) / (d + 1) and its inverse (d + 1) x - Tr(x) I.
CMat measurement_channel(const CMat& x, int d);
CMat inverse_channel(const CMat& x, int d);

// Tr(O M^{-1}(U^dagger |b><b| U)) = (d + 1) <b|U O U^dagger|b> - Tr(O).
double single_shot_estimate(const CMat& o, const CMat& u, int outcome);

struct Snapshot {
  std::size_t unitary_index = 0;
  int outcome = 0;
};

// Replayable record: every snapshot points at a circuit in `unitaries`.
struct SnapshotLog {
  int n_qubits = 0;
  std::uint64_t seed = 0;
  std::vector<CliffordCircuit> unitaries;
  std::vector<Snapshot> snapshots;

  nlohmann::json to_json() const;
  static SnapshotLog from_json(const nlohmann::json& j);
};

// Snapshot i draws its Clifford and outcome from stream (seed, i).
SnapshotLog generate_snapshots(const CMat& rho, std::size_t samples, std::uint64_t seed, int threads = 1);

struct ShadowEstimate {
  std::size_t observable = 0;
  double estimate = 0.0;  // median of batch means
  std::vector<double> batch_means;
  std::size_t samples = 0;
  std::size_t batches = 0;
  double grand_mean = 0.0;
  double grand_se = 0.0;
};

std::vector<ShadowEstimate> estimate_observables(const SnapshotLog& log, const std::vector<CMat>& observables,
                                                 std::size_t batches, int threads = 1);
std::vector<ShadowEstimate> estimate_observables(const CMat& rho, const std::vector<CMat>& observables,
                                                 std::size_t samples, std::size_t batches, std::uint64_t seed,
                                                 int threads = 1);

double median(std::vector<double> xs);

enum class VarianceMode { Bound, Exact, Empirical };

double shadow_variance_bound(const CMat& o);
double shadow_variance_exact(const CMat& rho, const CMat& o);
VarianceSE shadow_variance_empirical(const CMat& rho, const CMat& o, std::size_t samples, std::uint64_t seed,
                                     int threads = 1);
double shadow_variance(const CMat& rho, const CMat& o, VarianceMode mode, std::size_t samples = 0,
                       std::uint64_t seed = 0, int threads = 1);

// N = ceil(4 log(2M/delta) maxVar / eps^2)
std::size_t sample_complexity(std::size_t m, double eps, double delta, double max_variance);
// K = ceil(2 log(2M/delta))
std::size_t median_of_means_batches(std::size_t m, double delta);

}  // namespace haar
