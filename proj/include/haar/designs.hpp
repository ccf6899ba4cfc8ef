#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "haar/ensembles.hpp"
#include "haar/linalg.hpp"
#include "haar/parallel.hpp"

namespace haar {

enum class Mode { Exact, MonteCarlo };
std::string to_string(Mode m);

enum class Verdict { Exact, Approximate, NotADesign };
std::string to_string(Verdict v);

struct DesignReport {
  int k = 0;
  int d = 0;
  Mode mode = Mode::Exact;
  double frame_potential = 0.0;
  double frame_potential_se = 0.0;  // zero in exact mode
  std::size_t samples = 0;          // MC pairs; zero in exact mode
  double haar_frame_potential = 0.0;
  double l2_deviation = 0.0;  // sqrt(max(F - F_Haar, 0))
  std::optional<double> tpe_norm;
  std::map<std::string, double> derived_bounds;
  Verdict verdict = Verdict::NotADesign;
  double tolerance = 0.0;
};

// sum_{i,j} w_i w_j |Tr(U_i U_j^dagger)|^{2k}
double frame_potential_exact(const FiniteUniform& e, int k);

// Mean of |Tr(U V^dagger)|^{2k} over independent pairs; pair i uses streams
// (seed, 2i) and (seed, 2i+1).
MeanSE frame_potential_mc(const UnitaryEnsemble& e, int k, std::size_t pairs, std::uint64_t seed,
                          int threads = 1);

// dim Comm(U(d), k) = rank of the Gram matrix.
std::int64_t haar_frame_potential(int k, int d);

// E_nu[U^{(x)k} (x) conj(U)^{(x)k}], exactly when the ensemble is enumerable (or a
// product power of one, or Haar).
CMat ensemble_moment_operator(const UnitaryEnsemble& e, int k);
CMat ensemble_moment_operator(const FiniteUniform& e, int k);
// Empirical mean over N samples (biased as a TPE estimate).
CMat ensemble_moment_operator_mc(const UnitaryEnsemble& e, int k, std::size_t samples, std::uint64_t seed,
                                 int threads = 1);

bool has_exact_moments(const UnitaryEnsemble& e);

struct CertifyParams {
  Mode mode = Mode::Exact;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<double> tolerance;  // default 1e-8 exact, 3 SE in MC
  bool with_tpe = true;
};

DesignReport certify_design(const UnitaryEnsemble& e, int k, const CertifyParams& params = {});

double tpe_norm(const UnitaryEnsemble& e, int k);
double tpe_norm_mc(const UnitaryEnsemble& e, int k, std::size_t samples, std::uint64_t seed, int threads = 1);

UnitaryEnsemble amplify(const UnitaryEnsemble& e, int power);

std::map<std::string, double> bound_conversions(const DesignReport& report);

// (1-eps) M_nu <= M_H <= (1+eps) M_nu in the completely-positive order.
bool relative_error_check(const FiniteUniform& e, int k, double eps);

double design_cardinality_lower_bound(int k, int d);

// Choi matrix sum_{ij} Phi(|i><j|) (x) |i><j| of a superoperator given in
// vectorized form (vec(Phi(X)) = S vec(X)).
CMat choi_from_superoperator(const CMat& s, std::int64_t dim);

struct HaarStates {
  int d;
};
struct FiniteStates {
  std::vector<CMat> states;  // unit column vectors
  std::vector<double> weights;

  FiniteStates() = default;
  explicit FiniteStates(std::vector<CMat> states, std::vector<double> weights = {});
  int dim() const;
};
using StateEnsemble = std::variant<HaarStates, FiniteStates>;

// States U|ref> for the members of a finite unitary ensemble.
FiniteStates induced_states(const FiniteUniform& e, const CMat& ref);

struct StateFrameReport {
  int k = 0;
  int d = 0;
  Mode mode = Mode::Exact;
  double frame_potential = 0.0;
  double se = 0.0;
  double haar_value = 0.0;  // 1 / dim Sym_k
  bool is_design = false;
};

StateFrameReport state_frame_potential(const StateEnsemble& e, int k, Mode mode = Mode::Exact,
                                       std::size_t pairs = 0, std::uint64_t seed = 0, int threads = 1,
                                       double tol = 1e-8);

}  // namespace haar
