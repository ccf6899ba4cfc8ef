#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haar/linalg.hpp"
#include "haar/parallel.hpp"
#include "haar/rng.hpp"

namespace haar {

class ChannelKraus {
 public:
  // Throws unless sum K^dagger K = I within tol.
  explicit ChannelKraus(std::vector<CMat> kraus, double tol = 1e-10);

  const std::vector<CMat>& kraus() const { return kraus_; }
  int dim() const { return d_; }
  CMat apply(const CMat& rho) const;

  static ChannelKraus identity(int d);
  static ChannelKraus unitary(const CMat& u);
  // Kraus set {|i><j| / sqrt(d)}: rho -> Tr(rho) I / d.
  static ChannelKraus fully_depolarizing(int d);
  // Random channel from a Haar isometry C^d -> C^d (x) C^r.
  static ChannelKraus random(int d, int kraus_rank, RandomStream& rng);

 private:
  std::vector<CMat> kraus_;
  int d_;
};

double entanglement_fidelity(const ChannelKraus& ch);
double twirl_depolarizing_parameter(const ChannelKraus& ch);

// E[U^dagger Phi(U rho U^dagger) U] from the second-moment closed form, Kraus by Kraus.
CMat twirl_channel_exact(const ChannelKraus& ch, const CMat& rho);
MatrixStats twirl_channel_mc(const ChannelKraus& ch, const CMat& rho, std::size_t samples, std::uint64_t seed,
                             int threads = 1);

double average_gate_fidelity(const ChannelKraus& ch, const CMat& target);
// E_psi <psi|U^dagger Phi(|psi><psi|) U|psi> over Haar states.
MeanSE average_gate_fidelity_mc(const ChannelKraus& ch, const CMat& target, std::size_t samples,
                                std::uint64_t seed, int threads = 1);

struct ConjugateTwirl {
  double p = 0.0;
  CMat output;
};
// E[(U (x) U*) rho (U (x) U*)^dagger] for rho on C^d (x) C^d.
ConjugateTwirl conjugate_twirl_state(const CMat& rho, int d);
MatrixStats conjugate_twirl_mc(const CMat& rho, int d, std::size_t samples, std::uint64_t seed, int threads = 1);

double expected_purity(int dA, int dB);
double page_entropy(int dA, int dB);  // bits; requires dA <= dB
double page_entropy_lower_bound(int dA, int dB);
MeanSE purity_mc(int dA, int dB, std::size_t samples, std::uint64_t seed, int threads = 1);

// E_psi <psi|O|psi>^k = Tr(O^{(x)k} P_sym) / dim Sym_k.
double expectation_moment(const CMat& o, int k);
double expectation_moment_k2(const CMat& o);
double overlap_moment(int k, int d);

enum class TailKind { MarkovPauli, Levy, ExpOverlap };
std::string to_string(TailKind k);
TailKind tail_kind_from_string(const std::string& s);

struct TailCheckReport {
  std::string bound_name;
  int d = 0;
  double epsilon = 0.0;
  double empirical_tail = 0.0;
  double empirical_se = 0.0;
  double bound_value = 0.0;
  std::size_t samples = 0;
  bool passed = false;
};

double tail_bound(TailKind kind, int d, double eps);

// markov_pauli and levy use O = diag(1,..,1,-1,..,-1) (Z on the first qubit when
// d = 2^n; markov_pauli requires that), exp_overlap uses |phi> = |0>.
TailCheckReport tail_check(TailKind kind, int d, double eps, std::size_t samples, std::uint64_t seed,
                           int threads = 1);

struct BarrenConfig {
  int n_qubits = 1;
  CMat observable;
  CMat generator;
  CMat rho0;
  std::size_t samples = 0;

  // O = H = Z on qubit 0, rho0 = |0...0><0...0|.
  static BarrenConfig z_family(int n_qubits, std::size_t samples);
  void validate() const;
};

struct BarrenRecord {
  double mean_C = 0.0;
  double mean_C_se = 0.0;
  double var_C = 0.0;
  double var_C_se = 0.0;
  double mean_dC = 0.0;
  double mean_dC_se = 0.0;
  double var_dC = 0.0;
  double var_dC_se = 0.0;
  double exact_var_C = 0.0;
  double exact_var_dC = 0.0;
  std::size_t samples = 0;
};

double barren_exact_var_C(const BarrenConfig& cfg);
double barren_exact_var_dC(const BarrenConfig& cfg);
BarrenRecord barren_plateau_experiment(const BarrenConfig& cfg, std::uint64_t seed, int threads = 1);

}  // namespace haar
