#pragma once

#include <string>
#include <vector>

#include "haar/linalg.hpp"
#include "haar/rng.hpp"

namespace haar {

inline constexpr int kMaxCliffordQubits = 5;

struct CliffordGate {
  enum class Kind { H, S, CX };
  Kind kind;
  int a;       // target qubit, or control for CX
  int b = -1;  // CX target

  friend bool operator==(const CliffordGate&, const CliffordGate&) = default;
};

// Gates in time order; qubit 0 is the most significant tensor factor.
using CliffordCircuit = std::vector<CliffordGate>;

struct CliffordElement {
  int n_qubits = 0;
  CliffordCircuit circuit;
  CMat matrix;  // phase-canonical dense form of the circuit
};

CMat circuit_matrix(const CliffordCircuit& circuit, int n_qubits);

// Rescale by a global phase so the first nonzero entry (row-major) is positive real.
CMat canonicalize_phase(const CMat& u, double tol = 1e-12);

// U P U^dagger is a Pauli string times a phase in {+1, -1, +i, -i} for every X_j, Z_j.
bool is_clifford(const CMat& u, int n_qubits, double tol = 1e-10);

// All 24 single-qubit Cliffords modulo phase, from closure of {H, S}; identity first.
std::vector<CliffordElement> clifford_group_1q();

// Uniform over Cl(n) modulo global phase.
CliffordElement sample_clifford(int n_qubits, RandomStream& rng);

// "H 0; S 1; CX 0 1"
std::string circuit_to_string(const CliffordCircuit& c);
CliffordCircuit circuit_from_string(const std::string& s);

}  // namespace haar
