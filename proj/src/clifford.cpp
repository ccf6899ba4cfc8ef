#include "haar/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "haar/errors.hpp"

namespace haar {

namespace {

std::int64_t qubit_bit(int q, int n) { return std::int64_t{1} << (n - 1 - q); }

// Left-multiplies u by one gate, in place, via row operations.
void apply_gate(CMat& u, const CliffordGate& g, int n) {
  const std::int64_t dim = u.rows();
  switch (g.kind) {
    case CliffordGate::Kind::H: {
      const std::int64_t bit = qubit_bit(g.a, n);
      for (std::int64_t r = 0; r < dim; ++r) {
        if (r & bit) continue;
        const auto r0 = u.row(r).eval();
        const auto r1 = u.row(r | bit).eval();
        u.row(r) = (r0 + r1) * M_SQRT1_2;
        u.row(r | bit) = (r0 - r1) * M_SQRT1_2;
      }
      break;
    }
    case CliffordGate::Kind::S: {
      const std::int64_t bit = qubit_bit(g.a, n);
      for (std::int64_t r = 0; r < dim; ++r) {
        if (r & bit) u.row(r) *= Complex(0, 1);
      }
      break;
    }
    case CliffordGate::Kind::CX: {
      const std::int64_t cbit = qubit_bit(g.a, n), tbit = qubit_bit(g.b, n);
      for (std::int64_t r = 0; r < dim; ++r) {
        if ((r & cbit) && !(r & tbit)) u.row(r).swap(u.row(r | tbit));
      }
      break;
    }
  }
}

void check_gate(const CliffordGate& g, int n) {
  auto bad = [n](int q) { return q < 0 || q >= n; };
  if (bad(g.a) || (g.kind == CliffordGate::Kind::CX && (bad(g.b) || g.a == g.b))) {
    throw DomainError("Clifford gate acts on an invalid qubit");
  }
}

// Phase-free Pauli string as bit masks over qubits; bit q stands for qubit q.
struct Pauli {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
};

bool anticommute(const Pauli& a, const Pauli& b) {
  return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) % 2 == 1;
}

void conjugate(Pauli& p, const CliffordGate& g) {
  const std::uint32_t m = 1u << g.a;
  switch (g.kind) {
    case CliffordGate::Kind::H: {
      const bool xa = p.x & m, za = p.z & m;
      p.x = (p.x & ~m) | (za ? m : 0);
      p.z = (p.z & ~m) | (xa ? m : 0);
      break;
    }
    case CliffordGate::Kind::S:
      if (p.x & m) p.z ^= m;
      break;
    case CliffordGate::Kind::CX: {
      const std::uint32_t t = 1u << g.b;
      if (p.x & m) p.x ^= t;
      if (p.z & t) p.z ^= m;
      break;
    }
  }
}

// Gate sequence mapping the anticommuting pair (a, b), supported on qubits >= i,
// to (X_i, Z_i) under conjugation.
CliffordCircuit sweep_pair(Pauli a, Pauli b, int i, int n) {
  CliffordCircuit out;
  auto push = [&](CliffordGate g) {
    conjugate(a, g);
    conjugate(b, g);
    out.push_back(g);
  };
  using K = CliffordGate::Kind;

  for (int j = i; j < n; ++j) {
    const std::uint32_t m = 1u << j;
    if (a.z & m) push({(a.x & m) ? K::S : K::H, j});
  }
  int pivot = -1;
  for (int j = i; j < n; ++j) {
    if (!(a.x & (1u << j))) continue;
    if (pivot < 0) {
      pivot = j;
    } else {
      push({K::CX, pivot, j});
    }
  }
  if (pivot != i) {
    push({K::CX, i, pivot});
    push({K::CX, pivot, i});
    push({K::CX, i, pivot});
  }
  // a = X_i; move it to Z_i so b can be cleared with CX gates controlled on i.
  push({K::H, i});
  if (b.z & (1u << i)) push({K::S, i});
  for (int j = i + 1; j < n; ++j) {
    const std::uint32_t m = 1u << j;
    if (b.z & m) push({(b.x & m) ? K::S : K::H, j});
  }
  for (int j = i + 1; j < n; ++j) {
    if (b.x & (1u << j)) push({K::CX, i, j});
  }
  push({K::H, i});
  return out;
}

void append_inverse(CliffordCircuit& dst, const CliffordCircuit& src) {
  for (auto it = src.rbegin(); it != src.rend(); ++it) {
    dst.push_back(*it);
    if (it->kind == CliffordGate::Kind::S) {
      dst.push_back(*it);
      dst.push_back(*it);
    }
  }
}

Pauli random_pauli(RandomStream& rng, int i, int n) {
  const std::uint32_t mask = ((1u << n) - 1) & ~((1u << i) - 1);
  return {static_cast<std::uint32_t>(rng()) & mask, static_cast<std::uint32_t>(rng()) & mask};
}

}  // namespace

CMat circuit_matrix(const CliffordCircuit& circuit, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxCliffordQubits) throw ResourceError("Clifford: n outside [1, 5]");
  CMat u = CMat::Identity(std::int64_t{1} << n_qubits, std::int64_t{1} << n_qubits);
  for (const auto& g : circuit) {
    check_gate(g, n_qubits);
    apply_gate(u, g, n_qubits);
  }
  return u;
}

CMat canonicalize_phase(const CMat& u, double tol) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const Complex z = u.data()[i];
    if (std::abs(z) > tol) return u * (std::abs(z) / z);
  }
  return u;
}

bool is_clifford(const CMat& u, int n_qubits, double tol) {
  const std::int64_t dim = std::int64_t{1} << n_qubits;
  if (u.rows() != dim || u.cols() != dim || !is_unitary(u, tol)) return false;
  for (int q = 0; q < n_qubits; ++q) {
    for (int which = 0; which < 2; ++which) {
      CMat p = CMat::Zero(dim, dim);
      const std::int64_t bit = qubit_bit(q, n_qubits);
      for (std::int64_t r = 0; r < dim; ++r) {
        if (which == 0) {
          p(r ^ bit, r) = 1.0;
        } else {
          p(r, r) = (r & bit) ? -1.0 : 1.0;
        }
      }
      const CMat m = u * p * u.adjoint();
      // Decode m = c X^x Z^z from column 0 and the columns e_q.
      Eigen::Index x = 0;
      m.col(0).cwiseAbs().maxCoeff(&x);
      const Complex c = m(x, 0);
      if (std::abs(std::abs(c) - 1.0) > tol || std::abs(c * c * c * c - 1.0) > 4 * tol) return false;
      std::int64_t z = 0;
      for (int t = 0; t < n_qubits; ++t) {
        const std::int64_t e = qubit_bit(t, n_qubits);
        if (std::abs(m(x ^ e, e) + c) < 0.5) z |= e;
      }
      CMat expect = CMat::Zero(dim, dim);
      for (std::int64_t j = 0; j < dim; ++j) {
        expect(j ^ x, j) = c * ((std::popcount(static_cast<std::uint64_t>(z & j)) % 2) ? -1.0 : 1.0);
      }
      if (max_abs_diff(m, expect) > tol) return false;
    }
  }
  return true;
}

std::vector<CliffordElement> clifford_group_1q() {
  auto key_of = [](const CMat& m) {
    std::vector<long long> key;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      key.push_back(std::llround(m.data()[i].real() * 1e8));
      key.push_back(std::llround(m.data()[i].imag() * 1e8));
    }
    return key;
  };
  std::vector<CliffordElement> out;
  std::map<std::vector<long long>, bool> seen;
  CliffordElement id{1, {}, CMat::Identity(2, 2)};
  seen[key_of(id.matrix)] = true;
  out.push_back(id);
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (auto kind : {CliffordGate::Kind::H, CliffordGate::Kind::S}) {
      CliffordElement next = out[head];
      next.circuit.push_back({kind, 0});
      next.matrix = canonicalize_phase(circuit_matrix(next.circuit, 1));
      auto key = key_of(next.matrix);
      if (!seen[key]) {
        seen[key] = true;
        out.push_back(std::move(next));
      }
    }
  }
  return out;
}

CliffordElement sample_clifford(int n, RandomStream& rng) {
  if (n < 1 || n > kMaxCliffordQubits) throw ResourceError("sample_clifford: n outside [1, 5]");
  using K = CliffordGate::Kind;
  CliffordElement e;
  e.n_qubits = n;

  // Random Pauli layer first (sets all sign patterns uniformly).
  const Pauli layer = random_pauli(rng, 0, n);
  for (int q = 0; q < n; ++q) {
    if (layer.z & (1u << q)) e.circuit.insert(e.circuit.end(), {{K::S, q}, {K::S, q}});
    if (layer.x & (1u << q)) e.circuit.insert(e.circuit.end(), {{K::H, q}, {K::S, q}, {K::S, q}, {K::H, q}});
  }

  // C = L_0 L_1 ... L_{n-1} P, where L_i sends (X_i, Z_i) to a random anticommuting
  // pair on qubits i..n-1. In time order L_{n-1} acts first.
  std::vector<CliffordCircuit> layers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Pauli a, b;
    do {
      a = random_pauli(rng, i, n);
    } while (a.x == 0 && a.z == 0);
    do {
      b = random_pauli(rng, i, n);
    } while (!anticommute(a, b));
    layers[i] = sweep_pair(a, b, i, n);
  }
  for (int i = n - 1; i >= 0; --i) append_inverse(e.circuit, layers[i]);

  e.matrix = canonicalize_phase(circuit_matrix(e.circuit, n));
  return e;
}

std::string circuit_to_string(const CliffordCircuit& c) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << "; ";
    switch (c[i].kind) {
      case CliffordGate::Kind::H: os << "H " << c[i].a; break;
      case CliffordGate::Kind::S: os << "S " << c[i].a; break;
      case CliffordGate::Kind::CX: os << "CX " << c[i].a << ' ' << c[i].b; break;
    }
  }
  return os.str();
}

CliffordCircuit circuit_from_string(const std::string& s) {
  CliffordCircuit out;
  std::istringstream all(s);
  std::string token;
  while (std::getline(all, token, ';')) {
    std::istringstream is(token);
    std::string name;
    if (!(is >> name)) continue;
    CliffordGate g{CliffordGate::Kind::H, 0};
    if (name == "H" || name == "S") {
      g.kind = name == "H" ? CliffordGate::Kind::H : CliffordGate::Kind::S;
      if (!(is >> g.a)) throw DomainError("circuit: missing qubit after " + name);
    } else if (name == "CX") {
      g.kind = CliffordGate::Kind::CX;
      if (!(is >> g.a >> g.b)) throw DomainError("circuit: CX needs two qubits");
    } else {
      throw DomainError("circuit: unknown gate '" + name + "'");
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace haar
