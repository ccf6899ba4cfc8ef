#include "haar/ensembles.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/QR>
#include <nlohmann/json.hpp>

#include "haar/errors.hpp"
#include "haar/matrix_io.hpp"

namespace haar {

CMat sample_haar_unitary(int d, RandomStream& rng) {
  if (d < 1) throw DomainError("sample_haar_unitary: d must be >= 1");
  Eigen::MatrixXcd z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0) q.col(j) *= rjj / mag;
  }
  return q;
}

CMat sample_haar_state(int d, RandomStream& rng) {
  if (d < 1) throw DomainError("sample_haar_state: d must be >= 1");
  CMat psi(d, 1);
  for (int i = 0; i < d; ++i) psi(i, 0) = rng.complex_normal();
  return psi / psi.norm();
}

namespace {

CMat single_pauli(char c) {
  CMat p = CMat::Zero(2, 2);
  switch (c) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw DomainError(std::string("unknown Pauli letter ") + c);
  }
  return p;
}

}  // namespace

CMat pauli_string(const std::string& letters) {
  if (letters.empty()) throw DomainError("pauli_string: empty");
  CMat out = CMat::Identity(1, 1);
  for (char c : letters) out = kron(out, single_pauli(c));
  return out;
}

std::vector<CMat> pauli_basis(int n) {
  if (n < 1 || n > kMaxPauliQubits) throw ResourceError("pauli_basis: n outside [1, 6]");
  std::vector<CMat> out;
  std::vector<CMat> prev{CMat::Identity(1, 1)};
  for (int q = 0; q < n; ++q) {
    std::vector<CMat> next;
    next.reserve(prev.size() * 4);
    for (const auto& p : prev) {
      for (char c : std::string("IXYZ")) next.push_back(kron(p, single_pauli(c)));
    }
    prev = std::move(next);
  }
  return prev;
}

FiniteUniform::FiniteUniform(std::vector<CMat> m, std::vector<double> w)
    : members(std::move(m)), weights(std::move(w)) {
  if (members.empty()) throw DomainError("FiniteUniform: no members");
  const auto d = members.front().rows();
  for (const auto& u : members) {
    if (u.rows() != d || u.cols() != d) throw DimensionError("FiniteUniform: members differ in shape");
    if (!is_unitary(u, 1e-10)) throw DomainError("FiniteUniform: member is not unitary");
  }
  if (weights.empty()) {
    weights.assign(members.size(), 1.0 / static_cast<double>(members.size()));
    return;
  }
  if (weights.size() != members.size()) throw DimensionError("FiniteUniform: weight count mismatch");
  double total = 0;
  for (double x : weights) {
    if (!(x >= 0)) throw DomainError("FiniteUniform: negative weight");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("FiniteUniform: weights do not sum to 1");
}

int FiniteUniform::dim() const { return static_cast<int>(members.front().rows()); }

UnitaryEnsemble::UnitaryEnsemble(Variant v) : v_(std::move(v)) {
  if (auto* h = std::get_if<HaarEnsemble>(&v_); h && h->d < 1) throw DomainError("Haar: d must be >= 1");
  if (auto* p = std::get_if<PauliBasisEnsemble>(&v_); p && (p->n < 1 || p->n > kMaxPauliQubits)) {
    throw ResourceError("PauliBasis: n outside [1, 6]");
  }
  if (auto* c = std::get_if<CliffordEnsemble>(&v_); c && (c->n < 1 || c->n > kMaxCliffordQubits)) {
    throw ResourceError("Clifford: n outside [1, 5]");
  }
  if (auto* pp = std::get_if<ProductPower>(&v_); pp && (!pp->inner || pp->power < 1)) {
    throw DomainError("ProductPower: needs an inner ensemble and P >= 1");
  }
}

int UnitaryEnsemble::dim() const {
  struct {
    int operator()(const HaarEnsemble& h) const { return h.d; }
    int operator()(const FiniteUniform& f) const { return f.dim(); }
    int operator()(const PauliBasisEnsemble& p) const { return 1 << p.n; }
    int operator()(const CliffordEnsemble& c) const { return 1 << c.n; }
    int operator()(const ProductPower& p) const { return p.inner->dim(); }
  } visitor;
  return std::visit(visitor, v_);
}

std::string UnitaryEnsemble::name() const {
  struct {
    std::string operator()(const HaarEnsemble& h) const { return "haar(d=" + std::to_string(h.d) + ")"; }
    std::string operator()(const FiniteUniform& f) const {
      return "finite(" + std::to_string(f.members.size()) + " members, d=" + std::to_string(f.dim()) + ")";
    }
    std::string operator()(const PauliBasisEnsemble& p) const { return "pauli(n=" + std::to_string(p.n) + ")"; }
    std::string operator()(const CliffordEnsemble& c) const { return "clifford(n=" + std::to_string(c.n) + ")"; }
    std::string operator()(const ProductPower& p) const {
      return p.inner->name() + "^" + std::to_string(p.power);
    }
  } visitor;
  return std::visit(visitor, v_);
}

namespace {

std::size_t pick_weighted(const std::vector<double>& w, RandomStream& rng) {
  const double u = rng.uniform();
  double acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return w.size() - 1;
}

CMat pauli_from_index(std::uint64_t idx, int n) {
  std::string letters(static_cast<std::size_t>(n), 'I');
  for (int q = n - 1; q >= 0; --q) {
    letters[q] = "IXYZ"[idx % 4];
    idx /= 4;
  }
  return pauli_string(letters);
}

}  // namespace

CMat sample_from(const UnitaryEnsemble& e, RandomStream& rng) {
  struct Visitor {
    RandomStream& rng;
    CMat operator()(const HaarEnsemble& h) const { return sample_haar_unitary(h.d, rng); }
    CMat operator()(const FiniteUniform& f) const { return f.members[pick_weighted(f.weights, rng)]; }
    CMat operator()(const PauliBasisEnsemble& p) const {
      return pauli_from_index(rng.below(std::uint64_t{1} << (2 * p.n)), p.n);
    }
    CMat operator()(const CliffordEnsemble& c) const { return sample_clifford(c.n, rng).matrix; }
    CMat operator()(const ProductPower& p) const {
      CMat u = sample_from(*p.inner, rng);
      for (int i = 1; i < p.power; ++i) u = sample_from(*p.inner, rng) * u;
      return u;
    }
  };
  return std::visit(Visitor{rng}, e.variant());
}

std::optional<FiniteUniform> enumerate_members(const UnitaryEnsemble& e) {
  if (auto* f = std::get_if<FiniteUniform>(&e.variant())) return *f;
  if (auto* p = std::get_if<PauliBasisEnsemble>(&e.variant())) return FiniteUniform(pauli_basis(p->n));
  if (auto* c = std::get_if<CliffordEnsemble>(&e.variant()); c && c->n == 1) {
    std::vector<CMat> m;
    for (auto& el : clifford_group_1q()) m.push_back(el.matrix);
    return FiniteUniform(std::move(m));
  }
  return std::nullopt;
}

FiniteUniform load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest " + path.string());
  const auto j = nlohmann::json::parse(in);
  if (!j.contains("members") || !j["members"].is_array()) throw DomainError("manifest: missing members array");
  std::vector<CMat> members;
  std::vector<double> weights;
  bool any_weight = false;
  for (const auto& entry : j["members"]) {
    members.push_back(load_matrix(path.parent_path() / entry.at("file").get<std::string>()));
    if (entry.contains("weight")) {
      any_weight = true;
      weights.push_back(entry["weight"].get<double>());
    } else {
      weights.push_back(-1);
    }
  }
  if (!any_weight) weights.clear();
  return FiniteUniform(std::move(members), std::move(weights));
}

void save_manifest(const std::filesystem::path& path, const FiniteUniform& e) {
  nlohmann::json j;
  j["members"] = nlohmann::json::array();
  const std::string stem = path.stem().string();
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    const std::string file = stem + "_" + std::to_string(i) + ".json";
    save_matrix(path.parent_path() / file, e.members[i]);
    j["members"].push_back({{"file", file}, {"weight", e.weights[i]}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace haar
