#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "haar/clifford.hpp"
#include "haar/linalg.hpp"
#include "haar/rng.hpp"

namespace haar {

inline constexpr int kMaxPauliQubits = 6;

CMat sample_haar_unitary(int d, RandomStream& rng);
CMat sample_haar_state(int d, RandomStream& rng);  // d x 1

// {I, X, Y, Z}^{(x)n} in lexicographic order with qubit 0 most significant.
std::vector<CMat> pauli_basis(int n);
CMat pauli_string(const std::string& letters);  // e.g. "ZI"

class UnitaryEnsemble;

struct HaarEnsemble {
  int d;
};

struct FiniteUniform {
  std::vector<CMat> members;
  std::vector<double> weights;  // normalized; equal when built without weights

  FiniteUniform() = default;
  explicit FiniteUniform(std::vector<CMat> members, std::vector<double> weights = {});
  int dim() const;
};

struct PauliBasisEnsemble {
  int n;
};

struct CliffordEnsemble {
  int n;
};

struct ProductPower {
  std::shared_ptr<const UnitaryEnsemble> inner;
  int power;
};

class UnitaryEnsemble {
 public:
  using Variant = std::variant<HaarEnsemble, FiniteUniform, PauliBasisEnsemble, CliffordEnsemble, ProductPower>;

  UnitaryEnsemble(Variant v);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, UnitaryEnsemble> && !std::is_same_v<std::remove_cvref_t<T>, Variant> &&
             std::is_constructible_v<Variant, T>)
  UnitaryEnsemble(T&& alt)  // NOLINT(google-explicit-constructor)
      : UnitaryEnsemble(Variant(std::forward<T>(alt))) {}

  const Variant& variant() const { return v_; }
  int dim() const;
  std::string name() const;

 private:
  Variant v_;
};

CMat sample_from(const UnitaryEnsemble& e, RandomStream& rng);

// Finite list of members with weights, when the ensemble has one we can enumerate
// (FiniteUniform, PauliBasis, Clifford(1)).
std::optional<FiniteUniform> enumerate_members(const UnitaryEnsemble& e);

// Manifest: {"members": [{"file": "u0.json", "weight": 0.5}, ...]}; file paths are
// relative to the manifest's directory.
FiniteUniform load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const FiniteUniform& e);

}  // namespace haar
