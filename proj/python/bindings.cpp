#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "haar/haar.hpp"

namespace py = pybind11;
using namespace haar;

namespace {

UnitaryEnsemble ensemble_from(const py::object& source, int d, int n) {
  if (py::isinstance<py::str>(source)) {
    const auto name = source.cast<std::string>();
    if (name == "haar") return HaarEnsemble{d};
    if (name == "pauli1") return PauliBasisEnsemble{1};
    if (name == "pauliN") return PauliBasisEnsemble{n};
    if (name == "clifford1") return CliffordEnsemble{1};
    if (name == "cliffordN") return CliffordEnsemble{n};
    return load_manifest(name);
  }
  return FiniteUniform(source.cast<std::vector<CMat>>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Haar-measure moments, unitary designs and their applications";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

  m.def("weingarten", [](int k, int d) {
    const auto t = weingarten_table(k, d);
    py::dict out;
    for (std::size_t i = 0; i < t->perms.size(); ++i) out[py::tuple(py::cast(t->perms[i].mapping()))] = t->coefficients[i];
    return out;
  }, py::arg("k"), py::arg("d"), "Wg(pi, d) keyed by the one-line form of pi (0-based).");

  m.def("gram_matrix", &gram_matrix, py::arg("k"), py::arg("d"));
  m.def("moment", &moment_apply_exact, py::arg("o"), py::arg("k"), py::arg("d"),
        "E[U^{(x)k} O U^dagger{(x)k}] over Haar U.");
  m.def("first_moment", &first_moment_closed_form, py::arg("o"), py::arg("d"));
  m.def("second_moment", &second_moment_closed_form, py::arg("o"), py::arg("d"));
  m.def("vectorized_moment_operator", &vectorized_moment_operator, py::arg("k"), py::arg("d"));
  m.def("entry_moment", [](std::vector<int> l, std::vector<int> i, std::vector<int> mm, std::vector<int> j, int d) {
    return entry_moment(l, i, mm, j, d);
  }, py::arg("rows"), py::arg("cols"), py::arg("conj_rows"), py::arg("conj_cols"), py::arg("d"));

  m.def("sym_dim", &sym_dim, py::arg("d"), py::arg("k"));
  m.def("asym_dim", &asym_dim, py::arg("d"), py::arg("k"));
  m.def("p_sym", [](int d, int k) { return CMat(p_sym(d, k)); }, py::arg("d"), py::arg("k"));
  m.def("p_asym", [](int d, int k) { return CMat(p_asym(d, k)); }, py::arg("d"), py::arg("k"));

  m.def("sample_haar_unitary", [](int d, std::uint64_t seed, std::uint64_t stream) {
    RandomStream rng(seed, stream);
    return sample_haar_unitary(d, rng);
  }, py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("sample_haar_state", [](int d, std::uint64_t seed, std::uint64_t stream) {
    RandomStream rng(seed, stream);
    return sample_haar_state(d, rng);
  }, py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("sample_clifford", [](int n, std::uint64_t seed, std::uint64_t stream) {
    RandomStream rng(seed, stream);
    const CliffordElement c = sample_clifford(n, rng);
    return py::make_tuple(c.matrix, circuit_to_string(c.circuit));
  }, py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0, "Returns (matrix, circuit text).");
  m.def("pauli_basis", &pauli_basis, py::arg("n"));

  py::class_<DesignReport>(m, "DesignReport")
      .def_readonly("k", &DesignReport::k)
      .def_readonly("d", &DesignReport::d)
      .def_readonly("frame_potential", &DesignReport::frame_potential)
      .def_readonly("frame_potential_se", &DesignReport::frame_potential_se)
      .def_readonly("haar_frame_potential", &DesignReport::haar_frame_potential)
      .def_readonly("l2_deviation", &DesignReport::l2_deviation)
      .def_readonly("tpe_norm", &DesignReport::tpe_norm)
      .def_readonly("derived_bounds", &DesignReport::derived_bounds)
      .def_property_readonly("verdict", [](const DesignReport& r) { return to_string(r.verdict); })
      .def_property_readonly("mode", [](const DesignReport& r) { return to_string(r.mode); });

  m.def("haar_frame_potential", &haar_frame_potential, py::arg("k"), py::arg("d"));
  m.def("frame_potential", [](const std::vector<CMat>& members, int k) {
    return frame_potential_exact(FiniteUniform(members), k);
  }, py::arg("members"), py::arg("k"));
  m.def("certify", [](const py::object& ensemble, int k, int d, int n, std::size_t samples, std::uint64_t seed) {
    CertifyParams p;
    const UnitaryEnsemble e = ensemble_from(ensemble, d, n);
    if (samples > 0 || !has_exact_moments(e)) {
      p.mode = Mode::MonteCarlo;
      p.samples = samples > 0 ? samples : 10000;
      p.with_tpe = false;
    }
    p.seed = seed;
    py::gil_scoped_release release;
    return certify_design(e, k, p);
  }, py::arg("ensemble"), py::arg("k"), py::arg("d") = 2, py::arg("n") = 1, py::arg("samples") = 0,
     py::arg("seed") = 0,
     "Ensemble is a built-in name (haar, pauli1, pauliN, clifford1, cliffordN), a manifest path or a list of unitaries.");

  m.def("expected_purity", &expected_purity, py::arg("dA"), py::arg("dB"));
  m.def("page_entropy", &page_entropy, py::arg("dA"), py::arg("dB"));
  m.def("expectation_moment", &expectation_moment, py::arg("o"), py::arg("k"));
  m.def("entanglement_fidelity", [](const std::vector<CMat>& kraus) {
    return entanglement_fidelity(ChannelKraus(kraus));
  }, py::arg("kraus"));
  m.def("average_gate_fidelity", [](const std::vector<CMat>& kraus, const CMat& target) {
    return average_gate_fidelity(ChannelKraus(kraus), target);
  }, py::arg("kraus"), py::arg("target"));

  m.def("shadow_variance", [](const CMat& rho, const CMat& o, const std::string& mode) {
    if (mode == "bound") return shadow_variance_bound(o);
    if (mode == "exact") return shadow_variance_exact(rho, o);
    throw DomainError("shadow_variance: mode must be bound or exact");
  }, py::arg("rho"), py::arg("o"), py::arg("mode") = "exact");
  m.def("sample_complexity", &sample_complexity, py::arg("m"), py::arg("eps"), py::arg("delta"),
        py::arg("max_variance"));
}
