// Copyright 2026 The qselftest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qst/cli.hpp"
#include "qst/dilations.hpp"
#include "qst/io.hpp"
#include "qst/models.hpp"
#include "qst/representations.hpp"
#include "qst/schmidt_support.hpp"
#include "qst/special.hpp"

namespace py = pybind11;
using namespace qst;

namespace {

constexpr double kDefaultEps = 1e-9;

Tolerance tol_of(double eps) { return Tolerance(eps); }

py::array_t<double> correlation_array(const Correlation &p) {
    const auto &s = p.scenario();
    py::array_t<double> out({s.nA, s.nB, s.nX, s.nY});
    std::copy(p.values().begin(), p.values().end(), out.mutable_data());
    return out;
}

Correlation correlation_from_array(const Scenario &s, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    Correlation p(s);
    if (a.ndim() != 4 || a.shape(0) != s.nA || a.shape(1) != s.nB || a.shape(2) != s.nX || a.shape(3) != s.nY)
        throw DimensionError("correlation array must have shape (nA, nB, nX, nY)");
    std::copy(a.data(), a.data() + a.size(), p.values().begin());
    return p;
}

py::list violations(const ValidationReport &r) {
    py::list out;
    for (const auto &v : r.violations) out.append(py::make_tuple(v.invariant, v.location, v.residual));
    return out;
}

std::string word_text(const Word &w) { return to_string(w); }

} // namespace

PYBIND11_MODULE(_qselftest, m) {
    m.doc() = "Finite-dimensional self-testing toolkit: models, dilations, certificates";
    m.attr("__version__") = QST_VERSION;

    auto base = py::register_exception<Error>(m, "QstError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<InvalidModel>(m, "InvalidModel", base.ptr());
    py::register_exception<ScenarioError>(m, "ScenarioError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<AlgebraNotSemisimple>(m, "AlgebraNotSemisimple", base.ptr());
    py::register_exception<NotSynchronous>(m, "NotSynchronous", base.ptr());
    py::register_exception<LemmaViolated>(m, "LemmaViolated", base.ptr());
    py::register_exception<NotDilatable>(m, "NotDilatable", base.ptr());

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def(py::init([](int nX, int nY, int nA, int nB) {
                 Scenario s{nX, nY, nA, nB};
                 s.validate();
                 return s;
             }),
             py::arg("nX"), py::arg("nY"), py::arg("nA"), py::arg("nB"))
        .def_readwrite("nX", &Scenario::nX)
        .def_readwrite("nY", &Scenario::nY)
        .def_readwrite("nA", &Scenario::nA)
        .def_readwrite("nB", &Scenario::nB)
        .def("__eq__", [](const Scenario &a, const Scenario &b) { return a == b; })
        .def("__repr__", [](const Scenario &s) { return "Scenario" + to_string(s); });

    py::class_<QuantumModel>(m, "QuantumModel")
        .def(py::init<>())
        .def_readwrite("scenario", &QuantumModel::scenario)
        .def_readwrite("dimA", &QuantumModel::dimA)
        .def_readwrite("dimB", &QuantumModel::dimB)
        .def_readwrite("M", &QuantumModel::M)
        .def_readwrite("N", &QuantumModel::N)
        .def_readwrite("psi", &QuantumModel::psi);

    py::class_<CommutingModel>(m, "CommutingModel")
        .def(py::init<>())
        .def_readwrite("scenario", &CommutingModel::scenario)
        .def_readwrite("dim", &CommutingModel::dim)
        .def_readwrite("M", &CommutingModel::M)
        .def_readwrite("N", &CommutingModel::N)
        .def_readwrite("psi", &CommutingModel::psi);

    py::class_<Correlation>(m, "Correlation")
        .def(py::init<Scenario>())
        .def(py::init(&correlation_from_array), py::arg("scenario"), py::arg("table"))
        .def_property_readonly("scenario", &Correlation::scenario)
        .def("__call__", [](const Correlation &p, int a, int b, int x, int y) { return p(a, b, x, y); })
        .def("to_array", &correlation_array, "Table indexed [a, b, x, y].")
        .def("max_difference", &Correlation::max_difference);

    m.def("validate_quantum_model",
          [](const QuantumModel &q, double eps) { return violations(validate_quantum_model(q, tol_of(eps))); },
          py::arg("model"), py::arg("eps") = kDefaultEps,
          "List of (invariant, location, residual); empty when valid.");
    m.def("validate_commuting_model",
          [](const CommutingModel &c, double eps) { return violations(validate_commuting_model(c, tol_of(eps))); },
          py::arg("model"), py::arg("eps") = kDefaultEps);
    m.def("correlation_of", [](const QuantumModel &q, double eps) { return correlation_of(q, tol_of(eps)); },
          py::arg("model"), py::arg("eps") = kDefaultEps);
    m.def("correlation_of", [](const CommutingModel &c, double eps) { return correlation_of(c, tol_of(eps)); },
          py::arg("model"), py::arg("eps") = kDefaultEps);
    m.def("as_commuting", &as_commuting);
    m.def("tensor_with_aux", &tensor_with_aux, py::arg("model"), py::arg("aux"), py::arg("aux_dim_a"),
          py::arg("aux_dim_b"));
    m.def("apply_local_unitaries", &apply_local_unitaries);
    m.def("is_projective_state", [](const QuantumModel &q, double eps) { return is_projective_state(q, tol_of(eps)); },
          py::arg("model"), py::arg("eps") = kDefaultEps);

    py::class_<SchmidtDecomposition>(m, "SchmidtDecomposition")
        .def_readonly("coefficients", &SchmidtDecomposition::coefficients)
        .def_readonly("left_basis", &SchmidtDecomposition::leftBasis)
        .def_readonly("right_basis", &SchmidtDecomposition::rightBasis)
        .def_property_readonly("rank", &SchmidtDecomposition::rank)
        .def("reconstruct", &SchmidtDecomposition::reconstruct);
    m.def("schmidt_decompose",
          [](const CVector &psi, Index dA, Index dB, double eps) { return schmidt_decompose(psi, dA, dB, tol_of(eps)); },
          py::arg("psi"), py::arg("dim_a"), py::arg("dim_b"), py::arg("eps") = kDefaultEps);
    m.def("centrally_supported",
          [](const QuantumModel &q, double eps) {
              const auto viaCommutator = support_of(q, tol_of(eps));
              const auto viaTransfer = is_centrally_supported_via_transfer(q, tol_of(eps));
              return py::dict(py::arg("commutator") = viaCommutator.centrally_supported,
                              py::arg("transfer") = viaTransfer.centrally_supported,
                              py::arg("commutator_residual") = viaCommutator.max_residual(),
                              py::arg("transfer_residual") = viaTransfer.max_residual());
          },
          py::arg("model"), py::arg("eps") = kDefaultEps,
          "Both tests for a centrally supported model, with their largest residuals.");
    m.def("support_model", [](const QuantumModel &q, double eps) { return support_of(q, tol_of(eps)).supportModel; },
          py::arg("model"), py::arg("eps") = kDefaultEps);
    m.def("transfer_operator", &transfer_operator, py::arg("E"), py::arg("schmidt"));

    py::class_<NaimarkDilation>(m, "NaimarkDilation")
        .def_readonly("V", &NaimarkDilation::V)
        .def_readonly("P", &NaimarkDilation::P)
        .def_readonly("isometry_residual", &NaimarkDilation::isometry_residual)
        .def_readonly("projection_residual", &NaimarkDilation::projection_residual)
        .def_readonly("reproduction_residual", &NaimarkDilation::reproduction_residual);
    m.def("naimark_dilate",
          [](const std::vector<CMatrix> &povm, double eps) { return naimark_dilate(povm, tol_of(eps)); },
          py::arg("povm"), py::arg("eps") = kDefaultEps);

    m.def("commutant_basis",
          [](const std::vector<CMatrix> &g, double eps) { return commutant_basis(g, tol_of(eps)); },
          py::arg("generators"), py::arg("eps") = kDefaultEps);
    py::class_<RepBlock>(m, "RepBlock")
        .def_readonly("irrep_dim", &RepBlock::irrepDim)
        .def_readonly("multiplicity", &RepBlock::multiplicity)
        .def_readonly("change_of_basis", &RepBlock::changeOfBasis)
        .def_readonly("irrep_generators", &RepBlock::irrepGenerators);
    py::class_<RepDecomposition>(m, "RepDecomposition")
        .def_readonly("blocks", &RepDecomposition::blocks)
        .def("change_of_basis", &RepDecomposition::change_of_basis)
        .def("commutant_dimension", &RepDecomposition::commutant_dimension)
        .def("reassembly_defect",
             [](const RepDecomposition &d, const std::vector<CMatrix> &g) { return d.reassembly_defect(g); });
    m.def("irrep_decompose",
          [](const std::vector<CMatrix> &g, std::uint64_t seed, double eps) {
              return irrep_decompose(g, seed, tol_of(eps));
          },
          py::arg("generators"), py::arg("seed") = 0, py::arg("eps") = kDefaultEps);

    m.def("cyclic_dimension",
          [](const QuantumModel &q, double eps) { return cyclic_restrict(q, tol_of(eps)).dimension(); },
          py::arg("model"), py::arg("eps") = kDefaultEps);
    m.def("states_equal",
          [](const QuantumModel &a, const QuantumModel &b, double eps) {
              const auto r = states_equal(AnyModel(a), AnyModel(b), tol_of(eps));
              py::dict out(py::arg("equal") = r.equal, py::arg("cyclic_dims") = py::make_tuple(r.cyclic_dim1, r.cyclic_dim2));
              if (r.equal) out["unitary"] = r.unitary;
              if (r.distinguishing) {
                  out["distinguishing"] = py::make_tuple(word_text(r.distinguishing->first), word_text(r.distinguishing->second));
                  out["values"] = py::make_tuple(r.value1, r.value2);
              }
              return out;
          },
          py::arg("model1"), py::arg("model2"), py::arg("eps") = kDefaultEps);

    py::class_<DilationWitness>(m, "DilationWitness")
        .def(py::init<>())
        .def_readwrite("IA", &DilationWitness::IA)
        .def_readwrite("IB", &DilationWitness::IB)
        .def_readwrite("aux", &DilationWitness::aux)
        .def_readwrite("aux_dim_a", &DilationWitness::auxDimA)
        .def_readwrite("aux_dim_b", &DilationWitness::auxDimB);
    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("passed", &VerificationReport::passed)
        .def_readonly("max_residual", &VerificationReport::max_residual)
        .def_readonly("schmidt_rank", &VerificationReport::schmidt_rank)
        .def_readonly("target_schmidt_rank", &VerificationReport::target_schmidt_rank)
        .def_readonly("aux_schmidt_rank", &VerificationReport::aux_schmidt_rank)
        .def_readonly("rank_divides", &VerificationReport::rank_divides);
    m.def("find_local_dilation",
          [](const QuantumModel &s, const QuantumModel &t, std::uint64_t seed, double eps) {
              return find_local_dilation(s, t, seed, tol_of(eps));
          },
          py::arg("source"), py::arg("target"), py::arg("seed") = 0, py::arg("eps") = kDefaultEps);
    m.def("verify_local_dilation",
          [](const QuantumModel &s, const QuantumModel &t, const DilationWitness &w, double eps) {
              return verify_local_dilation(s, t, w, tol_of(eps));
          },
          py::arg("source"), py::arg("target"), py::arg("witness"), py::arg("eps") = kDefaultEps);

    m.def("binary_round",
          [](const QuantumModel &q, bool asserted, double eps) {
              const auto r = binary_round(q, asserted, tol_of(eps));
              return py::make_tuple(r.model, r.witness, r.max_state_residual);
          },
          py::arg("model"), py::arg("extremality_asserted") = true, py::arg("eps") = kDefaultEps,
          "(projective model, identity witness, max state residual); raises LemmaViolated.");
    m.def("synchronous_verify",
          [](const QuantumModel &q, double eps) {
              const auto r = synchronous_verify(q, tol_of(eps));
              return py::dict(py::arg("passed") = r.passed, py::arg("max_swap_residual") = r.max_swap_residual,
                              py::arg("full_rank") = r.full_rank,
                              py::arg("max_projectivity_residual") = r.max_projectivity_residual,
                              py::arg("projective_state") = r.projective_state);
          },
          py::arg("model"), py::arg("eps") = kDefaultEps);

    m.def("xor_of",
          [](const Correlation &p, double eps) {
              const auto x = xor_of(p, tol_of(eps));
              return py::make_tuple(x.c, x.rank, x.unbiased);
          },
          py::arg("correlation"), py::arg("eps") = kDefaultEps, "(c matrix, rank, unbiased)");
    m.def("xor_selftest_certificate",
          [](const Correlation &p, bool asserted, std::optional<std::vector<std::pair<double, Correlation>>> dec,
             double eps) {
              std::vector<WeightedCorrelation> parts;
              if (dec)
                  for (auto &[w, c] : *dec) parts.push_back({w, c});
              const auto c = xor_selftest_certificate(p, asserted, dec ? &parts : nullptr, tol_of(eps));
              return py::dict(py::arg("granted") = c.granted, py::arg("rank") = c.rank,
                              py::arg("unbiased") = c.unbiased, py::arg("refuted") = c.extremality_refuted,
                              py::arg("reasons") = c.reasons, py::arg("summary") = c.summary);
          },
          py::arg("correlation"), py::arg("extremality_asserted") = false, py::arg("decomposition") = py::none(),
          py::arg("eps") = kDefaultEps);

    m.def("verify_tilted_sos",
          [](const QuantumModel &q, double alpha, double eps) {
              const auto c = verify_tilted_sos(q, alpha, tol_of(eps));
              py::dict residuals;
              for (const auto &r : c.state_residuals) residuals[py::str(r.name)] = r.value;
              return py::dict(py::arg("lambda") = c.lambda, py::arg("f_eta") = c.f_eta, py::arg("optimal") = c.optimal,
                              py::arg("identity_defects") = py::make_tuple(c.identity_defect_1, c.identity_defect_2),
                              py::arg("state_residuals") = residuals);
          },
          py::arg("model"), py::arg("alpha"), py::arg("eps") = kDefaultEps);
    m.def("optimize_tilted_chsh",
          [](double alpha, std::uint64_t seed, int restarts) {
              const auto o = optimize_tilted_chsh(alpha, seed, restarts);
              return py::make_tuple(o.model, o.value);
          },
          py::arg("alpha"), py::arg("seed") = 0, py::arg("restarts") = 8, "(model, f(eta))");

    m.def("read_model", [](const std::string &path) { return read_quantum_model(path); });
    m.def("read_correlation", &read_correlation);
    m.def("model_to_json", [](const QuantumModel &q) { return canonical_dump(model_to_json(q)); });

    m.def("run_cli",
          [](const std::string &command, const std::vector<std::string> &inputs, double eps, std::uint64_t seed,
             bool assertExtremal, std::optional<std::string> decomposition, double alpha) {
              const auto c = parse_command(command);
              if (!c) throw Error("unknown command: " + command);
              RunConfig cfg;
              cfg.command = *c;
              cfg.inputPaths = inputs;
              cfg.tol = Tolerance(eps);
              cfg.seed = seed;
              cfg.assertExtremal = assertExtremal;
              cfg.decompositionPath = std::move(decomposition);
              cfg.alpha = alpha;
              const Report r = run(cfg);
              return py::make_tuple(r.exitCode, canonical_dump(r.document));
          },
          py::arg("command"), py::arg("inputs"), py::arg("eps") = kDefaultEps, py::arg("seed") = 0,
          py::arg("assert_extremal") = false, py::arg("decomposition") = py::none(), py::arg("alpha") = 0.0,
          "(exit code, canonical JSON report)");
}
