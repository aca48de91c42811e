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

#include "qst/cli.hpp"
#include "qst/schmidt_support.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace qst {

namespace {

struct CommandInfo {
    Command command;
    const char *name;
    int minInputs;
    int maxInputs;
};

constexpr std::array<CommandInfo, 15> kCommands{{
    {Command::Validate, "validate", 1, 1},
    {Command::Correlation, "correlation", 1, 1},
    {Command::Schmidt, "schmidt", 1, 1},
    {Command::Support, "support", 1, 1},
    {Command::Naimark, "naimark", 1, 1},
    {Command::RoundBinary, "round-binary", 1, 1},
    {Command::SyncVerify, "sync-verify", 1, 1},
    {Command::Xor, "xor", 1, 1},
    {Command::XorCertify, "xor-certify", 1, 1},
    {Command::StateEqual, "state-equal", 2, 2},
    {Command::FindDilation, "find-dilation", 2, 2},
    {Command::VerifyDilation, "verify-dilation", 3, 3},
    {Command::Irrep, "irrep", 1, 1},
    {Command::Cyclic, "cyclic", 1, 1},
    {Command::TiltedSos, "tilted-sos", 0, 1},
}};

const CommandInfo &info(Command c) {
    for (const auto &i : kCommands)
        if (i.command == c) return i;
    return kCommands[0];
}

class UsageError : public Error {
  public:
    using Error::Error;
};

std::string fmt(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6g", v);
    return buf.data();
}

std::string yes(bool b) { return b ? "true" : "false"; }

Json complex_json(Complex z) { return {z.real(), z.imag()}; }

struct Outcome {
    Json result = Json::object();
    bool passed = true;
    std::string summary;
    std::vector<std::string> lines;
};

bool is_correlation_doc(const Json &j) { return j.is_object() && j.contains("p") && !j.contains("kind"); }

Correlation correlation_input(const std::string &path, Tolerance tol) {
    const Json j = read_json_file(path);
    if (is_correlation_doc(j)) return correlation_from_json(j, path);
    const AnyModel m = model_from_json(j, path);
    return std::visit(
        [&](const auto &v) {
            require_valid(v, tol);
            return correlation_of(v, tol);
        },
        m);
}

QuantumModel tensor_input(const std::string &path) { return read_quantum_model(path); }

Json violations_json(const ValidationReport &r) {
    Json out = Json::array();
    for (const auto &v : r.violations)
        out.push_back({{"invariant", v.invariant}, {"location", v.location}, {"residual", v.residual}});
    return out;
}

Json verification_json(const VerificationReport &v) {
    Json residuals = Json::array();
    for (const auto &r : v.residuals)
        residuals.push_back({{"x", r.x}, {"a", r.a}, {"y", r.y}, {"b", r.b}, {"residual", r.residual}});
    Json out{{"passed", v.passed},
             {"isometry_residual_A", v.isometry_residual_A},
             {"isometry_residual_B", v.isometry_residual_B},
             {"aux_norm_residual", v.aux_norm_residual},
             {"max_residual", v.max_residual},
             {"residuals", residuals},
             {"schmidt_rank", v.schmidt_rank},
             {"target_schmidt_rank", v.target_schmidt_rank},
             {"aux_schmidt_rank", v.aux_schmidt_rank},
             {"rank_divides", v.rank_divides},
             {"rank_consistent", v.rank_consistent},
             {"target_centrally_supported", v.target_centrally_supported},
             {"moments_checked", v.moments_checked},
             {"moment_residual", v.moment_residual}};
    if (v.moment_mismatch) out["moment_mismatch"] = word_pair_to_json(*v.moment_mismatch);
    return out;
}

Json decomposition_json(const RepDecomposition &d, const std::vector<CMatrix> &gens, Tolerance tol) {
    Json blocks = Json::array();
    for (const auto &b : d.blocks) blocks.push_back({{"irrepDim", b.irrepDim}, {"multiplicity", b.multiplicity}});
    Json amb = Json::array();
    for (const auto &a : d.ambiguous) amb.push_back({{"first", a.first}, {"second", a.second}, {"residual", a.residual}});
    const auto basis = commutant_basis(gens, tol);
    return {{"dim", d.dim},
            {"blocks", blocks},
            {"ambiguous", amb},
            {"commutant_dimension", d.commutant_dimension()},
            {"commutant_basis_dimension", basis.size()},
            {"reassembly_defect", d.reassembly_defect(gens)},
            {"change_of_basis", matrix_to_json(d.change_of_basis())}};
}

Outcome cmd_validate(const RunConfig &c) {
    const std::string &path = c.inputPaths[0];
    const Json j = read_json_file(path);
    Outcome o;
    if (is_correlation_doc(j)) {
        const auto rep = validate_correlation(correlation_from_json(j, path), c.tol);
        o.result = {{"target", "correlation"}, {"valid", rep.valid()}, {"violations", violations_json(rep)}};
        o.passed = rep.valid();
    } else {
        const AnyModel m = model_from_json(j, path);
        ValidationReport rep;
        if (const auto *q = std::get_if<QuantumModel>(&m)) {
            rep = validate_quantum_model(*q, c.tol);
            o.result["target"] = "tensor model";
            if (rep.valid()) {
                const auto f = classify(*q, c.tol);
                o.result["flags"] = {{"projective", f.projective},
                                     {"full_rank", f.full_rank},
                                     {"binary", f.binary},
                                     {"synchronous_scenario", f.synchronous_scenario}};
                o.result["projective_state"] = is_projective_state(*q, c.tol);
            }
        } else {
            rep = validate_commuting_model(std::get<CommutingModel>(m), c.tol);
            o.result["target"] = "commuting model";
        }
        o.result["valid"] = rep.valid();
        o.result["violations"] = violations_json(rep);
        o.passed = rep.valid();
        for (const auto &v : rep.violations)
            o.lines.push_back("violation: " + v.invariant + " at " + v.location + ", residual " + fmt(v.residual));
    }
    o.summary = std::string("valid: ") + yes(o.passed);
    return o;
}

Outcome cmd_correlation(const RunConfig &c) {
    const AnyModel m = read_model(c.inputPaths[0]);
    CorrelationNotes notes;
    const Correlation p = std::visit(
        [&](const auto &v) {
            require_valid(v, c.tol);
            return correlation_of(v, c.tol, &notes);
        },
        m);
    Outcome o;
    o.result = {{"correlation", correlation_to_json(p)},
                {"notes",
                 {{"max_imaginary", notes.max_imaginary},
                  {"max_clamped", notes.max_clamped},
                  {"renormalized", notes.renormalized}}}};
    const Scenario &s = p.scenario();
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b)
                    o.lines.push_back("p(" + std::to_string(a) + "," + std::to_string(b) + "|" + std::to_string(x) +
                                      "," + std::to_string(y) + ") = " + fmt(p(a, b, x, y)));
    o.summary = "correlation of " + to_string(s);
    return o;
}

Outcome cmd_schmidt(const RunConfig &c) {
    const QuantumModel m = tensor_input(c.inputPaths[0]);
    const auto sd = schmidt_decompose(m.psi, m.dimA, m.dimB, c.tol);
    Outcome o;
    Json coeffs = Json::array();
    for (Index i = 0; i < sd.rank(); ++i) coeffs.push_back(sd.coefficients(i));
    o.result = {{"rank", sd.rank()},
                {"coefficients", coeffs},
                {"leftBasis", matrix_to_json(sd.leftBasis)},
                {"rightBasis", matrix_to_json(sd.rightBasis)},
                {"reconstruction_residual", (sd.reconstruct() - m.psi).norm()}};
    o.summary = "Schmidt rank " + std::to_string(sd.rank());
    std::string cl = "coefficients:";
    for (Index i = 0; i < sd.rank(); ++i) cl += " " + fmt(sd.coefficients(i));
    o.lines.push_back(cl);
    return o;
}

Outcome cmd_support(const RunConfig &c) {
    const QuantumModel m = tensor_input(c.inputPaths[0]);
    require_valid(m, c.tol);
    const auto sup = support_of(m, c.tol);
    const auto tr = is_centrally_supported_via_transfer(m, c.tol);
    Json comm = Json::array();
    for (const auto &r : sup.commutator_residuals)
        comm.push_back({{"side", to_string(r.side)}, {"input", r.input}, {"output", r.output}, {"residual", r.residual}});
    Json trans = Json::array();
    for (const auto &r : tr.residuals)
        trans.push_back({{"side", to_string(r.side)}, {"input", r.input}, {"output", r.output}, {"residual", r.residual}});
    Outcome o;
    const bool agree = sup.centrally_supported == tr.centrally_supported;
    o.result = {{"PiA", matrix_to_json(sup.PiA)},
                {"PiB", matrix_to_json(sup.PiB)},
                {"centrally_supported", sup.centrally_supported},
                {"commutator_residuals", comm},
                {"transfer", {{"centrally_supported", tr.centrally_supported}, {"residuals", trans}}},
                {"criteria_agree", agree},
                {"support_model", model_to_json(sup.supportModel)}};
    o.passed = agree;
    o.summary = "centrally supported: " + yes(sup.centrally_supported) + " (commutator), " +
                yes(tr.centrally_supported) + " (transfer)";
    o.lines.push_back("support dimensions " + std::to_string(sup.supportModel.dimA) + " x " +
                      std::to_string(sup.supportModel.dimB));
    return o;
}

Outcome cmd_naimark(const RunConfig &c) {
    const AnyModel m = read_model(c.inputPaths[0]);
    Outcome o;
    Json fams = Json::array();
    auto run_side = [&](const Measurements &ops, const char *side) {
        for (std::size_t x = 0; x < ops.size(); ++x) {
            const auto d = naimark_dilate(ops[x], c.tol);
            const bool ok = c.tol.accepts(d.isometry_residual) && c.tol.accepts(d.projection_residual) &&
                            c.tol.accepts(d.reproduction_residual);
            o.passed = o.passed && ok;
            fams.push_back({{"side", side},
                            {"input", x},
                            {"dilated_dim", d.dim * d.outcomes},
                            {"V", matrix_to_json(d.V)},
                            {"isometry_residual", d.isometry_residual},
                            {"projection_residual", d.projection_residual},
                            {"reproduction_residual", d.reproduction_residual}});
            o.lines.push_back(std::string(side) + "[" + std::to_string(x) + "]: dilated to dimension " +
                              std::to_string(d.dim * d.outcomes) + ", max residual " +
                              fmt(std::max({d.isometry_residual, d.projection_residual, d.reproduction_residual})));
        }
    };
    std::visit(
        [&](const auto &v) {
            run_side(v.M, "A");
            run_side(v.N, "B");
        },
        m);
    o.result = {{"families", fams}};
    o.summary = std::string("Naimark dilations ") + (o.passed ? "verified" : "FAILED");
    return o;
}

Outcome cmd_round_binary(const RunConfig &c) {
    const QuantumModel m = tensor_input(c.inputPaths[0]);
    Outcome o;
    try {
        const auto r = binary_round(m, c.assertExtremal, c.tol);
        Json eig = Json::array();
        for (const auto &e : r.eigenpairs)
            eig.push_back({{"side", to_string(e.side)},
                           {"input", e.input},
                           {"index", e.index},
                           {"eigenvalue", e.eigenvalue},
                           {"support_residual", e.support_residual},
                           {"condition", std::string(1, e.condition)}});
        o.result = {{"extremality_asserted", r.extremality_asserted},
                    {"model", model_to_json(r.model)},
                    {"witness", witness_to_json(r.witness)},
                    {"eigenpairs", eig},
                    {"correlation_difference", r.correlation_difference},
                    {"max_state_residual", r.max_state_residual},
                    {"projective", classify(r.model, c.tol).projective}};
        o.passed = c.tol.accepts(r.correlation_difference) && c.tol.accepts(r.max_state_residual);
        o.summary = std::string("rounded to a projective model; correlation difference ") +
                    fmt(r.correlation_difference);
        if (!c.assertExtremal) o.lines.emplace_back("note: extremality was not asserted");
    } catch (const LemmaViolated &e) {
        o.passed = false;
        o.result = {{"extremality_asserted", c.assertExtremal},
                    {"lemma_violated",
                     {{"side", to_string(e.side)},
                      {"input", e.input},
                      {"index", e.eigenIndex},
                      {"eigenvalue", e.eigenvalue},
                      {"residual", e.residual},
                      {"message", e.what()}}}};
        o.summary = std::string("LemmaViolated: ") + e.what();
    }
    return o;
}

Outcome cmd_sync_verify(const RunConfig &c) {
    const QuantumModel m = tensor_input(c.inputPaths[0]);
    Outcome o;
    try {
        const auto r = synchronous_verify(m, c.tol);
        Json swaps = Json::array();
        for (const auto &s : r.swap_residuals) swaps.push_back({{"x", s.x}, {"a", s.a}, {"residual", s.residual}});
        Json proj = Json::array();
        for (const auto &p : r.projectivity_residuals)
            proj.push_back({{"side", to_string(p.side)}, {"input", p.input}, {"output", p.output}, {"residual", p.residual}});
        const bool csComm = support_of(m, c.tol).centrally_supported;
        const bool csTransfer = is_centrally_supported_via_transfer(m, c.tol).centrally_supported;
        o.result = {{"synchronous", true},
                    {"synchronicity_violation", r.synchronicity_violation},
                    {"swap_residuals", swaps},
                    {"max_swap_residual", r.max_swap_residual},
                    {"full_rank", r.full_rank},
                    {"projectivity_residuals", proj},
                    {"max_projectivity_residual", r.max_projectivity_residual},
                    {"projective_state", r.projective_state},
                    {"projective_state_residual", r.projective_state_residual},
                    {"centrally_supported", {{"commutator", csComm}, {"transfer", csTransfer}}}};
        o.passed = r.passed && csComm && csTransfer;
        o.summary = std::string("synchronous checks ") + (o.passed ? "pass" : "FAIL");
        o.lines.push_back("max swap residual " + fmt(r.max_swap_residual));
        o.lines.push_back("projective state " + yes(r.projective_state));
    } catch (const NotSynchronous &e) {
        o.passed = false;
        o.result = {{"synchronous", false}, {"message", e.what()}};
        o.summary = e.what();
    }
    return o;
}

Outcome cmd_xor(const RunConfig &c) {
    const Correlation p = correlation_input(c.inputPaths[0], c.tol);
    const auto x = xor_of(p, c.tol);
    Outcome o;
    o.result = {{"c", real_matrix_to_json(x.c)}, {"unbiased", x.unbiased}, {"max_bias", x.max_bias}, {"rank", x.rank}};
    o.summary = "XOR correlation rank " + std::to_string(x.rank) + (x.unbiased ? ", unbiased" : ", biased");
    for (Index r = 0; r < x.c.rows(); ++r) {
        std::string line = "c[" + std::to_string(r) + "] =";
        for (Index k = 0; k < x.c.cols(); ++k) line += " " + fmt(x.c(r, k));
        o.lines.push_back(line);
    }
    return o;
}

Outcome cmd_xor_certify(const RunConfig &c) {
    const Correlation p = correlation_input(c.inputPaths[0], c.tol);
    std::vector<WeightedCorrelation> decomposition;
    if (c.decompositionPath)
        decomposition = decomposition_from_json(read_json_file(*c.decompositionPath), *c.decompositionPath);
    const auto cert = xor_selftest_certificate(p, c.assertExtremal, c.decompositionPath ? &decomposition : nullptr, c.tol);
    Outcome o;
    o.result = {{"granted", cert.granted},
                {"unbiased", cert.unbiased},
                {"extremality_asserted", cert.extremality_asserted},
                {"extremality_refuted", cert.extremality_refuted},
                {"extremality_decided", false},
                {"rank", cert.rank},
                {"even_rank", cert.even_rank},
                {"reasons", cert.reasons},
                {"summary", cert.summary}};
    if (!cert.refutation.empty()) o.result["refutation"] = cert.refutation;
    o.passed = cert.granted;
    o.summary = cert.summary;
    return o;
}

Outcome cmd_state_equal(const RunConfig &c) {
    const AnyModel m1 = read_model(c.inputPaths[0]);
    const AnyModel m2 = read_model(c.inputPaths[1]);
    std::visit([&](const auto &v) { require_valid(v, c.tol); }, m1);
    std::visit([&](const auto &v) { require_valid(v, c.tol); }, m2);
    const auto r = states_equal(m1, m2, c.tol);
    Outcome o;
    o.result = {{"equal", r.equal},
                {"cyclic_dim1", r.cyclic_dim1},
                {"cyclic_dim2", r.cyclic_dim2},
                {"gram_residual", r.gram_residual},
                {"intertwining_residual", r.intertwining_residual}};
    if (r.equal) {
        o.result["unitary"] = matrix_to_json(r.unitary);
    } else if (r.distinguishing) {
        o.result["distinguishing"] = {{"word", word_pair_to_json(*r.distinguishing)},
                                      {"value1", complex_json(r.value1)},
                                      {"value2", complex_json(r.value2)}};
        o.lines.push_back("distinguishing word " + to_string(r.distinguishing->first) + " (x) " +
                          to_string(r.distinguishing->second) + ": " + fmt(r.value1.real()) + " vs " +
                          fmt(r.value2.real()));
    }
    o.passed = r.equal;
    o.summary = "states equal: " + yes(r.equal);
    return o;
}

Outcome cmd_find_dilation(const RunConfig &c) {
    const QuantumModel S = tensor_input(c.inputPaths[0]);
    const QuantumModel T = tensor_input(c.inputPaths[1]);
    Outcome o;
    try {
        const auto w = find_local_dilation(S, T, c.seed, c.tol);
        const auto v = verify_local_dilation(S, T, w, c.tol);
        o.result = {{"found", true}, {"witness", witness_to_json(w)}, {"verification", verification_json(v)}};
        o.passed = v.passed;
        o.summary = "local dilation found; verification " + std::string(v.passed ? "passed" : "FAILED") +
                    " (max residual " + fmt(v.max_residual) + ")";
    } catch (const NotDilatable &e) {
        o.passed = false;
        o.result = {{"found", false}, {"reason", to_string(e.reason())}, {"message", e.what()}};
        o.summary = std::string("NotDilatable: ") + to_string(e.reason());
        o.lines.emplace_back(e.what());
    }
    return o;
}

Outcome cmd_verify_dilation(const RunConfig &c) {
    const QuantumModel S = tensor_input(c.inputPaths[0]);
    const QuantumModel T = tensor_input(c.inputPaths[1]);
    const DilationWitness w = witness_from_json(read_json_file(c.inputPaths[2]), c.inputPaths[2]);
    require_valid(S, c.tol);
    require_valid(T, c.tol);
    const auto v = verify_local_dilation(S, T, w, c.tol);
    Outcome o;
    o.result = verification_json(v);
    o.passed = v.passed;
    o.summary = std::string("local dilation ") + (v.passed ? "verified" : "REJECTED") + " (max residual " +
                fmt(v.max_residual) + ")";
    if (!v.rank_divides)
        o.lines.push_back("Schmidt-rank obstruction: target rank " + std::to_string(v.target_schmidt_rank) +
                          " does not divide " + std::to_string(v.schmidt_rank));
    return o;
}

Outcome cmd_irrep(const RunConfig &c) {
    const AnyModel m = read_model(c.inputPaths[0]);
    Outcome o;
    auto side = [&](const Measurements &ops, const char *name) {
        const auto gens = flatten(ops);
        const auto d = irrep_decompose(gens, c.seed, c.tol);
        Json j = decomposition_json(d, gens, c.tol);
        const bool ok = c.tol.accepts(j["reassembly_defect"].get<double>(), 1.0) &&
                        j["commutant_dimension"].get<Index>() == j["commutant_basis_dimension"].get<Index>();
        o.passed = o.passed && ok;
        std::string line = std::string(name) + ":";
        for (const auto &b : d.blocks)
            line += " (n=" + std::to_string(b.irrepDim) + ", m=" + std::to_string(b.multiplicity) + ")";
        o.lines.push_back(line);
        o.result[name] = std::move(j);
    };
    std::visit(
        [&](const auto &v) {
            require_valid(v, c.tol);
            side(v.M, "A");
            side(v.N, "B");
        },
        m);
    o.summary = std::string("irreducible decomposition ") + (o.passed ? "verified" : "FAILED");
    return o;
}

Outcome cmd_cyclic(const RunConfig &c) {
    const AnyModel m = read_model(c.inputPaths[0]);
    std::visit([&](const auto &v) { require_valid(v, c.tol); }, m);
    const auto cm = cyclic_restrict(m, c.tol);
    Json words = Json::array();
    for (const auto &w : cm.basisWords) words.push_back(word_pair_to_json(w));
    const Index original = std::visit(
        [](const auto &v) -> Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, QuantumModel>) return v.dimA * v.dimB;
            else return v.dim;
        },
        m);
    Outcome o;
    o.result = {{"dimension", cm.dimension()},
                {"original_dimension", original},
                {"unchanged", cm.unchanged},
                {"basis_words", words},
                {"model", model_to_json(cm.model)}};
    o.summary = "cyclic subspace dimension " + std::to_string(cm.dimension()) + " of " + std::to_string(original);
    return o;
}

Outcome cmd_tilted_sos(const RunConfig &c) {
    Outcome o;
    QuantumModel m;
    if (c.inputPaths.empty()) {
        const auto opt = optimize_tilted_chsh(c.alpha, c.seed);
        m = opt.model;
        Json params = Json::array();
        for (double p : opt.params) params.push_back(p);
        o.result["optimizer"] = {{"value", opt.value}, {"restarts", opt.restarts}, {"params", params}};
        o.result["model"] = model_to_json(m);
    } else {
        m = tensor_input(c.inputPaths[0]);
    }
    const auto cert = verify_tilted_sos(m, c.alpha, c.tol);
    Json res = Json::object();
    for (const auto &r : cert.state_residuals) res[r.name] = r.value;
    o.result["alpha"] = cert.alpha;
    o.result["lambda"] = cert.lambda;
    o.result["delta"] = cert.delta;
    o.result["f_eta"] = cert.f_eta;
    o.result["optimal"] = cert.optimal;
    o.result["identity_defect_1"] = cert.identity_defect_1;
    o.result["identity_defect_2"] = cert.identity_defect_2;
    o.result["state_residuals"] = res;
    o.result["max_state_residual"] = cert.max_state_residual;
    const double scale = cert.lambda * cert.lambda;
    const bool identities = c.tol.accepts(cert.identity_defect_1, scale) && c.tol.accepts(cert.identity_defect_2, scale);
    const bool residuals = !cert.optimal || c.tol.accepts(cert.max_state_residual, scale);
    o.passed = identities && residuals;
    o.summary = "f(eta) = " + fmt(cert.f_eta) + ", lambda = " + fmt(cert.lambda) +
                (cert.optimal ? " (optimal)" : " (not optimal)");
    o.lines.push_back("identity defects " + fmt(cert.identity_defect_1) + ", " + fmt(cert.identity_defect_2));
    o.lines.push_back("max state residual " + fmt(cert.max_state_residual));
    return o;
}

Outcome dispatch(const RunConfig &c) {
    switch (c.command) {
    case Command::Validate: return cmd_validate(c);
    case Command::Correlation: return cmd_correlation(c);
    case Command::Schmidt: return cmd_schmidt(c);
    case Command::Support: return cmd_support(c);
    case Command::Naimark: return cmd_naimark(c);
    case Command::RoundBinary: return cmd_round_binary(c);
    case Command::SyncVerify: return cmd_sync_verify(c);
    case Command::Xor: return cmd_xor(c);
    case Command::XorCertify: return cmd_xor_certify(c);
    case Command::StateEqual: return cmd_state_equal(c);
    case Command::FindDilation: return cmd_find_dilation(c);
    case Command::VerifyDilation: return cmd_verify_dilation(c);
    case Command::Irrep: return cmd_irrep(c);
    case Command::Cyclic: return cmd_cyclic(c);
    case Command::TiltedSos: return cmd_tilted_sos(c);
    }
    throw UsageError("unknown command");
}

const char *error_kind(const std::exception &e) {
    if (dynamic_cast<const ParseError *>(&e)) return "parse error";
    if (dynamic_cast<const DimensionError *>(&e)) return "dimension mismatch";
    if (dynamic_cast<const ScenarioError *>(&e)) return "scenario mismatch";
    if (dynamic_cast<const InvalidModel *>(&e)) return "invalid model";
    if (dynamic_cast<const UsageError *>(&e)) return "usage error";
    if (dynamic_cast<const AlgebraNotSemisimple *>(&e)) return "algebra not semisimple";
    return "error";
}

} // namespace

const char *to_string(Command c) noexcept { return info(c).name; }

std::optional<Command> parse_command(const std::string &name) {
    for (const auto &i : kCommands)
        if (name == i.name) return i.command;
    return std::nullopt;
}

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &i : kCommands) out.emplace_back(i.name);
        return out;
    }();
    return names;
}

Report run(const RunConfig &config) {
    Report rep;
    Json &doc = rep.document;
    doc["command"] = to_string(config.command);

    Json prov{{"seed", config.seed}, {"tolerance", config.tol.eps}, {"version", QST_VERSION}};
    if (config.command == Command::TiltedSos) prov["alpha"] = config.alpha;
    if (config.assertExtremal) prov["assert_extremal"] = true;
    Json inputs = Json::array();
    std::vector<std::string> allInputs = config.inputPaths;
    if (config.decompositionPath) allInputs.push_back(*config.decompositionPath);

    try {
        const auto &ci = info(config.command);
        const auto n = static_cast<int>(config.inputPaths.size());
        if (n < ci.minInputs || n > ci.maxInputs) {
            throw UsageError(std::string(ci.name) + " expects " + std::to_string(ci.minInputs) +
                             (ci.minInputs == ci.maxInputs ? "" : "-" + std::to_string(ci.maxInputs)) +
                             " input file(s), got " + std::to_string(n));
        }
        if (!(config.tol.eps > 0.0)) throw UsageError("--tol must be positive");
        for (const auto &p : allInputs) inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
        prov["inputs"] = inputs;
        doc["provenance"] = prov;

        Outcome o = dispatch(config);
        doc["result"] = std::move(o.result);
        doc["verdict"] = {{"passed", o.passed}, {"summary", o.summary}};
        rep.exitCode = o.passed ? kExitPass : kExitCheckFailed;
        rep.text.push_back(o.summary);
        for (auto &l : o.lines) rep.text.push_back(std::move(l));
    } catch (const std::exception &e) {
        prov["inputs"] = inputs;
        doc["provenance"] = prov;
        doc["error"] = {{"kind", error_kind(e)}, {"message", e.what()}};
        doc["verdict"] = {{"passed", false}, {"summary", std::string(error_kind(e)) + ": " + e.what()}};
        rep.exitCode = kExitInputError;
        rep.text = {std::string(error_kind(e)) + ": " + e.what()};
    }
    return rep;
}

std::string render(const Report &report, OutputFormat format) {
    if (format == OutputFormat::Json) return canonical_dump(report.document) + "\n";
    std::string out;
    for (const auto &l : report.text) out += l + "\n";
    return out;
}

} // namespace qst
