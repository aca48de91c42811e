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

#include "qst/special.hpp"
#include "qst/schmidt_support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qst {

SyncReport synchronous_verify(const QuantumModel &m, Tolerance tol) {
    if (!m.scenario.synchronous_shape())
        throw ScenarioError("synchronous_verify: scenario " + to_string(m.scenario) +
                            " does not have X = Y and A = B");
    require_valid(m, tol);
    const Correlation p = correlation_of(m, tol);
    SyncReport rep;
    for (int x = 0; x < m.scenario.nX; ++x)
        for (int a = 0; a < m.scenario.nA; ++a)
            for (int b = 0; b < m.scenario.nB; ++b)
                if (a != b) rep.synchronicity_violation = std::max(rep.synchronicity_violation, p(a, b, x, x));
    if (!tol.accepts(rep.synchronicity_violation)) {
        std::ostringstream os;
        os << "synchronous_verify: correlation is not synchronous (p(a,b|x,x) = " << rep.synchronicity_violation
           << " for some a != b)";
        throw NotSynchronous(os.str());
    }

    const CMatrix idA = identity(m.dimA);
    const CMatrix idB = identity(m.dimB);
    for (int x = 0; x < m.scenario.nX; ++x)
        for (int a = 0; a < m.scenario.nA; ++a) {
            const double r = ((kron(m.M[x][a], idB) - kron(idA, m.N[x][a])) * m.psi).norm();
            rep.swap_residuals.push_back({x, a, r});
            rep.max_swap_residual = std::max(rep.max_swap_residual, r);
        }

    rep.full_rank = classify(m, tol).full_rank;
    if (rep.full_rank) {
        auto push = [&](const Measurements &ops, Side side) {
            for (std::size_t x = 0; x < ops.size(); ++x)
                for (std::size_t a = 0; a < ops[x].size(); ++a) {
                    const CMatrix &e = ops[x][a];
                    const double r = (e * e - e).norm();
                    rep.projectivity_residuals.push_back({side, static_cast<int>(x), static_cast<int>(a), r});
                    rep.max_projectivity_residual = std::max(rep.max_projectivity_residual, r);
                }
        };
        push(m.M, Side::A);
        push(m.N, Side::B);
    }
    rep.projective_state_residual = projective_state_residual(m);
    rep.projective_state = is_projective_state(m, tol);
    rep.passed = tol.accepts(rep.max_swap_residual) && tol.accepts(rep.max_projectivity_residual) &&
                 rep.projective_state;
    return rep;
}

namespace {

std::string lemma_message(Side side, int input, Index idx, double ev, double res) {
    std::ostringstream os;
    os << "binary_round: eigenpair " << idx << " of " << (side == Side::A ? "M" : "N") << "[" << input
       << "][0] has eigenvalue " << ev << " strictly inside (0,1) and support residual " << res
       << "; the extremality assertion is false or the tolerance is too tight";
    return os.str();
}

} // namespace

LemmaViolated::LemmaViolated(Side s, int in, Index idx, double ev, double res)
    : Error(lemma_message(s, in, idx, ev, res)), side(s), input(in), eigenIndex(idx), eigenvalue(ev),
      residual(res) {}

BinaryRounding binary_round(const QuantumModel &m, bool extremality_asserted, Tolerance tol) {
    if (!m.scenario.binary()) throw ScenarioError("binary_round: scenario " + to_string(m.scenario) + " is not binary");
    require_valid(m, tol);
    BinaryRounding out;
    out.extremality_asserted = extremality_asserted;
    out.model = m;
    const CMatrix coeff = coefficient_matrix(m.psi, m.dimA, m.dimB);

    auto round_side = [&](const Measurements &ops, Index dim, Side side) {
        Measurements rounded;
        for (std::size_t x = 0; x < ops.size(); ++x) {
            const auto eig = hermitian_eig(0.5 * (ops[x][0] + ops[x][0].adjoint()), tol);
            CMatrix P0 = CMatrix::Zero(dim, dim);
            for (Index i = 0; i < eig.values.size(); ++i) {
                const CVector phi = eig.vectors.col(i);
                const double ev = eig.values(i);
                // (|phi><phi| (x) Id) psi <-> phi phi^dag C, (Id (x) |phi><phi|) psi <-> C conj(phi) phi^T
                const double res = side == Side::A ? (phi.adjoint() * coeff).norm() : (coeff * phi.conjugate()).norm();
                EigenpairCheck chk{side, static_cast<int>(x), i, ev, res, 'a'};
                if (tol.accepts(std::abs(ev - 1.0))) {
                    chk.condition = 'b';
                    P0 += phi * phi.adjoint();
                } else if (tol.accepts(std::abs(ev))) {
                    chk.condition = 'a';
                } else if (tol.accepts(res)) {
                    chk.condition = 'c';
                } else {
                    throw LemmaViolated(side, static_cast<int>(x), i, ev, res);
                }
                out.eigenpairs.push_back(chk);
            }
            P0 = 0.5 * (P0 + P0.adjoint());
            rounded.push_back({P0, identity(dim) - P0});
        }
        return rounded;
    };
    out.model.M = round_side(m.M, m.dimA, Side::A);
    out.model.N = round_side(m.N, m.dimB, Side::B);
    out.witness = identity_witness(m.dimA, m.dimB);

    out.correlation_difference = correlation_of(m, tol).max_difference(correlation_of(out.model, tol));
    const CMatrix idA = identity(m.dimA), idB = identity(m.dimB);
    for (int x = 0; x < m.scenario.nX; ++x)
        for (int a = 0; a < 2; ++a)
            out.max_state_residual = std::max(
                out.max_state_residual, (kron(CMatrix(m.M[x][a] - out.model.M[x][a]), idB) * m.psi).norm());
    for (int y = 0; y < m.scenario.nY; ++y)
        for (int b = 0; b < 2; ++b)
            out.max_state_residual = std::max(
                out.max_state_residual, (kron(idA, CMatrix(m.N[y][b] - out.model.N[y][b])) * m.psi).norm());
    return out;
}

XorCorrelation xor_of(const Correlation &p, Tolerance tol) {
    const Scenario &s = p.scenario();
    if (!s.binary()) throw ScenarioError("xor_of: scenario " + to_string(s) + " is not binary");
    XorCorrelation out;
    out.c = RMatrix::Zero(s.nX, s.nY);
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y) {
            out.c(x, y) = p(0, 0, x, y) - p(0, 1, x, y) - p(1, 0, x, y) + p(1, 1, x, y);
            const double aliceBias = (p(0, 0, x, y) + p(0, 1, x, y)) - (p(1, 0, x, y) + p(1, 1, x, y));
            const double bobBias = (p(0, 0, x, y) + p(1, 0, x, y)) - (p(0, 1, x, y) + p(1, 1, x, y));
            out.max_bias = std::max({out.max_bias, std::abs(aliceBias), std::abs(bobBias)});
        }
    out.unbiased = tol.accepts(out.max_bias);
    const CMatrix cc = out.c.cast<Complex>();
    const RVector sv = singular_values(cc);
    const double smax = sv.size() ? sv(0) : 0.0;
    out.rank = numerical_rank(cc, tol.eps * std::max(1.0, smax));
    return out;
}

XorCertificate xor_selftest_certificate(const Correlation &p, bool extremality_asserted,
                                        const std::vector<WeightedCorrelation> *decomposition, Tolerance tol) {
    const XorCorrelation c = xor_of(p, tol);
    XorCertificate cert;
    cert.unbiased = c.unbiased;
    cert.extremality_asserted = extremality_asserted;
    cert.rank = c.rank;
    cert.even_rank = c.rank % 2 == 0;

    if (decomposition && !decomposition->empty()) {
        double weightSum = 0.0;
        bool valid = true;
        std::ostringstream why;
        Correlation mix(p.scenario());
        std::vector<const Correlation *> used;
        for (std::size_t k = 0; k < decomposition->size(); ++k) {
            const auto &wc = (*decomposition)[k];
            if (!(wc.p.scenario() == p.scenario())) throw ScenarioError("decomposition component has a different scenario");
            if (wc.weight < -tol.eps) valid = false;
            if (!validate_correlation(wc.p, tol).valid()) valid = false;
            if (!xor_of(wc.p, tol).unbiased) valid = false;
            weightSum += wc.weight;
            for (std::size_t i = 0; i < mix.values().size(); ++i) mix.values()[i] += wc.weight * wc.p.values()[i];
            if (wc.weight > tol.eps) used.push_back(&wc.p);
        }
        const double reproduction = mix.max_difference(p);
        bool distinct = false;
        for (std::size_t i = 0; i < used.size(); ++i)
            for (std::size_t j = i + 1; j < used.size(); ++j)
                if (!tol.accepts(used[i]->max_difference(*used[j]))) distinct = true;
        if (valid && tol.accepts(std::abs(weightSum - 1.0)) && tol.accepts(reproduction) && distinct) {
            cert.extremality_refuted = true;
            why << "p is a proper convex combination of " << used.size()
                << " distinct unbiased correlations (reproduction residual " << reproduction << ")";
            cert.refutation = why.str();
        }
    }

    if (!cert.unbiased) cert.reasons.emplace_back("biased marginals");
    if (!extremality_asserted) cert.reasons.emplace_back("extremality not asserted");
    if (cert.extremality_refuted) cert.reasons.emplace_back("extremality refuted by decomposition");
    if (c.rank == 0) cert.reasons.emplace_back("zero rank");
    else if (!cert.even_rank) cert.reasons.emplace_back("odd rank " + std::to_string(c.rank));
    cert.granted = cert.reasons.empty();

    std::ostringstream os;
    os << "commuting operator self-test: ";
    if (cert.granted) {
        os << "granted (rank " << c.rank << ", unbiased, extremality asserted)";
    } else {
        os << "denied (";
        for (std::size_t i = 0; i < cert.reasons.size(); ++i) os << (i ? "; " : "") << cert.reasons[i];
        os << ")";
    }
    cert.summary = os.str();
    return cert;
}

TiltedChsh tilted_chsh_build(double alpha) {
    if (!(alpha >= 0.0 && alpha < 2.0)) {
        std::ostringstream os;
        os << "tilted_chsh_build: alpha " << alpha << " outside [0, 2)";
        throw Error(os.str());
    }
    TiltedChsh t;
    t.alpha = alpha;
    t.lambda = std::sqrt(8.0 + 2.0 * alpha * alpha);
    t.delta = std::sqrt(8.0 - 2.0 * alpha * alpha);
    const double l = t.lambda;
    const NcPoly a0 = NcPoly::variable(kA0), a1 = NcPoly::variable(kA1);
    const NcPoly b0 = NcPoly::variable(kB0), b1 = NcPoly::variable(kB1);
    const NcPoly one(1.0);

    t.eta = alpha * a0 + a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1;
    t.r[0] = l - t.eta;
    t.r[1] = alpha * a1 - a0 * b0 + a0 * b1 - a1 * b0 - a1 * b1;
    t.r[2] = 2.0 * a0 - (l / 2.0) * (b0 + b1) + (alpha / 2.0) * (a0 * b0 + a0 * b1 - a1 * b0 + a1 * b1);
    t.r[3] = 2.0 * a1 - (l / 2.0) * (b0 - b1) + (alpha / 2.0) * (a0 * b0 - a0 * b1 - a1 * b0 - a1 * b1);

    const NcPoly ca0 = one - a0 * a0, ca1 = one - a1 * a1;
    const NcPoly cb0 = one - b0 * b0, cb1 = one - b1 * b1;
    const NcPoly anti = a0 * a1 + a1 * a0;
    auto sq = [](const NcPoly &p) { return p * p; };
    t.s[0] = sq(alpha + 2.0 * b0) * ca0;
    t.s[1] = sq(alpha + 2.0 * b1) * ca0;
    t.s[2] = sq(alpha - 2.0 * b0) * ca1;
    t.s[3] = sq(alpha - 2.0 * b1) * ca1;
    t.s[4] = (2.0 + anti) * cb0;
    t.s[5] = (2.0 - anti) * cb1;
    const NcPoly tail0 = l - alpha * (a0 - a1);
    const NcPoly tail1 = l - alpha * (a0 + a1);
    t.s[6] = tail0 * cb0;
    t.s[7] = tail1 * cb1;

    const NcPoly quarter = 0.5 * (t.s[0] + t.s[1] + t.s[2] + t.s[3]);
    t.lhs = 2.0 * l * (l - t.eta);
    t.rhs1 = sq(t.r[0]) + sq(t.r[1]) + quarter + 2.0 * (t.s[4] + t.s[5]);
    t.rhs2 = sq(t.r[2]) + sq(t.r[3]) + quarter + 2.0 * ((2.0 - a0 * a0 - a1 * a1) * (2.0 - b0 * b0 - b1 * b1)) +
             0.5 * (sq(tail0) * cb0) + 0.5 * (sq(tail1) * cb1);
    return t;
}

TiltedChshCertificate verify_tilted_sos(const QuantumModel &m, double alpha, Tolerance tol) {
    const Scenario want{2, 2, 2, 2};
    if (!(m.scenario == want))
        throw ScenarioError("verify_tilted_sos: needs two binary inputs per side, got " + to_string(m.scenario));
    require_valid(m, tol);
    const TiltedChsh t = tilted_chsh_build(alpha);
    const Index D = m.dimA * m.dimB;
    const CMatrix idA = identity(m.dimA), idB = identity(m.dimB);
    const std::array<CMatrix, 4> vars{
        kron(CMatrix(m.M[0][0] - m.M[0][1]), idB), kron(CMatrix(m.M[1][0] - m.M[1][1]), idB),
        kron(idA, CMatrix(m.N[0][0] - m.N[0][1])), kron(idA, CMatrix(m.N[1][0] - m.N[1][1]))};
    auto f = [&](const NcPoly &p) { return m.psi.dot(p.evaluate(vars, D) * m.psi).real(); };

    TiltedChshCertificate cert;
    cert.alpha = alpha;
    cert.lambda = t.lambda;
    cert.delta = t.delta;
    cert.f_eta = f(t.eta);
    cert.optimal = tol.accepts(std::abs(cert.f_eta - t.lambda), t.lambda);
    const CMatrix lhs = t.lhs.evaluate(vars, D);
    cert.identity_defect_1 = op_norm(lhs - t.rhs1.evaluate(vars, D));
    cert.identity_defect_2 = op_norm(lhs - t.rhs2.evaluate(vars, D));
    for (int i = 0; i < 4; ++i) {
        const double v = f(t.r[static_cast<std::size_t>(i)] * t.r[static_cast<std::size_t>(i)]);
        cert.state_residuals.push_back({"r" + std::to_string(i + 1) + "^2", v});
    }
    for (int j = 0; j < 8; ++j) cert.state_residuals.push_back({"s" + std::to_string(j + 1), f(t.s[static_cast<std::size_t>(j)])});
    for (const auto &r : cert.state_residuals) cert.max_state_residual = std::max(cert.max_state_residual, std::abs(r.value));
    return cert;
}

} // namespace qst
