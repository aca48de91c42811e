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

#include "qst/dilations.hpp"
#include "qst/representations.hpp"
#include "qst/schmidt_support.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace qst {

NaimarkDilation naimark_dilate(std::span<const CMatrix> povm, Tolerance tol) {
    if (povm.empty()) throw InvalidModel("naimark_dilate: empty POVM");
    const Index d = povm[0].rows();
    const auto k = static_cast<Index>(povm.size());
    CMatrix total = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < povm.size(); ++i) {
        const CMatrix &m = povm[i];
        if (m.rows() != d || m.cols() != d) throw DimensionError("naimark_dilate: POVM elements differ in shape");
        require_finite(m, "naimark_dilate");
        const auto flags = structural_predicates(m, tol);
        if (!flags.positive) {
            std::ostringstream os;
            os << "naimark_dilate: element " << i << " is not positive (min eigenvalue " << flags.min_eigenvalue
               << ", hermitian residual " << flags.hermitian_residual << ")";
            throw InvalidModel(os.str());
        }
        total += m;
    }
    const double completeness = op_norm(total - identity(d));
    if (!tol.accepts(completeness)) {
        std::ostringstream os;
        os << "naimark_dilate: POVM completeness residual " << completeness;
        throw InvalidModel(os.str());
    }

    NaimarkDilation out;
    out.dim = d;
    out.outcomes = k;
    out.V = CMatrix::Zero(d * k, d);
    for (Index i = 0; i < k; ++i) {
        const CMatrix root = psd_sqrt(0.5 * (povm[i] + povm[i].adjoint()), tol);
        for (Index r = 0; r < d; ++r) out.V.row(r * k + i) = root.row(r);
    }
    for (Index i = 0; i < k; ++i) {
        CMatrix e = CMatrix::Zero(k, k);
        e(i, i) = 1.0;
        out.P.push_back(kron(identity(d), e));
    }
    out.isometry_residual = (out.V.adjoint() * out.V - identity(d)).norm();
    for (Index i = 0; i < k; ++i) {
        const CMatrix &p = out.P[static_cast<std::size_t>(i)];
        out.projection_residual = std::max(out.projection_residual, (p * p - p).norm());
        out.reproduction_residual =
            std::max(out.reproduction_residual, (out.V.adjoint() * p * out.V - povm[i]).norm());
    }
    return out;
}

DilationWitness identity_witness(Index dimA, Index dimB) {
    DilationWitness w;
    w.IA = identity(dimA);
    w.IB = identity(dimB);
    w.aux = CVector::Ones(1);
    return w;
}

DilationWitness compose_witnesses(const DilationWitness &first, const DilationWitness &second, Index midDimA,
                                  Index midDimB) {
    if (first.IA.rows() != midDimA * first.auxDimA || first.IB.rows() != midDimB * first.auxDimB ||
        second.IA.cols() != midDimA || second.IB.cols() != midDimB)
        throw DimensionError("compose_witnesses: intermediate dimensions do not match");
    DilationWitness out;
    // (I2 (x) Id_aux1) I1 : H -> H'' (x) aux2 (x) aux1
    out.IA = kron(second.IA, identity(first.auxDimA)) * first.IA;
    out.IB = kron(second.IB, identity(first.auxDimB)) * first.IB;
    out.auxDimA = second.auxDimA * first.auxDimA;
    out.auxDimB = second.auxDimB * first.auxDimB;
    const std::array<Index, 4> dims{second.auxDimA, second.auxDimB, first.auxDimA, first.auxDimB};
    const std::array<int, 4> perm{0, 2, 1, 3};
    out.aux = permute_tensor(kron(second.aux, first.aux), dims, perm);
    return out;
}

const char *to_string(NotDilatableReason r) noexcept {
    switch (r) {
    case NotDilatableReason::SchmidtRankObstruction: return "schmidt-rank obstruction";
    case NotDilatableReason::CorrelationMismatch: return "correlation mismatch";
    case NotDilatableReason::TargetReducible: return "target representation reducible";
    case NotDilatableReason::ComponentRepresentationMismatch: return "component representation mismatch";
    case NotDilatableReason::ComponentStateMismatch: return "component state mismatch";
    }
    return "unknown";
}

NotDilatable::NotDilatable(NotDilatableReason reason, const std::string &detail)
    : Error(std::string("not dilatable (") + to_string(reason) + "): " + detail), reason_(reason) {}

namespace {

void check_witness_shapes(const QuantumModel &S, const QuantumModel &T, const DilationWitness &w) {
    auto shape = [](const CMatrix &m) {
        return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
    };
    if (w.auxDimA < 1 || w.auxDimB < 1) throw DimensionError("verify_local_dilation: auxiliary dimensions must be positive");
    if (w.IA.cols() != S.dimA || w.IA.rows() != T.dimA * w.auxDimA) {
        throw DimensionError("verify_local_dilation: IA has shape " + shape(w.IA) + ", expected " +
                             std::to_string(T.dimA * w.auxDimA) + "x" + std::to_string(S.dimA));
    }
    if (w.IB.cols() != S.dimB || w.IB.rows() != T.dimB * w.auxDimB) {
        throw DimensionError("verify_local_dilation: IB has shape " + shape(w.IB) + ", expected " +
                             std::to_string(T.dimB * w.auxDimB) + "x" + std::to_string(S.dimB));
    }
    if (w.aux.size() != w.auxDimA * w.auxDimB) {
        throw DimensionError("verify_local_dilation: aux has length " + std::to_string(w.aux.size()) +
                             ", expected " + std::to_string(w.auxDimA * w.auxDimB));
    }
    if (!(S.scenario == T.scenario))
        throw ScenarioError("verify_local_dilation: scenarios differ: " + to_string(S.scenario) + " vs " +
                            to_string(T.scenario));
}

} // namespace

VerificationReport verify_local_dilation(const QuantumModel &S, const QuantumModel &T, const DilationWitness &w,
                                         Tolerance tol) {
    check_witness_shapes(S, T, w);
    VerificationReport rep;
    rep.isometry_residual_A = (w.IA.adjoint() * w.IA - identity(S.dimA)).norm();
    rep.isometry_residual_B = (w.IB.adjoint() * w.IB - identity(S.dimB)).norm();
    rep.aux_norm_residual = std::abs(w.aux.norm() - 1.0);

    const std::array<Index, 4> dims{T.dimA, T.dimB, w.auxDimA, w.auxDimB};
    const std::array<int, 4> perm{0, 2, 1, 3};
    const CMatrix IAB = kron(w.IA, w.IB);
    const CMatrix idA = identity(S.dimA), idB = identity(S.dimB);
    const CMatrix idTA = identity(T.dimA), idTB = identity(T.dimB);

    auto check = [&](const CMatrix &opA, const CMatrix &opB, const CMatrix &tA, const CMatrix &tB, int x, int a,
                     int y, int b) {
        const CVector lhs = IAB * (kron(opA, opB) * S.psi);
        const CVector rhs = permute_tensor(kron(CVector(kron(tA, tB) * T.psi), w.aux), dims, perm);
        const double r = (lhs - rhs).norm();
        rep.residuals.push_back({x, a, y, b, r});
        rep.max_residual = std::max(rep.max_residual, r);
    };

    check(idA, idB, idTA, idTB, -1, -1, -1, -1);
    for (int x = 0; x < S.scenario.nX; ++x)
        for (int a = 0; a < S.scenario.nA; ++a) check(S.M[x][a], idB, T.M[x][a], idTB, x, a, -1, -1);
    for (int y = 0; y < S.scenario.nY; ++y)
        for (int b = 0; b < S.scenario.nB; ++b) check(idA, S.N[y][b], idTA, T.N[y][b], -1, -1, y, b);
    for (int x = 0; x < S.scenario.nX; ++x)
        for (int y = 0; y < S.scenario.nY; ++y)
            for (int a = 0; a < S.scenario.nA; ++a)
                for (int b = 0; b < S.scenario.nB; ++b) check(S.M[x][a], S.N[y][b], T.M[x][a], T.N[y][b], x, a, y, b);

    rep.schmidt_rank = schmidt_rank(S.psi, S.dimA, S.dimB, tol);
    rep.target_schmidt_rank = schmidt_rank(T.psi, T.dimA, T.dimB, tol);
    rep.aux_schmidt_rank = w.aux.norm() > 0.0 ? schmidt_rank(w.aux, w.auxDimA, w.auxDimB, tol) : 0;
    rep.rank_divides = rep.schmidt_rank % rep.target_schmidt_rank == 0;
    rep.rank_consistent = rep.schmidt_rank == rep.target_schmidt_rank * rep.aux_schmidt_rank;

    rep.target_centrally_supported = support_of(T, tol).centrally_supported;
    if (rep.target_centrally_supported) {
        rep.moments_checked = true;
        for (const auto &wp : enumerate_word_pairs(S.scenario, 3)) {
            const Complex v1 = evaluate_moment(S, wp.first, wp.second);
            const Complex v2 = evaluate_moment(T, wp.first, wp.second);
            const double d = std::abs(v1 - v2);
            rep.moment_residual = std::max(rep.moment_residual, d);
            if (!rep.moment_mismatch && !tol.equal(v1, v2)) rep.moment_mismatch = wp;
        }
    }

    rep.passed = tol.accepts(rep.isometry_residual_A) && tol.accepts(rep.isometry_residual_B) &&
                 tol.accepts(rep.aux_norm_residual) && tol.accepts(rep.max_residual) && rep.rank_consistent &&
                 !rep.moment_mismatch;
    return rep;
}

namespace {

struct SideBlocks {
    RepDecomposition dec;
    CMatrix Q;
    std::vector<Index> offset; ///< first column of each block in Q
};

SideBlocks decompose_side(const Measurements &ops, std::uint64_t seed, Tolerance tol) {
    const auto gens = flatten(ops);
    SideBlocks s;
    s.dec = irrep_decompose(gens, seed, tol);
    s.Q = s.dec.change_of_basis();
    Index off = 0;
    for (const auto &b : s.dec.blocks) {
        s.offset.push_back(off);
        off += b.irrepDim * b.multiplicity;
    }
    return s;
}

bool irreducible_on_whole_space(const RepDecomposition &d) {
    return d.blocks.size() == 1 && d.blocks[0].multiplicity == 1 && d.blocks[0].irrepDim == d.dim;
}

} // namespace

DilationWitness find_local_dilation(const QuantumModel &S, const QuantumModel &T, std::uint64_t seed,
                                    Tolerance tol) {
    if (!(S.scenario == T.scenario))
        throw ScenarioError("find_local_dilation: scenarios differ: " + to_string(S.scenario) + " vs " +
                            to_string(T.scenario));
    require_valid(S, tol);
    require_valid(T, tol);

    // Local isometries preserve Schmidt rank, so rank(psi) = rank(psi~) * rank(aux).
    const Index rank = schmidt_rank(S.psi, S.dimA, S.dimB, tol);
    const Index targetRank = schmidt_rank(T.psi, T.dimA, T.dimB, tol);
    if (rank % targetRank != 0) {
        std::ostringstream os;
        os << "Schmidt rank " << targetRank << " of the target state does not divide Schmidt rank " << rank
           << " of the source state";
        throw NotDilatable(NotDilatableReason::SchmidtRankObstruction, os.str());
    }

    const double corrDiff = correlation_of(S, tol).max_difference(correlation_of(T, tol));
    if (!tol.accepts(corrDiff)) {
        std::ostringstream os;
        os << "correlations differ by " << corrDiff;
        throw NotDilatable(NotDilatableReason::CorrelationMismatch, os.str());
    }

    const SideBlocks tA = decompose_side(T.M, seed, tol);
    const SideBlocks tB = decompose_side(T.N, seed, tol);
    if (!irreducible_on_whole_space(tA.dec) || !irreducible_on_whole_space(tB.dec)) {
        std::ostringstream os;
        os << "target representations split into " << tA.dec.blocks.size() << " (A) and " << tB.dec.blocks.size()
           << " (B) blocks";
        throw NotDilatable(NotDilatableReason::TargetReducible, os.str());
    }
    const auto targetGensA = flatten(T.M);
    const auto targetGensB = flatten(T.N);

    const SideBlocks sA = decompose_side(S.M, seed, tol);
    const SideBlocks sB = decompose_side(S.N, seed, tol);
    const auto nA = sA.dec.blocks.size();
    const auto nB = sB.dec.blocks.size();

    // psi in the block bases: C' = QA^dag C conj(QB)
    const CMatrix coeff = sA.Q.adjoint() * coefficient_matrix(S.psi, S.dimA, S.dimB) * sB.Q.conjugate();
    auto block = [&](std::size_t i, std::size_t j) {
        const auto &bi = sA.dec.blocks[i];
        const auto &bj = sB.dec.blocks[j];
        return CMatrix(coeff.block(sA.offset[i], sB.offset[j], bi.irrepDim * bi.multiplicity,
                                   bj.irrepDim * bj.multiplicity));
    };

    std::vector<bool> inA(nA, false), inB(nB, false);
    for (std::size_t i = 0; i < nA; ++i)
        for (std::size_t j = 0; j < nB; ++j)
            if (block(i, j).norm() > tol.eps) inA[i] = inB[j] = true;

    auto intertwiner = [&](const RepBlock &b, const std::vector<CMatrix> &to, const char *side, std::size_t idx) {
        if (b.irrepDim == static_cast<Index>(to[0].rows())) {
            if (auto U = find_intertwiner(b.irrepGenerators, to, tol)) return *U;
        }
        std::ostringstream os;
        os << "block " << idx << " on side " << side << " (dimension " << b.irrepDim
           << ") is not equivalent to the target representation";
        throw NotDilatable(NotDilatableReason::ComponentRepresentationMismatch, os.str());
    };
    std::vector<CMatrix> UA(nA), UB(nB);
    for (std::size_t i = 0; i < nA; ++i)
        if (inA[i]) UA[i] = intertwiner(sA.dec.blocks[i], targetGensA, "A", i);
    for (std::size_t j = 0; j < nB; ++j)
        if (inB[j]) UB[j] = intertwiner(sB.dec.blocks[j], targetGensB, "B", j);

    const CMatrix targetCoeff = coefficient_matrix(T.psi, T.dimA, T.dimB);
    std::vector<std::vector<CMatrix>> c(nA, std::vector<CMatrix>(nB));
    for (std::size_t i = 0; i < nA; ++i)
        for (std::size_t j = 0; j < nB; ++j) {
            if (!inA[i] || !inB[j]) continue;
            const Index mi = sA.dec.blocks[i].multiplicity;
            const Index mj = sB.dec.blocks[j].multiplicity;
            const CMatrix R =
                kron(UA[i], identity(mi)) * block(i, j) * kron(UB[j], identity(mj)).transpose();
            CMatrix cij = CMatrix::Zero(mi, mj);
            for (Index ja = 0; ja < mi; ++ja)
                for (Index jb = 0; jb < mj; ++jb)
                    for (Index a = 0; a < T.dimA; ++a)
                        for (Index b = 0; b < T.dimB; ++b)
                            cij(ja, jb) += std::conj(targetCoeff(a, b)) * R(a * mi + ja, b * mj + jb);
            const double r = (R - kron(targetCoeff, cij)).norm();
            if (!tol.accepts(r, R.norm())) {
                std::ostringstream os;
                os << "block (" << i << ", " << j << ") of the state is not psi~ (x) c; residual " << r;
                throw NotDilatable(NotDilatableReason::ComponentStateMismatch, os.str());
            }
            c[i][j] = std::move(cij);
        }

    // phase convention: first non-negligible entry of each A block row, then
    // of each B block column, is real positive
    double cmax = 0.0;
    for (const auto &row : c)
        for (const auto &m : row)
            if (m.size() > 0) cmax = std::max(cmax, m.cwiseAbs().maxCoeff());
    const double negligible = 1e-8 * cmax;
    auto first_entry = [&](auto &&visit) -> std::optional<Complex> {
        std::optional<Complex> found;
        visit([&](Complex v) {
            if (!found && std::abs(v) > negligible) found = v;
        });
        return found;
    };
    for (std::size_t i = 0; i < nA; ++i) {
        if (!inA[i]) continue;
        auto e = first_entry([&](auto &&f) {
            for (std::size_t j = 0; j < nB; ++j)
                for (Index r = 0; r < c[i][j].rows(); ++r)
                    for (Index s = 0; s < c[i][j].cols(); ++s) f(c[i][j](r, s));
        });
        if (!e) continue;
        const Complex phase = std::conj(*e) / std::abs(*e);
        UA[i] *= phase;
        for (auto &m : c[i]) m *= phase;
    }
    for (std::size_t j = 0; j < nB; ++j) {
        if (!inB[j]) continue;
        auto e = first_entry([&](auto &&f) {
            for (std::size_t i = 0; i < nA; ++i)
                for (Index r = 0; r < c[i][j].rows(); ++r)
                    for (Index s = 0; s < c[i][j].cols(); ++s) f(c[i][j](r, s));
        });
        if (!e) continue;
        const Complex phase = std::conj(*e) / std::abs(*e);
        UB[j] *= phase;
        for (std::size_t i = 0; i < nA; ++i) c[i][j] *= phase;
    }

    // auxiliary layout: m_i slots for reached blocks, n_i * m_i for parked ones
    auto aux_layout = [](const SideBlocks &s, const std::vector<bool> &reached, std::vector<Index> &auxOffset) {
        Index total = 0;
        for (std::size_t i = 0; i < s.dec.blocks.size(); ++i) {
            auxOffset.push_back(total);
            const auto &b = s.dec.blocks[i];
            total += reached[i] ? b.multiplicity : b.irrepDim * b.multiplicity;
        }
        return total;
    };
    std::vector<Index> auxOffA, auxOffB;
    DilationWitness w;
    w.auxDimA = aux_layout(sA, inA, auxOffA);
    w.auxDimB = aux_layout(sB, inB, auxOffB);

    auto assemble = [](const SideBlocks &s, const std::vector<bool> &reached, const std::vector<CMatrix> &U,
                       const std::vector<Index> &auxOffset, Index targetDim, Index auxDim) {
        CMatrix images = CMatrix::Zero(targetDim * auxDim, s.Q.cols());
        for (std::size_t i = 0; i < s.dec.blocks.size(); ++i) {
            const auto &b = s.dec.blocks[i];
            const Index m = b.multiplicity;
            for (Index a = 0; a < b.irrepDim; ++a)
                for (Index j = 0; j < m; ++j) {
                    const Index col = s.offset[i] + a * m + j;
                    if (reached[i]) {
                        images.col(col) = kron(CVector(U[i].col(a)), basis_vector(auxDim, auxOffset[i] + j));
                    } else {
                        images.col(col) =
                            kron(basis_vector(targetDim, 0), basis_vector(auxDim, auxOffset[i] + a * m + j));
                    }
                }
        }
        return CMatrix(images * s.Q.adjoint());
    };
    w.IA = assemble(sA, inA, UA, auxOffA, T.dimA, w.auxDimA);
    w.IB = assemble(sB, inB, UB, auxOffB, T.dimB, w.auxDimB);

    CMatrix auxCoeff = CMatrix::Zero(w.auxDimA, w.auxDimB);
    for (std::size_t i = 0; i < nA; ++i)
        for (std::size_t j = 0; j < nB; ++j)
            if (inA[i] && inB[j]) auxCoeff.block(auxOffA[i], auxOffB[j], c[i][j].rows(), c[i][j].cols()) = c[i][j];
    w.aux = from_coefficient_matrix(auxCoeff);
    return w;
}

} // namespace qst
