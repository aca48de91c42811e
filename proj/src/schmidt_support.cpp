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

#include "qst/schmidt_support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qst {

namespace {

// Coefficients closer than this are one degenerate cluster; the left basis
// of a cluster is canonicalized so the decomposition is reproducible.
constexpr double kSchmidtClusterGap = 1e-10;

} // namespace

CVector SchmidtDecomposition::reconstruct() const {
    CVector psi = CVector::Zero(dimA * dimB);
    for (Index i = 0; i < rank(); ++i)
        psi += coefficients(i) * kron(CVector(leftBasis.col(i)), CVector(rightBasis.col(i)));
    return psi;
}

SchmidtDecomposition schmidt_decompose(const CVector &psi, Index dimA, Index dimB, Tolerance tol) {
    const CMatrix coeff = coefficient_matrix(psi, dimA, dimB);
    require_finite(coeff, "schmidt_decompose");
    if (psi.norm() == 0.0) throw Error("schmidt_decompose: zero vector has no Schmidt decomposition");

    Eigen::JacobiSVD<CMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector s = svd.singularValues();
    const double cutoff = tol.eps * static_cast<double>(std::max(dimA, dimB)) * s(0);
    Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;

    SchmidtDecomposition sd;
    sd.dimA = dimA;
    sd.dimB = dimB;
    sd.coefficients.resize(rank);
    sd.leftBasis = svd.matrixU().leftCols(rank);
    sd.rightBasis.resize(dimB, rank);

    Index start = 0;
    while (start < rank) {
        Index stop = start + 1;
        while (stop < rank && s(stop - 1) - s(stop) < kSchmidtClusterGap) ++stop;
        if (stop - start > 1) {
            sd.leftBasis.middleCols(start, stop - start) =
                canonical_basis(sd.leftBasis.middleCols(start, stop - start));
        } else {
            fix_phase(sd.leftBasis.col(start));
        }
        start = stop;
    }
    // beta_i = (<alpha_i| (x) Id) psi / lambda_i, which is C^T conj(alpha_i)
    for (Index i = 0; i < rank; ++i) {
        CVector b = coeff.transpose() * sd.leftBasis.col(i).conjugate();
        const double lambda = b.norm();
        sd.coefficients(i) = lambda;
        sd.rightBasis.col(i) = b / lambda;
    }
    return sd;
}

Index schmidt_rank(const CVector &psi, Index dimA, Index dimB, Tolerance tol) {
    return schmidt_decompose(psi, dimA, dimB, tol).rank();
}

double SupportData::max_residual() const {
    double worst = 0.0;
    for (const auto &r : commutator_residuals) worst = std::max(worst, r.residual);
    return worst;
}

double TransferCheck::max_residual() const {
    double worst = 0.0;
    for (const auto &r : residuals) worst = std::max(worst, r.residual);
    return worst;
}

SupportData support_of(const QuantumModel &m, Tolerance tol) {
    const auto sd = schmidt_decompose(m.psi, m.dimA, m.dimB, tol);
    SupportData out;
    out.PiA = sd.leftBasis * sd.leftBasis.adjoint();
    out.PiB = sd.rightBasis * sd.rightBasis.adjoint();
    out.WA = canonical_basis(sd.leftBasis);
    out.WB = canonical_basis(sd.rightBasis);

    out.centrally_supported = true;
    auto compress = [&](const Measurements &ops, const CMatrix &Pi, const CMatrix &W, Side side) {
        Measurements compressed;
        for (std::size_t x = 0; x < ops.size(); ++x) {
            auto &fam = compressed.emplace_back();
            for (std::size_t a = 0; a < ops[x].size(); ++a) {
                const CMatrix &op = ops[x][a];
                const double r = (Pi * op - op * Pi).norm();
                out.commutator_residuals.push_back(
                    {side, static_cast<int>(x), static_cast<int>(a), r});
                if (!tol.accepts(r)) out.centrally_supported = false;
                CMatrix t = W.adjoint() * op * W;
                fam.push_back(0.5 * (t + t.adjoint()));
            }
        }
        return compressed;
    };

    QuantumModel &s = out.supportModel;
    s.scenario = m.scenario;
    s.dimA = sd.rank();
    s.dimB = sd.rank();
    s.M = compress(m.M, out.PiA, out.WA, Side::A);
    s.N = compress(m.N, out.PiB, out.WB, Side::B);
    const CMatrix coeff = coefficient_matrix(m.psi, m.dimA, m.dimB);
    CVector psi = from_coefficient_matrix(out.WA.adjoint() * coeff * out.WB.conjugate());
    s.psi = psi / psi.norm();
    return out;
}

TransferCheck is_centrally_supported_via_transfer(const QuantumModel &m, Tolerance tol) {
    const CMatrix coeff = coefficient_matrix(m.psi, m.dimA, m.dimB);
    const double threshold = tol.eps * static_cast<double>(std::max(m.dimA, m.dimB));

    // A side: (M (x) Id) psi <-> M C and (Id (x) X) psi <-> C X^T, so solve C Y = M C.
    Eigen::CompleteOrthogonalDecomposition<CMatrix> codA(coeff.rows(), coeff.cols());
    codA.setThreshold(threshold);
    codA.compute(coeff);
    // B side: (Id (x) N) psi <-> C N^T and (X (x) Id) psi <-> X C, so solve C^T Z = N C^T.
    const CMatrix coeffT = coeff.transpose();
    Eigen::CompleteOrthogonalDecomposition<CMatrix> codB(coeffT.rows(), coeffT.cols());
    codB.setThreshold(threshold);
    codB.compute(coeffT);

    TransferCheck out;
    out.centrally_supported = true;
    for (std::size_t x = 0; x < m.M.size(); ++x)
        for (std::size_t a = 0; a < m.M[x].size(); ++a) {
            const CMatrix target = m.M[x][a] * coeff;
            const CMatrix Y = codA.solve(target);
            const double r = (target - coeff * Y).norm();
            out.residuals.push_back({Side::A, static_cast<int>(x), static_cast<int>(a), r, Y.transpose()});
            if (!tol.accepts(r)) out.centrally_supported = false;
        }
    for (std::size_t y = 0; y < m.N.size(); ++y)
        for (std::size_t b = 0; b < m.N[y].size(); ++b) {
            const CMatrix target = m.N[y][b] * coeffT;
            const CMatrix Z = codB.solve(target);
            const double r = (target - coeffT * Z).norm();
            out.residuals.push_back({Side::B, static_cast<int>(y), static_cast<int>(b), r, Z.transpose()});
            if (!tol.accepts(r)) out.centrally_supported = false;
        }
    return out;
}

namespace {

void require_full_rank(const SchmidtDecomposition &sd) {
    if (sd.dimA != sd.dimB || sd.rank() != sd.dimA) {
        std::ostringstream os;
        os << "transfer_operator: state must be full-rank (Schmidt rank " << sd.rank()
           << ", local dimensions " << sd.dimA << " and " << sd.dimB << ")";
        throw RankDeficientError(os.str());
    }
}

CMatrix schmidt_conjugate_transpose(const CMatrix &opInSchmidtBasis, const RVector &lambda) {
    // lambda X^T lambda^{-1}
    CMatrix out = opInSchmidtBasis.transpose();
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j) out(i, j) *= lambda(i) / lambda(j);
    return out;
}

} // namespace

CMatrix transfer_operator(const CMatrix &E, const SchmidtDecomposition &sd) {
    require_full_rank(sd);
    if (E.rows() != sd.dimA || E.cols() != sd.dimA) throw DimensionError("transfer_operator: operator shape");
    const CMatrix inSchmidt = sd.leftBasis.adjoint() * E * sd.leftBasis;
    return sd.rightBasis * schmidt_conjugate_transpose(inSchmidt, sd.coefficients) * sd.rightBasis.adjoint();
}

CMatrix transfer_operator_to_A(const CMatrix &F, const SchmidtDecomposition &sd) {
    require_full_rank(sd);
    if (F.rows() != sd.dimB || F.cols() != sd.dimB) throw DimensionError("transfer_operator: operator shape");
    const CMatrix inSchmidt = sd.rightBasis.adjoint() * F * sd.rightBasis;
    return sd.leftBasis * schmidt_conjugate_transpose(inSchmidt, sd.coefficients) * sd.leftBasis.adjoint();
}

} // namespace qst
