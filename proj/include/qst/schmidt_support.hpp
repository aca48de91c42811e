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

#pragma once

// Schmidt analysis of bipartite vectors, support projections and the support
// model, and the two equivalent tests for a centrally supported model.

#include <string>
#include <vector>

#include "qst/models.hpp"
#include "qst/numerics.hpp"

namespace qst {

struct SchmidtDecomposition {
    Index dimA = 0;
    Index dimB = 0;
    RVector coefficients; ///< strictly positive, descending
    CMatrix leftBasis;    ///< dimA x rank, orthonormal columns |alpha_i>
    CMatrix rightBasis;   ///< dimB x rank, orthonormal columns |beta_i>

    [[nodiscard]] Index rank() const noexcept { return coefficients.size(); }
    [[nodiscard]] CVector reconstruct() const;
};

/**
 * psi = sum_i lambda_i |alpha_i> (x) |beta_i>. Singular values at or below
 * tol.eps * max(dimA, dimB) * (leading singular value) are dropped. Within a
 * cluster of equal coefficients the left basis is canonical_basis() of the
 * cluster and the right basis follows from |beta_i> = (<alpha_i| (x) Id) psi / lambda_i.
 */
[[nodiscard]] SchmidtDecomposition schmidt_decompose(const CVector &psi, Index dimA, Index dimB,
                                                     Tolerance tol = {});

[[nodiscard]] Index schmidt_rank(const CVector &psi, Index dimA, Index dimB, Tolerance tol = {});

struct CommutatorResidual {
    Side side = Side::A;
    int input = 0;
    int output = 0;
    double residual = 0.0;
};

struct SupportData {
    CMatrix PiA;
    CMatrix PiB;
    CMatrix WA; ///< dimA x rank isometry onto the support of rho_A
    CMatrix WB;
    QuantumModel supportModel;
    bool centrally_supported = false;
    std::vector<CommutatorResidual> commutator_residuals; ///< ||[Pi, M]|| per operator

    [[nodiscard]] double max_residual() const;
};

/**
 * Support projections, the compressed support model and the commutator test
 * [Pi_A, M^x_a] = [Pi_B, N^y_b] = 0. The support bases WA/WB are the canonical
 * bases of the projection ranges, so a full-rank model is its own support model.
 */
[[nodiscard]] SupportData support_of(const QuantumModel &m, Tolerance tol = {});

struct TransferResidual {
    Side side = Side::A;
    int input = 0;
    int output = 0;
    double residual = 0.0; ///< min_X ||(M (x) Id - Id (x) X) psi|| (or the B-side analogue)
    CMatrix transfer;      ///< minimizer X
};

struct TransferCheck {
    bool centrally_supported = false;
    std::vector<TransferResidual> residuals;
    [[nodiscard]] double max_residual() const;
};

/// Least-squares transfer test: every M (x) Id psi must equal Id (x) X psi for some X.
[[nodiscard]] TransferCheck is_centrally_supported_via_transfer(const QuantumModel &m,
                                                                Tolerance tol = {});

class RankDeficientError : public Error {
  public:
    using Error::Error;
};

/**
 * For a full-rank state, the operator E^ on H_B with (E (x) Id) psi = (Id (x) E^) psi:
 * E^ = lambda E^T lambda^{-1} in the Schmidt bases, mapped back to the
 * standard basis of H_B.
 */
[[nodiscard]] CMatrix transfer_operator(const CMatrix &E, const SchmidtDecomposition &sd);

/// Mirror image: operator F^ on H_A with (Id (x) F) psi = (F^ (x) Id) psi.
[[nodiscard]] CMatrix transfer_operator_to_A(const CMatrix &F, const SchmidtDecomposition &sd);

} // namespace qst
