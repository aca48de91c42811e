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

/**
 * @file dilations.hpp
 * @brief Naimark dilation, checking local dilations S >= S~, and the
 * constructive search for a local dilation onto an irreducible ideal model.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qst/models.hpp"
#include "qst/numerics.hpp"

namespace qst {

struct NaimarkDilation {
    Index dim = 0;      ///< dimension of the original space H
    Index outcomes = 0; ///< k
    CMatrix V;          ///< (dim*k) x dim isometry, V = sum_i sqrt(M_i) (x) |i>
    std::vector<CMatrix> P; ///< P_i = Id (x) |i><i|

    double isometry_residual = 0.0;    ///< ||V^dag V - Id||
    double projection_residual = 0.0;  ///< max_i ||P_i^2 - P_i||
    double reproduction_residual = 0.0; ///< max_i ||V^dag P_i V - M_i||
};

/// Throws InvalidModel if `povm` is not a POVM within tolerance.
[[nodiscard]] NaimarkDilation naimark_dilate(std::span<const CMatrix> povm, Tolerance tol = {});

/**
 * Isometries I_A : H_A -> H~_A (x) H_A^aux and I_B : H_B -> H~_B (x) H_B^aux
 * together with a unit vector aux on H_A^aux (x) H_B^aux.
 */
struct DilationWitness {
    CMatrix IA;
    CMatrix IB;
    CVector aux;
    Index auxDimA = 1;
    Index auxDimB = 1;
};

/// Witness for S >= S with identity isometries and a scalar auxiliary state.
[[nodiscard]] DilationWitness identity_witness(Index dimA, Index dimB);

/**
 * Given S >= S' (first) and S' >= S'' (second), the witness for S >= S''.
 * The new auxiliary factors are ordered (second's aux) (x) (first's aux).
 */
[[nodiscard]] DilationWitness compose_witnesses(const DilationWitness &first,
                                                const DilationWitness &second, Index midDimA,
                                                Index midDimB);

/// Residual of one instance of the dilation equation. Input -1 means the
/// corresponding side carries the identity.
struct DilationResidual {
    int x = -1;
    int a = -1;
    int y = -1;
    int b = -1;
    double residual = 0.0;
};

struct VerificationReport {
    bool passed = false;
    double isometry_residual_A = 0.0;
    double isometry_residual_B = 0.0;
    double aux_norm_residual = 0.0;
    std::vector<DilationResidual> residuals;
    double max_residual = 0.0;

    Index schmidt_rank = 0;
    Index target_schmidt_rank = 0;
    Index aux_schmidt_rank = 0;
    bool rank_divides = false;    ///< target rank divides the source rank
    bool rank_consistent = false; ///< rank = target rank * aux rank

    bool target_centrally_supported = false;
    bool moments_checked = false;
    double moment_residual = 0.0;
    std::optional<WordPair> moment_mismatch;
};

/**
 * Check (I_A (x) I_B)(M^x_a (x) N^y_b) psi = (M~^x_a (x) N~^y_b psi~) (x) aux for
 * every index, for each side alone and for the identity. The right-hand side
 * lives on H~_A H~_B aux_A aux_B and is reordered to H~_A aux_A H~_B aux_B
 * before comparison. When S~ is centrally supported, moments of total word
 * length up to 3 are also compared. Throws DimensionError on shape mismatch.
 */
[[nodiscard]] VerificationReport verify_local_dilation(const QuantumModel &S, const QuantumModel &target,
                                                       const DilationWitness &w, Tolerance tol = {});

enum class NotDilatableReason {
    SchmidtRankObstruction,
    CorrelationMismatch,
    TargetReducible,
    ComponentRepresentationMismatch,
    ComponentStateMismatch,
};

[[nodiscard]] const char *to_string(NotDilatableReason r) noexcept;

class NotDilatable : public Error {
  public:
    NotDilatable(NotDilatableReason reason, const std::string &detail);
    [[nodiscard]] NotDilatableReason reason() const noexcept { return reason_; }

  private:
    NotDilatableReason reason_;
};

/**
 * Build a witness for S >= S~ where S~ has an irreducible associated
 * representation on each side. Both local representations of S are split into
 * isotypic blocks, psi is cut into blocks psi_ij, and each ψ-supported block
 * is mapped onto S~ by intertwiners U_i, U_j with (U_i (x) U_j) psi_ij = psi~ (x) c_ij.
 * Blocks that psi never reaches are parked as |e_0> (x) H_i (x) K_i in the
 * auxiliary space. Intertwiner phases are chosen so the first non-negligible
 * auxiliary entry of each block row (A) and block column (B) is real positive.
 * Throws NotDilatable with the reason on failure.
 */
[[nodiscard]] DilationWitness find_local_dilation(const QuantumModel &S, const QuantumModel &target,
                                                  std::uint64_t seed, Tolerance tol = {});

} // namespace qst
