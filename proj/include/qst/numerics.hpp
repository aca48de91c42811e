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
 * @file numerics.hpp
 * @brief Dense complex linear algebra used by every other module.
 *
 * Composite indices of a bipartite space H_A (x) H_B are i_A * dim_B + i_B
 * throughout the library, which is exactly the index layout produced by
 * kron().
 */

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qst {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class NonHermitianError : public Error {
  public:
    using Error::Error;
};

/**
 * Absolute-plus-relative tolerance. Two quantities x, y are considered equal
 * when |x - y| <= eps * (1 + max(|x|, |y|)); a residual r measured against a
 * reference of size s is accepted when r <= eps * (1 + s).
 */
struct Tolerance {
    double eps = 1e-9;

    constexpr Tolerance() = default;
    explicit Tolerance(double e);

    [[nodiscard]] bool accepts(double residual, double scale = 0.0) const noexcept {
        return residual <= eps * (1.0 + scale);
    }
    [[nodiscard]] bool equal(double x, double y) const noexcept;
    [[nodiscard]] bool equal(Complex x, Complex y) const noexcept;
};

enum class Side { A, B };

[[nodiscard]] const char *to_string(Side s) noexcept;

/// Frobenius norm; the residual norm used everywhere in reports.
[[nodiscard]] inline double norm(const CMatrix &m) { return m.norm(); }

/// Spectral norm (largest singular value).
[[nodiscard]] double op_norm(const CMatrix &m);

/// Throws Error if any entry is NaN or infinite.
void require_finite(const CMatrix &m, const std::string &what);

[[nodiscard]] CMatrix kron(const CMatrix &a, const CMatrix &b);
[[nodiscard]] CVector kron(const CVector &a, const CVector &b);

[[nodiscard]] CMatrix identity(Index d);
[[nodiscard]] CVector basis_vector(Index d, Index i);

/// Outer product |u><v|.
[[nodiscard]] CMatrix outer(const CVector &u, const CVector &v);

/**
 * Reduced operator of a bipartite operator. `keep == Side::A` traces out B and
 * returns the dimA x dimA block; `keep == Side::B` traces out A.
 */
[[nodiscard]] CMatrix partial_trace(const CMatrix &rho, Index dimA, Index dimB, Side keep);

/// Reshape a bipartite vector into its dimA x dimB coefficient matrix.
[[nodiscard]] CMatrix coefficient_matrix(const CVector &psi, Index dimA, Index dimB);
[[nodiscard]] CVector from_coefficient_matrix(const CMatrix &c);

struct EigenDecomposition {
    RVector values;  ///< descending
    CMatrix vectors; ///< columns, matched with values
};

/**
 * Eigendecomposition of a Hermitian matrix with a reproducible basis: inside
 * each cluster of eigenvalues separated by less than 1e-8 the eigenvectors are
 * replaced by canonical_basis() of the cluster, and every column is phase-fixed.
 */
[[nodiscard]] EigenDecomposition hermitian_eig(const CMatrix &h, Tolerance tol = {});

/// Gap below which neighbouring eigenvalues are treated as one cluster.
inline constexpr double kEigenClusterGap = 1e-8;

/**
 * Deterministic orthonormal basis of the column span of an orthonormal frame:
 * standard basis vectors are projected onto the span in index order (with
 * pivoting against near-null projections) and Gram-Schmidt orthonormalized.
 * The result depends only on the subspace, not on the frame that spans it.
 */
[[nodiscard]] CMatrix canonical_basis(const CMatrix &frame);

/// Multiply the column by a phase so its first non-negligible entry is real positive.
void fix_phase(Eigen::Ref<CVector> v);

/**
 * Orthonormal basis of span(vs). A vector is dropped when its residual after
 * projection has norm < tol.eps * (1 + max input norm).
 */
[[nodiscard]] std::vector<CVector> orthonormalize(std::span<const CVector> vs, Tolerance tol);

/// Columns version of orthonormalize().
[[nodiscard]] CMatrix orthonormalize_columns(const CMatrix &cols, Tolerance tol);

/// Orthonormal basis (columns) of the null space; singular values <= threshold count as zero.
[[nodiscard]] CMatrix null_space(const CMatrix &a, double threshold);

[[nodiscard]] RVector singular_values(const CMatrix &a);

/// Number of singular values strictly above `threshold`.
[[nodiscard]] Index numerical_rank(const CMatrix &a, double threshold);

/// Square root of a positive semidefinite matrix; small negative eigenvalues are clamped.
[[nodiscard]] CMatrix psd_sqrt(const CMatrix &m, Tolerance tol = {});

/// Unitary polar factor of a square matrix.
[[nodiscard]] CMatrix unitary_polar(const CMatrix &m);

struct StructureFlags {
    bool hermitian = false;
    bool positive = false;
    bool projection = false;
    bool isometry = false;
    bool unitary = false;

    double hermitian_residual = 0.0;  ///< ||m - m^dag||
    double min_eigenvalue = 0.0;      ///< of the Hermitian part (0 for non-square)
    double projection_residual = 0.0; ///< ||m^2 - m||
    double isometry_residual = 0.0;   ///< ||m^dag m - Id||
    double coisometry_residual = 0.0; ///< ||m m^dag - Id||
};

[[nodiscard]] StructureFlags structural_predicates(const CMatrix &m, Tolerance tol = {});

/// Permutation operator on a tensor product of factors, sending factor order
/// (0, 1, ..., k-1) to (perm[0], perm[1], ...): the output vector lives on
/// dims[perm[0]] (x) dims[perm[1]] (x) ...
[[nodiscard]] CVector permute_tensor(const CVector &v, std::span<const Index> dims,
                                     std::span<const int> perm);

} // namespace qst
