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

#include "qst/numerics.hpp"
#include "qst/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qst {

Tolerance::Tolerance(double e) : eps(e) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
        throw Error("tolerance must be a finite non-negative number");
    }
}

bool Tolerance::equal(double x, double y) const noexcept {
    return std::abs(x - y) <= eps * (1.0 + std::max(std::abs(x), std::abs(y)));
}

bool Tolerance::equal(Complex x, Complex y) const noexcept {
    return std::abs(x - y) <= eps * (1.0 + std::max(std::abs(x), std::abs(y)));
}

const char *to_string(Side s) noexcept { return s == Side::A ? "A" : "B"; }

void require_finite(const CMatrix &m, const std::string &what) {
    if (!m.allFinite()) {
        throw Error(what + ": entries must be finite");
    }
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

CMatrix identity(Index d) { return CMatrix::Identity(d, d); }

CVector basis_vector(Index d, Index i) {
    CVector v = CVector::Zero(d);
    v(i) = 1.0;
    return v;
}

CMatrix outer(const CVector &u, const CVector &v) { return u * v.adjoint(); }

CMatrix partial_trace(const CMatrix &rho, Index dimA, Index dimB, Side keep) {
    if (dimA <= 0 || dimB <= 0 || rho.rows() != dimA * dimB || rho.cols() != dimA * dimB) {
        std::ostringstream os;
        os << "partial_trace: operator is " << rho.rows() << "x" << rho.cols()
           << " but dimA*dimB = " << dimA << "*" << dimB;
        throw DimensionError(os.str());
    }
    if (keep == Side::A) {
        CMatrix out = CMatrix::Zero(dimA, dimA);
        for (Index i = 0; i < dimA; ++i)
            for (Index j = 0; j < dimA; ++j)
                for (Index k = 0; k < dimB; ++k)
                    out(i, j) += rho(i * dimB + k, j * dimB + k);
        return out;
    }
    CMatrix out = CMatrix::Zero(dimB, dimB);
    for (Index k = 0; k < dimA; ++k)
        out += rho.block(k * dimB, k * dimB, dimB, dimB);
    return out;
}

CMatrix coefficient_matrix(const CVector &psi, Index dimA, Index dimB) {
    if (psi.size() != dimA * dimB) {
        std::ostringstream os;
        os << "state has dimension " << psi.size() << " but dimA*dimB = " << dimA * dimB;
        throw DimensionError(os.str());
    }
    CMatrix c(dimA, dimB);
    for (Index i = 0; i < dimA; ++i)
        for (Index k = 0; k < dimB; ++k)
            c(i, k) = psi(i * dimB + k);
    return c;
}

CVector from_coefficient_matrix(const CMatrix &c) {
    CVector v(c.size());
    for (Index i = 0; i < c.rows(); ++i)
        for (Index k = 0; k < c.cols(); ++k)
            v(i * c.cols() + k) = c(i, k);
    return v;
}

void fix_phase(Eigen::Ref<CVector> v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return;
    for (Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-8 * scale) {
            v *= std::conj(v(i)) / mag;
            return;
        }
    }
}

CMatrix canonical_basis(const CMatrix &frame) {
    const Index d = frame.rows();
    const Index k = frame.cols();
    // P e_j = frame * r_j with r_j = frame^dag e_j, so work in the k-dim coefficient space.
    CMatrix coeffs = frame.adjoint(); // column j is r_j
    CMatrix chosen(k, k);
    Index found = 0;
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    while (found < k) {
        double best = 0.0;
        for (Index j = 0; j < d; ++j)
            if (!used[static_cast<std::size_t>(j)]) best = std::max(best, coeffs.col(j).norm());
        if (best <= 1e-12) break;
        // smallest index whose residual is within a factor two of the best one
        Index pick = -1;
        for (Index j = 0; j < d; ++j) {
            if (!used[static_cast<std::size_t>(j)] && coeffs.col(j).norm() >= 0.5 * best) {
                pick = j;
                break;
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        CVector v = coeffs.col(pick) / coeffs.col(pick).norm();
        chosen.col(found++) = v;
        // deflate the remaining candidates (twice for stability)
        for (int pass = 0; pass < 2; ++pass) {
            for (Index j = 0; j < d; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                coeffs.col(j) -= v * v.dot(coeffs.col(j));
            }
        }
    }
    CMatrix basis = frame * chosen.leftCols(found);
    for (Index c = 0; c < basis.cols(); ++c) {
        basis.col(c).normalize();
        fix_phase(basis.col(c));
    }
    return basis;
}

EigenDecomposition hermitian_eig(const CMatrix &h, Tolerance tol) {
    if (h.rows() != h.cols()) {
        throw DimensionError("hermitian_eig: matrix must be square");
    }
    require_finite(h, "hermitian_eig");
    const double skew = (h - h.adjoint()).norm();
    if (!tol.accepts(skew, h.norm())) {
        std::ostringstream os;
        os << "hermitian_eig: input is not Hermitian (||h - h^dag|| = " << skew << ")";
        throw NonHermitianError(os.str());
    }
    const CMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    const Index n = h.rows();
    EigenDecomposition out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();

    Index start = 0;
    while (start < n) {
        Index stop = start + 1;
        while (stop < n && out.values(stop - 1) - out.values(stop) < kEigenClusterGap) ++stop;
        const Index size = stop - start;
        if (size > 1) {
            CMatrix basis = canonical_basis(out.vectors.middleCols(start, size));
            out.vectors.middleCols(start, size) = basis;
        } else {
            fix_phase(out.vectors.col(start));
        }
        start = stop;
    }
    return out;
}

std::vector<CVector> orthonormalize(std::span<const CVector> vs, Tolerance tol) {
    double max_norm = 0.0;
    for (const auto &v : vs) max_norm = std::max(max_norm, v.norm());
    const double cutoff = tol.eps * (1.0 + max_norm);
    std::vector<CVector> basis;
    for (const auto &v : vs) {
        CVector r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto &b : basis) r -= b * b.dot(r);
        const double nr = r.norm();
        if (nr < cutoff) continue;
        basis.emplace_back(r / nr);
    }
    return basis;
}

CMatrix orthonormalize_columns(const CMatrix &cols, Tolerance tol) {
    std::vector<CVector> vs;
    vs.reserve(static_cast<std::size_t>(cols.cols()));
    for (Index c = 0; c < cols.cols(); ++c) vs.emplace_back(cols.col(c));
    const auto basis = orthonormalize(vs, tol);
    CMatrix out(cols.rows(), static_cast<Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) out.col(static_cast<Index>(i)) = basis[i];
    return out;
}

namespace {

// Square upper-triangular factor with the same singular values and right
// singular vectors as `a`; keeps the SVD small for tall stacked systems.
CMatrix compress_rows(const CMatrix &a) {
    if (a.rows() <= a.cols()) return a;
    Eigen::HouseholderQR<CMatrix> qr(a);
    return qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
}

// Eigen 3.4's divide-and-conquer SVD occasionally returns NaN vectors for
// complex triangular input; those cases are redone with the Jacobi SVD.
template <class Svd>
bool usable(const Svd &svd, const CMatrix &r) {
    const auto &s = svd.singularValues();
    const auto &v = svd.matrixV();
    if (!s.allFinite() || !v.allFinite()) return false;
    if ((v.adjoint() * v - identity(r.cols())).norm() > 1e-8) return false;
    const double slack = 1e-8 * (1.0 + (s.size() ? s(0) : 0.0));
    const RVector images = (r * v).colwise().norm().transpose();
    for (Index i = 0; i < v.cols(); ++i)
        if (std::abs(images(i) - (i < s.size() ? s(i) : 0.0)) > slack) return false;
    return true;
}

} // namespace

CMatrix null_space(const CMatrix &a, double threshold) {
    const Index n = a.cols();
    if (a.rows() == 0) return identity(n);
    const CMatrix r = compress_rows(a);
    RVector s;
    CMatrix v;
    Eigen::BDCSVD<CMatrix> fast(r, Eigen::ComputeFullV);
    if (usable(fast, r)) {
        s = fast.singularValues();
        v = fast.matrixV();
    } else {
        Eigen::JacobiSVD<CMatrix> slow(r, Eigen::ComputeFullV);
        s = slow.singularValues();
        v = slow.matrixV();
    }
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++rank;
    return v.rightCols(n - rank);
}

double op_norm(const CMatrix &m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

RVector singular_values(const CMatrix &a) {
    if (a.size() == 0) return RVector();
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues();
}

Index numerical_rank(const CMatrix &a, double threshold) {
    const RVector s = singular_values(a);
    return static_cast<Index>((s.array() > threshold).count());
}

CMatrix psd_sqrt(const CMatrix &m, Tolerance tol) {
    const auto eig = hermitian_eig(m, tol);
    RVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
    return eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

CMatrix unitary_polar(const CMatrix &m) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

StructureFlags structural_predicates(const CMatrix &m, Tolerance tol) {
    StructureFlags f;
    const double scale = m.norm();
    const Index r = m.rows();
    const Index c = m.cols();

    f.isometry_residual = (m.adjoint() * m - identity(c)).norm();
    f.coisometry_residual = (m * m.adjoint() - identity(r)).norm();
    f.isometry = tol.accepts(f.isometry_residual);
    f.unitary = r == c && f.isometry && tol.accepts(f.coisometry_residual);

    if (r != c) {
        f.hermitian_residual = std::numeric_limits<double>::infinity();
        f.projection_residual = std::numeric_limits<double>::infinity();
        return f;
    }
    f.hermitian_residual = (m - m.adjoint()).norm();
    f.hermitian = tol.accepts(f.hermitian_residual, scale);
    const CMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    f.min_eigenvalue = r > 0 ? solver.eigenvalues()(0) : 0.0;
    f.positive = f.hermitian && f.min_eigenvalue >= -tol.eps;
    f.projection_residual = (m * m - m).norm();
    f.projection = f.hermitian && tol.accepts(f.projection_residual, scale);
    return f;
}

CVector permute_tensor(const CVector &v, std::span<const Index> dims, std::span<const int> perm) {
    const std::size_t k = dims.size();
    if (perm.size() != k) throw DimensionError("permute_tensor: permutation length mismatch");
    Index total = 1;
    for (Index d : dims) total *= d;
    if (total != v.size()) throw DimensionError("permute_tensor: vector size does not match factors");

    std::vector<Index> out_dims(k);
    for (std::size_t i = 0; i < k; ++i) out_dims[i] = dims[static_cast<std::size_t>(perm[i])];

    CVector out(v.size());
    std::vector<Index> digits(k, 0);
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        for (std::size_t i = k; i-- > 0;) {
            digits[i] = rem % dims[i];
            rem /= dims[i];
        }
        Index target = 0;
        for (std::size_t i = 0; i < k; ++i)
            target = target * out_dims[i] + digits[static_cast<std::size_t>(perm[i])];
        out(target) = v(flat);
    }
    return out;
}

// ---------------------------------------------------------------------------
// random generators

CMatrix random_ginibre(Index rows, Index cols, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    return g;
}

CMatrix random_hermitian(Index d, Rng &rng) {
    const CMatrix g = random_ginibre(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

CMatrix random_unitary(Index d, Rng &rng) {
    const CMatrix g = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * identity(d);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

CVector random_unit_vector(Index d, Rng &rng) {
    CVector v = random_ginibre(d, 1, rng).col(0);
    return v / v.norm();
}

std::vector<CMatrix> random_povm(Index d, Index k, Rng &rng) {
    std::vector<CMatrix> parts;
    CMatrix total = CMatrix::Zero(d, d);
    for (Index i = 0; i < k; ++i) {
        const CMatrix g = random_ginibre(d, d, rng);
        parts.push_back(g * g.adjoint());
        total += parts.back();
    }
    const auto eig = hermitian_eig(total);
    RVector inv_root = eig.values.cwiseSqrt().cwiseInverse();
    const CMatrix t = eig.vectors * inv_root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    for (auto &p : parts) {
        p = t * p * t;
        p = 0.5 * (p + p.adjoint());
    }
    return parts;
}

std::vector<CMatrix> random_pvm(Index d, Index k, Rng &rng) {
    const CMatrix u = random_unitary(d, rng);
    std::uniform_int_distribution<Index> pick(0, k - 1);
    std::vector<Index> owner(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) owner[static_cast<std::size_t>(i)] = i < k ? i : pick(rng);
    std::vector<CMatrix> out(static_cast<std::size_t>(k), CMatrix::Zero(d, d));
    for (Index i = 0; i < d; ++i) out[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])] += outer(u.col(i), u.col(i));
    return out;
}

CVector random_state_with_schmidt(Index dimA, Index dimB, const std::vector<double> &coefficients,
                                  Rng &rng) {
    const auto r = static_cast<Index>(coefficients.size());
    if (r > dimA || r > dimB) throw DimensionError("Schmidt rank exceeds local dimension");
    const CMatrix ua = random_unitary(dimA, rng);
    const CMatrix ub = random_unitary(dimB, rng);
    double total = 0.0;
    for (double c : coefficients) total += c * c;
    CVector psi = CVector::Zero(dimA * dimB);
    for (Index i = 0; i < r; ++i)
        psi += (coefficients[static_cast<std::size_t>(i)] / std::sqrt(total)) *
               kron(CVector(ua.col(i)), CVector(ub.col(i)));
    return psi;
}

} // namespace qst
