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

#include <doctest.h>

#include "qst/numerics.hpp"
#include "qst/random.hpp"
#include "test_support.hpp"

using namespace qst;
using qst::test::cdiag;

TEST_CASE("kron examples") {
    CHECK(kron(identity(2), identity(3)).isApprox(identity(6)));
    const CVector e2 = kron(test::pauli_x(), identity(2)) * basis_vector(4, 0);
    CHECK(e2.isApprox(basis_vector(4, 2)));
    CHECK((kron(cdiag({1, 2}), cdiag({3, 4})) - cdiag({3, 4, 6, 8})).norm() == 0.0);
}

TEST_CASE("kron matches definition, is associative and bilinear") {
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        std::uniform_int_distribution<int> d(1, 4);
        const CMatrix a = random_ginibre(d(rng), d(rng), rng);
        const CMatrix b = random_ginibre(d(rng), d(rng), rng);
        const CMatrix c = random_ginibre(d(rng), d(rng), rng);
        CHECK(test::max_abs(kron(a, b) - test::naive_kron(a, b)) < 1e-14);
        CHECK(test::max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
        const CMatrix a2 = random_ginibre(a.rows(), a.cols(), rng);
        const Complex s(0.3, -1.2);
        CHECK(test::max_abs(kron(a + s * a2, b) - kron(a, b) - s * kron(a2, b)) < 1e-12);
    }
}

TEST_CASE("partial trace") {
    CVector epr = CVector::Zero(4);
    epr(0) = epr(3) = test::kInvSqrt2;
    CHECK(partial_trace(epr * epr.adjoint(), 2, 2, Side::A).isApprox(0.5 * identity(2)));

    const CVector prod = kron(basis_vector(2, 0), basis_vector(2, 1));
    CHECK(partial_trace(prod * prod.adjoint(), 2, 2, Side::A).isApprox(cdiag({1, 0})));
    CHECK(partial_trace(prod * prod.adjoint(), 2, 2, Side::B).isApprox(cdiag({0, 1})));

    CVector psi = CVector::Zero(9);
    psi(0) = test::kInvSqrt2;
    psi(4) = psi(8) = 0.5;
    CHECK(test::max_abs(partial_trace(psi * psi.adjoint(), 3, 3, Side::A) - cdiag({0.5, 0.25, 0.25})) < 1e-15);

    CHECK_THROWS_AS((void)partial_trace(identity(5), 2, 2, Side::A), DimensionError);
}

TEST_CASE("partial trace factorizes product states and preserves trace") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const CVector u = random_unit_vector(3, rng), v = random_unit_vector(4, rng);
        const CMatrix rho = kron(CMatrix(u * u.adjoint()), CMatrix(v * v.adjoint()));
        CHECK(test::max_abs(partial_trace(rho, 3, 4, Side::A) - u * u.adjoint()) < 1e-14);
        const CVector psi = random_unit_vector(12, rng);
        const CMatrix r = psi * psi.adjoint();
        CHECK(std::abs(partial_trace(r, 3, 4, Side::B).trace() - 1.0) < 1e-14);
    }
}

TEST_CASE("hermitian_eig examples") {
    auto e = hermitian_eig(cdiag({0, 1}));
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(0.0));

    e = hermitian_eig(test::pauli_x());
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(-1.0));
    CVector plus(2), minus(2);
    plus << test::kInvSqrt2, test::kInvSqrt2;
    minus << test::kInvSqrt2, -test::kInvSqrt2;
    CHECK((e.vectors.col(0) - plus).norm() < 1e-14);
    CHECK((e.vectors.col(1) - minus).norm() < 1e-14);

    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS((void)hermitian_eig(bad), NonHermitianError);
}

TEST_CASE("hermitian_eig reconstruction on random inputs") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const CMatrix h = random_hermitian(8, rng);
        const auto e = hermitian_eig(h);
        const CMatrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        CHECK((h - rec).norm() < 1e-12);
        CHECK((e.vectors.adjoint() * e.vectors - identity(8)).norm() < 1e-10);
        CHECK(std::abs(e.values.sum() - h.trace().real()) < 1e-10);
        for (Index i = 1; i < 8; ++i) CHECK(e.values(i - 1) >= e.values(i));
    }
}

TEST_CASE("hermitian_eig degenerate basis depends only on the eigenspace") {
    Rng rng(4);
    const CMatrix U = random_unitary(4, rng);
    const CMatrix h = U * cdiag({2, 2, 1, 0}) * U.adjoint();
    // the same matrix built from a rotated basis of the degenerate eigenspace
    CMatrix rot = identity(4);
    rot.topLeftCorner(2, 2) = random_unitary(2, rng);
    const CMatrix U2 = U * rot;
    const CMatrix h2 = U2 * cdiag({2, 2, 1, 0}) * U2.adjoint();
    const auto e1 = hermitian_eig(h), e2 = hermitian_eig(h2);
    CHECK((e1.vectors.leftCols(2) - e2.vectors.leftCols(2)).norm() < 1e-9);
}

TEST_CASE("orthonormalize") {
    std::vector<CVector> vs{basis_vector(2, 0), basis_vector(2, 0), basis_vector(2, 1)};
    auto out = orthonormalize(vs, Tolerance{});
    REQUIRE(out.size() == 2);
    CHECK((out[0] - basis_vector(2, 0)).norm() < 1e-15);
    CHECK((out[1] - basis_vector(2, 1)).norm() < 1e-15);

    vs = {basis_vector(2, 0) + basis_vector(2, 1), basis_vector(2, 0) - basis_vector(2, 1)};
    out = orthonormalize(vs, Tolerance{});
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out[0].dot(out[1])) < 1e-15);

    // rank oracle: singular values of the stacked matrix, computed independently
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        std::uniform_int_distribution<int> r(1, 4), k(1, 6);
        const Index rank = r(rng);
        const CMatrix basis = random_ginibre(6, rank, rng);
        const CMatrix coeffs = random_ginibre(rank, k(rng), rng);
        const CMatrix stacked = basis * coeffs;
        std::vector<CVector> cols;
        for (Index j = 0; j < stacked.cols(); ++j) cols.push_back(stacked.col(j));
        Eigen::JacobiSVD<CMatrix> svd(stacked);
        const auto sv = svd.singularValues();
        Index expected = 0;
        for (Index i = 0; i < sv.size(); ++i) expected += sv(i) > 1e-8 * sv(0);
        CHECK(static_cast<Index>(orthonormalize(cols, Tolerance{}).size()) == expected);
    }
}

TEST_CASE("structural predicates") {
    auto f = structural_predicates(identity(3));
    CHECK((f.hermitian && f.positive && f.projection && f.isometry && f.unitary));
    f = structural_predicates(cdiag({0.5, 0.5}));
    CHECK(f.hermitian);
    CHECK(f.positive);
    CHECK_FALSE(f.projection);
    CHECK_FALSE(f.unitary);
    f = structural_predicates(cdiag({1, -1}));
    CHECK_FALSE(f.positive);
    CHECK(f.unitary);
}

TEST_CASE("PQP is a projection exactly when P and Q commute") {
    Rng rng(6);
    int commuting = 0, noncommuting = 0;
    for (int t = 0; t < 60; ++t) {
        std::uniform_int_distribution<int> d(2, 6);
        const Index n = d(rng);
        const CMatrix U = random_unitary(n, rng);
        auto proj_on = [&](const CMatrix &basis, Index k) {
            CMatrix p = CMatrix::Zero(n, n);
            for (Index i = 0; i < k; ++i) p += basis.col(i) * basis.col(i).adjoint();
            return p;
        };
        const CMatrix P = proj_on(U, 1 + t % (n - 1));
        // half the time share the eigenbasis of P, otherwise draw independently
        const CMatrix V = t % 2 == 0 ? U : random_unitary(n, rng);
        CMatrix Q = CMatrix::Zero(n, n);
        for (Index i = 0; i < n; ++i)
            if ((i + t) % 3 == 0) Q += V.col(i) * V.col(i).adjoint();
        const bool commute = (P * Q - Q * P).norm() < 1e-9;
        commute ? ++commuting : ++noncommuting;
        CHECK(structural_predicates(P * Q * P).projection == commute);
    }
    CHECK(commuting > 0);
    CHECK(noncommuting > 0);
}

TEST_CASE("null space, psd sqrt, polar factor") {
    CMatrix a = CMatrix::Zero(2, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    const CMatrix ns = null_space(a, 1e-12);
    REQUIRE(ns.cols() == 1);
    CHECK(std::abs(std::abs(ns(2, 0)) - 1.0) < 1e-14);

    Rng rng(7);
    const CMatrix g = random_ginibre(4, 4, rng);
    const CMatrix p = g * g.adjoint();
    const CMatrix s = psd_sqrt(p);
    CHECK((s * s - p).norm() < 1e-10);
    const CMatrix u = unitary_polar(g);
    CHECK(structural_predicates(u).unitary);
}

TEST_CASE("null space of tall complex systems stays finite") {
    // stacked commutator system of Id_2 (x) Z, Id_2 (x) X, checked for NaN
    const CMatrix z = kron(identity(2), test::pauli_z()), x = kron(identity(2), test::pauli_x());
    CMatrix sys(32, 16);
    sys.topRows(16) = kron(CMatrix(z.transpose()), identity(4)) - kron(identity(4), z);
    sys.bottomRows(16) = kron(CMatrix(x.transpose()), identity(4)) - kron(identity(4), x);
    const CMatrix ns = null_space(sys, 1e-9);
    CHECK(ns.allFinite());
    CHECK(ns.cols() == 4);
    CHECK((sys * ns).norm() < 1e-12);
}

TEST_CASE("permute_tensor swaps factors") {
    const CVector u = basis_vector(2, 1), v = basis_vector(3, 2);
    const std::vector<Index> dims{2, 3};
    const std::vector<int> perm{1, 0};
    CHECK((permute_tensor(kron(u, v), dims, perm) - kron(v, u)).norm() == 0.0);
}

TEST_CASE("tolerance") {
    Tolerance t(1e-6);
    CHECK(t.accepts(1e-6));
    CHECK_FALSE(t.accepts(3e-6));
    CHECK(t.accepts(3e-6, 5.0));
    CHECK(t.equal(1000.0, 1000.0005));
    CHECK_THROWS((void)Tolerance(-1.0));
}
