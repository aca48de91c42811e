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

#include "fixture_builders.hpp"
#include "qst/random.hpp"
#include "qst/schmidt_support.hpp"
#include "test_support.hpp"

using namespace qst;
namespace fx = qst::fixtures;

TEST_CASE("Schmidt examples") {
    CVector epr = CVector::Zero(4);
    epr(0) = epr(3) = test::kInvSqrt2;
    auto sd = schmidt_decompose(epr, 2, 2);
    REQUIRE(sd.rank() == 2);
    CHECK(sd.coefficients(0) == doctest::Approx(test::kInvSqrt2));
    CHECK(sd.coefficients(1) == doctest::Approx(test::kInvSqrt2));

    sd = schmidt_decompose(kron(basis_vector(2, 0), basis_vector(2, 1)), 2, 2);
    REQUIRE(sd.rank() == 1);
    CHECK(sd.coefficients(0) == doctest::Approx(1.0));

    sd = schmidt_decompose(fx::example_s().psi, 3, 3);
    REQUIRE(sd.rank() == 3);
    CHECK(sd.coefficients(0) == doctest::Approx(test::kInvSqrt2));
    CHECK(sd.coefficients(1) == doctest::Approx(0.5));
    CHECK(sd.coefficients(2) == doctest::Approx(0.5));

    CHECK_THROWS((void)schmidt_decompose(CVector::Zero(4), 2, 2));
}

TEST_CASE("Schmidt decomposition invariants on random states") {
    Rng rng(21);
    for (int t = 0; t < 50; ++t) {
        std::uniform_int_distribution<int> d(1, 5);
        const Index dA = d(rng), dB = d(rng);
        const CVector psi = random_unit_vector(dA * dB, rng);
        const auto sd = schmidt_decompose(psi, dA, dB);
        CHECK((sd.reconstruct() - psi).norm() < 1e-10);
        CHECK(std::abs(sd.coefficients.squaredNorm() - 1.0) < 1e-10);
        CHECK((sd.leftBasis.adjoint() * sd.leftBasis - identity(sd.rank())).norm() < 1e-10);
        CHECK((sd.rightBasis.adjoint() * sd.rightBasis - identity(sd.rank())).norm() < 1e-10);
        // oracle: eigenvalues of rho_A are the squared coefficients
        Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_trace(psi * psi.adjoint(), dA, dB, Side::A));
        const RVector ev = es.eigenvalues().reverse();
        for (Index i = 0; i < sd.rank(); ++i) CHECK(std::abs(ev(i) - sd.coefficients(i) * sd.coefficients(i)) < 1e-10);
    }
}

TEST_CASE("Schmidt rank of constructed states") {
    Rng rng(22);
    for (int r = 1; r <= 4; ++r) {
        std::vector<double> c;
        for (int i = 0; i < r; ++i) c.push_back(1.0 + i);
        CHECK(schmidt_rank(random_state_with_schmidt(5, 4, c, rng), 5, 4) == r);
    }
}

TEST_CASE("support of full-rank, block and mixing models") {
    const auto full = support_of(fx::chsh_ideal());
    CHECK(full.centrally_supported);
    CHECK((full.PiA - identity(2)).norm() < 1e-12);
    CHECK(correlation_of(full.supportModel).max_difference(correlation_of(fx::chsh_ideal())) < 1e-12);

    const auto block = support_of(fx::synchronous_block(2, 2, 2, 11));
    CHECK(block.centrally_supported);
    CHECK(block.supportModel.dimA == 2);
    CHECK(correlation_of(block.supportModel).max_difference(correlation_of(fx::synchronous_block(2, 2, 2, 11))) < 1e-10);

    const auto mixing = support_of(fx::support_mixing());
    CHECK_FALSE(mixing.centrally_supported);
    CHECK(mixing.max_residual() > 0.1);
    bool named = false;
    for (const auto &r : mixing.commutator_residuals) named |= r.side == Side::A && r.input == 0 && r.residual > 0.1;
    CHECK(named);
    // psi lies in the support, so the correlation survives compression anyway
    CHECK(correlation_of(mixing.supportModel).max_difference(correlation_of(fx::support_mixing())) < 1e-10);
}

TEST_CASE("support projection equals the image projection of the reduced state") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const auto m = fx::central_fixture(static_cast<fx::CentralKind>(t % 3), 100 + t);
        const auto sd = support_of(m);
        const CMatrix rhoA = partial_trace(m.psi * m.psi.adjoint(), m.dimA, m.dimB, Side::A);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rhoA);
        CMatrix P = CMatrix::Zero(m.dimA, m.dimA);
        for (Index i = 0; i < m.dimA; ++i)
            if (es.eigenvalues()(i) > 1e-9) P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        CHECK((sd.PiA - P).norm() < 1e-8);
        const auto sch = schmidt_decompose(m.psi, m.dimA, m.dimB);
        CHECK((sd.PiA - sch.leftBasis * sch.leftBasis.adjoint()).norm() < 1e-10);
        CHECK(structural_predicates(sd.PiA).projection);
    }
}

TEST_CASE("centrally supported models induce the same moments as their support models") {
    for (int t = 0; t < 10; ++t) {
        const auto m = fx::central_fixture(fx::CentralKind::BlockDiagonal, 200 + t);
        const auto sd = support_of(m);
        REQUIRE(sd.centrally_supported);
        const auto pairs = enumerate_word_pairs(m.scenario, 4);
        for (std::size_t i = 0; i < pairs.size(); i += 11)
            CHECK(std::abs(evaluate_moment(m, pairs[i].first, pairs[i].second) -
                           evaluate_moment(sd.supportModel, pairs[i].first, pairs[i].second)) < 1e-9);
    }
}

TEST_CASE("criteria agree on the fixture families") {
    for (int t = 0; t < 60; ++t) {
        const auto m = fx::central_fixture(static_cast<fx::CentralKind>(t % 3), 300 + t);
        const bool viaCommutator = support_of(m).centrally_supported;
        const bool viaTransfer = is_centrally_supported_via_transfer(m).centrally_supported;
        CHECK(viaCommutator == viaTransfer);
        if (t % 3 != 2) CHECK(viaCommutator);
    }
    CHECK_FALSE(is_centrally_supported_via_transfer(fx::support_mixing()).centrally_supported);
}

TEST_CASE("transfer operator") {
    // maximally entangled: E^ is the transpose
    const auto sdMax = schmidt_decompose(fx::example_shat().psi, 2, 2);
    CMatrix E(2, 2);
    E << 1.0, Complex(2.0, 1.0), -3.0, 0.5;
    CHECK((transfer_operator(E, sdMax) - E.transpose()).norm() < 1e-12);

    // lambda = diag(sqrt(2/3), sqrt(1/3)) in the standard basis
    CVector psi = CVector::Zero(4);
    psi(0) = std::sqrt(2.0 / 3.0);
    psi(3) = std::sqrt(1.0 / 3.0);
    const auto sd = schmidt_decompose(psi, 2, 2);
    CMatrix e = CMatrix::Zero(2, 2);
    e(0, 1) = 1.0;
    // lambda E^T lambda^{-1} = [[0,0],[sqrt(1/3)/sqrt(2/3),0]] = [[0,0],[1/sqrt 2,0]]
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(1, 0) = test::kInvSqrt2;
    CHECK((transfer_operator(e, sd) - expected).norm() < 1e-12);
    CHECK((kron(e, identity(2)) * psi - kron(identity(2), transfer_operator(e, sd)) * psi).norm() < 1e-12);

    CHECK_THROWS_AS((void)transfer_operator(e, schmidt_decompose(basis_vector(4, 0), 2, 2)), RankDeficientError);
}

TEST_CASE("transfer operator residual on random full-rank states") {
    Rng rng(24);
    for (int t = 0; t < 50; ++t) {
        std::uniform_int_distribution<int> d(1, 5);
        const Index n = d(rng);
        std::vector<double> c;
        for (Index i = 0; i < n; ++i) c.push_back(1.0 + 0.5 * static_cast<double>(i));
        const CVector psi = random_state_with_schmidt(n, n, c, rng);
        const auto sd = schmidt_decompose(psi, n, n);
        const CMatrix E = random_ginibre(n, n, rng);
        const CMatrix Eh = transfer_operator(E, sd);
        CHECK((kron(E, identity(n)) * psi - kron(identity(n), Eh) * psi).norm() < 1e-9);
        const CMatrix F = random_ginibre(n, n, rng);
        const CMatrix Fh = transfer_operator_to_A(F, sd);
        CHECK((kron(identity(n), F) * psi - kron(Fh, identity(n)) * psi).norm() < 1e-9);
    }
}
