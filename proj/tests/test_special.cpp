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

#include <numbers>

#include "fixture_builders.hpp"
#include "qst/random.hpp"
#include "qst/schmidt_support.hpp"
#include "qst/special.hpp"
#include "test_support.hpp"

using namespace qst;
namespace fx = qst::fixtures;

TEST_CASE("synchronous verification") {
    for (const auto &m : {fx::example_s(), fx::example_shat(), fx::synchronous_full_rank(3, 2, 3, 7),
                          fx::synchronous_full_rank(2, 3, 2, 8), fx::synchronous_block(2, 2, 2, 11)}) {
        const auto r = synchronous_verify(m);
        CHECK(r.passed);
        CHECK(r.max_swap_residual < 1e-9);
        CHECK(r.projective_state);
        if (r.full_rank) CHECK(r.max_projectivity_residual < 1e-9);
        CHECK(support_of(m).centrally_supported);
        CHECK(is_centrally_supported_via_transfer(m).centrally_supported);
    }
    CHECK_THROWS_AS((void)synchronous_verify(fx::trine_model()), ScenarioError);
    CHECK_THROWS_AS((void)synchronous_verify(fx::chsh_ideal()), NotSynchronous);
}

TEST_CASE("full-rank POVM models never pass every synchronous check") {
    // maximally entangled state with N = M^T for a non-projective POVM:
    // p(0,1|0,0) = tr(M0 M1)/d > 0, so synchronicity fails
    Rng rng(51);
    for (int t = 0; t < 10; ++t) {
        QuantumModel m = fx::synchronous_full_rank(2, 1, 2, 60 + t);
        m.M[0] = random_povm(2, 2, rng);
        m.N[0] = {m.M[0][0].transpose(), m.M[0][1].transpose()};
        REQUIRE(classify(m).full_rank);
        REQUIRE_FALSE(classify(m).projective);
        CHECK_THROWS_AS((void)synchronous_verify(m), NotSynchronous);
    }
}

TEST_CASE("binary rounding") {
    const auto ideal = fx::chsh_ideal();
    auto r = binary_round(ideal, true);
    CHECK(r.correlation_difference < 1e-12);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a) CHECK((r.model.M[x][a] - ideal.M[x][a]).norm() < 1e-12);
    CHECK(r.extremality_asserted);

    const auto padded = fx::chsh_padded();
    r = binary_round(padded, true);
    CHECK(classify(r.model).projective);
    CHECK(correlation_of(r.model).max_difference(correlation_of(padded)) < 1e-10);
    CHECK(r.max_state_residual < 1e-9);
    bool sawC = false;
    for (const auto &e : r.eigenpairs) sawC |= e.condition == 'c';
    CHECK(sawC);
    CHECK(verify_local_dilation(padded, r.model, r.witness).passed);

    try {
        (void)binary_round(fx::binary_violating(), true);
        FAIL("expected LemmaViolated");
    } catch (const LemmaViolated &e) {
        CHECK(e.side == Side::A);
        CHECK(e.input == 0);
        CHECK(e.eigenvalue == doctest::Approx(0.5));
    }
}

TEST_CASE("binary rounding state residual oracle") {
    const auto padded = fx::chsh_padded();
    const auto r = binary_round(padded, false);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a) {
            const CMatrix d = kron(CMatrix(padded.M[x][a] - r.model.M[x][a]), identity(padded.dimB));
            CHECK((d * padded.psi).norm() < 1e-9);
        }
}

TEST_CASE("XOR correlations") {
    const auto c = xor_of(fx::chsh_ideal_correlation());
    CHECK(c.c(0, 0) == doctest::Approx(test::kInvSqrt2));
    CHECK(c.c(0, 1) == doctest::Approx(test::kInvSqrt2));
    CHECK(c.c(1, 0) == doctest::Approx(test::kInvSqrt2));
    CHECK(c.c(1, 1) == doctest::Approx(-test::kInvSqrt2));
    CHECK(c.rank == 2);
    CHECK(c.unbiased);

    const auto det = xor_of(correlation_of(fx::deterministic_binary()));
    CHECK((det.c - RMatrix::Ones(2, 2)).norm() < 1e-15);
    CHECK(det.rank == 1);
    CHECK_FALSE(det.unbiased);

    Correlation uniform({2, 2, 2, 2});
    for (auto &v : uniform.values()) v = 0.25;
    CHECK(xor_of(uniform).c.norm() == 0.0);
    CHECK(xor_of(uniform).rank == 0);

    CHECK_THROWS_AS((void)xor_of(correlation_of(fx::trine_model())), ScenarioError);
}

TEST_CASE("XOR is linear in the correlation") {
    Rng rng(52);
    for (int t = 0; t < 10; ++t) {
        const auto p = correlation_of(fx::random_model({2, 3, 2, 2}, 2, 2, false, rng()));
        const auto q = correlation_of(fx::random_model({2, 3, 2, 2}, 3, 2, true, rng()));
        const double w = std::uniform_real_distribution<double>(0, 1)(rng);
        Correlation mix(p.scenario());
        for (std::size_t i = 0; i < mix.values().size(); ++i) mix.values()[i] = w * p.values()[i] + (1 - w) * q.values()[i];
        CHECK((xor_of(mix).c - (w * xor_of(p).c + (1 - w) * xor_of(q).c)).norm() < 1e-12);
        CHECK(xor_of(p).c.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
    }
}

TEST_CASE("XOR certificates") {
    auto cert = xor_selftest_certificate(fx::chsh_ideal_correlation(), true);
    CHECK(cert.granted);
    CHECK(cert.rank == 2);
    CHECK(cert.summary == "commuting operator self-test: granted (rank 2, unbiased, extremality asserted)");

    cert = xor_selftest_certificate(correlation_of(fx::deterministic_binary()), true);
    CHECK_FALSE(cert.granted);
    CHECK_FALSE(cert.even_rank);

    cert = xor_selftest_certificate(fx::chsh_ideal_correlation(), false);
    CHECK_FALSE(cert.granted);
    bool reason = false;
    for (const auto &r : cert.reasons) reason |= r == "extremality not asserted";
    CHECK(reason);

    Correlation uniform({2, 2, 2, 2});
    for (auto &v : uniform.values()) v = 0.25;
    const auto ideal = fx::chsh_ideal_correlation();
    Correlation mixed({2, 2, 2, 2});
    for (std::size_t i = 0; i < mixed.values().size(); ++i) mixed.values()[i] = 0.5 * (ideal.values()[i] + 0.25);
    const std::vector<WeightedCorrelation> dec{{0.5, ideal}, {0.5, uniform}};
    cert = xor_selftest_certificate(mixed, true, &dec);
    CHECK_FALSE(cert.granted);
    CHECK(cert.extremality_refuted);
    // a decomposition that does not reproduce p refutes nothing
    const std::vector<WeightedCorrelation> wrong{{0.5, ideal}, {0.5, ideal}};
    CHECK_FALSE(xor_selftest_certificate(mixed, true, &wrong).extremality_refuted);
}

TEST_CASE("noncommutative polynomials") {
    const NcPoly a = NcPoly::variable(0), b = NcPoly::variable(1);
    const NcPoly p = a * b - b * a;
    CHECK(p.degree() == 2);
    CHECK(p.terms().size() == 2);
    CHECK((a * b - a * b).terms().empty());
    const std::vector<CMatrix> vars{test::pauli_z(), test::pauli_x()};
    const CMatrix comm = p.evaluate(vars, 2);
    CHECK((comm - (vars[0] * vars[1] - vars[1] * vars[0])).norm() < 1e-15);
    CHECK((NcPoly(3.0).evaluate(vars, 2) - 3.0 * identity(2)).norm() == 0.0);
    const std::vector<std::string> names{"a", "b"};
    CHECK_FALSE(p.to_string(names).empty());
}

TEST_CASE("tilted CHSH constants") {
    auto t = tilted_chsh_build(0.0);
    CHECK(t.lambda == doctest::Approx(2.0 * std::numbers::sqrt2));
    CHECK(t.eta.terms().size() == 4);
    t = tilted_chsh_build(0.5);
    CHECK(t.lambda == doctest::Approx(2.9154759).epsilon(1e-7));
    t = tilted_chsh_build(1.0);
    CHECK(t.delta == doctest::Approx(std::sqrt(6.0)));
    CHECK_THROWS((void)tilted_chsh_build(2.0));
    CHECK_THROWS((void)tilted_chsh_build(-0.1));
}

TEST_CASE("tilted CHSH identities hold on random models") {
    Rng rng(53);
    for (int t = 0; t < 20; ++t) {
        const auto m = fx::random_model({2, 2, 2, 2}, 1 + t % 3, 1 + (t / 3) % 3, t % 2 == 0, rng());
        const auto c = verify_tilted_sos(m, 0.7);
        CHECK(c.identity_defect_1 < 1e-8);
        CHECK(c.identity_defect_2 < 1e-8);
        CHECK(c.f_eta <= c.lambda + 1e-9);
    }
    CHECK_THROWS((void)verify_tilted_sos(fx::trine_model(), 0.5));
}

TEST_CASE("tilted CHSH on deterministic and optimal models") {
    const auto det = verify_tilted_sos(fx::deterministic_binary(), 0.0);
    CHECK(det.f_eta <= 2.0 + 1e-12);
    CHECK_FALSE(det.optimal);
    REQUIRE(det.state_residuals.size() == 12);
    CHECK(det.state_residuals[0].name == "r1^2");
    CHECK(det.state_residuals[0].value > 1e-3);

    // closed-form optimum at alpha = 0 is the ideal CHSH model
    const auto ideal = verify_tilted_sos(fx::chsh_ideal(), 0.0);
    CHECK(ideal.f_eta == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-12));
    CHECK(ideal.optimal);
    CHECK(ideal.max_state_residual < 1e-9);
}

TEST_CASE("tilted CHSH optimizer") {
    const auto o = optimize_tilted_chsh(0.0, 0);
    CHECK(std::abs(o.value - 2.0 * std::numbers::sqrt2) < 1e-6);
    const auto c = verify_tilted_sos(o.model, 0.0);
    CHECK(c.max_state_residual < 1e-5);
}
