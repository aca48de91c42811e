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
#include "qst/models.hpp"
#include "qst/random.hpp"
#include "qst/representations.hpp"
#include "test_support.hpp"

using namespace qst;
namespace fx = qst::fixtures;

namespace {

Word letter(Side s, int x, int a) { return Word{s, {Letter{x, a}}}; }

QuantumModel random_valid(Rng &rng, int maxDim = 5) {
    std::uniform_int_distribution<int> d(1, maxDim), k(1, 3), o(2, 3);
    const Scenario s{k(rng), k(rng), o(rng), o(rng)};
    return fx::random_model(s, d(rng), d(rng), rng() % 2 == 0, rng());
}

} // namespace

TEST_CASE("validation examples") {
    CHECK(validate_quantum_model(fx::chsh_ideal()).valid());

    QuantumModel m = fx::chsh_ideal();
    m.M[0] = {0.5 * identity(2), 0.5 * identity(2)};
    CHECK(validate_quantum_model(m).valid());
    CHECK_FALSE(classify(m).projective);

    m.M[0] = {identity(2), identity(2)};
    const auto r = validate_quantum_model(m);
    REQUIRE_FALSE(r.valid());
    CHECK(r.violations[0].invariant == "POVM completeness");
    CHECK(r.violations[0].location == "M[0]");
    CHECK(r.violations[0].residual == doctest::Approx(1.0));
    CHECK_THROWS_AS(require_valid(m), InvalidModel);

    m = fx::chsh_ideal();
    m.psi *= 2.0;
    CHECK_FALSE(validate_quantum_model(m).valid());

    CHECK_THROWS_AS(Scenario({0, 1, 1, 1}).validate(), ScenarioError);
}

TEST_CASE("commuting model validation flags non-commuting families") {
    CommutingModel c = as_commuting(fx::chsh_ideal());
    CHECK(validate_commuting_model(c).valid());
    c.N = c.M;
    CHECK_FALSE(validate_commuting_model(c).valid());
}

TEST_CASE("example correlation and moments") {
    for (const auto &m : {fx::example_shat(), fx::example_s()}) {
        const Correlation p = correlation_of(m);
        CHECK(p(0, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(p(1, 1, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(p(0, 1, 0, 0)) < 1e-12);
        CHECK(std::abs(p(1, 0, 0, 0)) < 1e-12);
        CHECK(std::abs(evaluate_moment(m, Word{Side::A, {}}, Word{Side::B, {}}) - 1.0) < 1e-12);
    }
    const Complex f = evaluate_moment(fx::example_shat(), letter(Side::A, 0, 0), letter(Side::B, 0, 0));
    CHECK(std::abs(f - 0.5) < 1e-12);

    const auto flags = classify(fx::example_shat());
    CHECK((flags.projective && flags.full_rank && flags.binary));
    const auto flagsS = classify(fx::example_s());
    CHECK((flagsS.projective && flagsS.full_rank));
}

TEST_CASE("ideal CHSH correlation matches the closed form") {
    const Correlation p = correlation_of(fx::chsh_ideal());
    CHECK(p.max_difference(fx::chsh_ideal_correlation()) < 1e-12);
    // independent evaluation by explicit index sums
    const auto m = fx::chsh_ideal();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    CHECK(std::abs(test::naive_expectation(m.psi, m.M[x][a], m.N[y][b]).real() - p(a, b, x, y)) < 1e-12);
}

TEST_CASE("product state with Z measurements is deterministic") {
    QuantumModel m;
    m.scenario = {1, 1, 2, 2};
    m.dimA = m.dimB = 2;
    m.M = {{test::cdiag({1, 0}), test::cdiag({0, 1})}};
    m.N = m.M;
    m.psi = basis_vector(4, 0);
    const Correlation p = correlation_of(m);
    CHECK(p(0, 0, 0, 0) == 1.0);
    CHECK(p(1, 1, 0, 0) == 0.0);
}

TEST_CASE("correlations of random models are valid and single letters reproduce them") {
    Rng rng(11);
    for (int t = 0; t < 40; ++t) {
        const QuantumModel m = random_valid(rng);
        REQUIRE(validate_quantum_model(m).valid());
        const Correlation p = correlation_of(m);
        CHECK(validate_correlation(p).valid());
        if (t < 20) {
            const Scenario &s = m.scenario;
            for (int x = 0; x < s.nX; ++x)
                for (int y = 0; y < s.nY; ++y)
                    for (int a = 0; a < s.nA; ++a)
                        for (int b = 0; b < s.nB; ++b) {
                            const Complex f = evaluate_moment(m, letter(Side::A, x, a), letter(Side::B, y, b));
                            CHECK(std::abs(f.real() - p(a, b, x, y)) < 1e-12);
                        }
        }
    }
}

TEST_CASE("word reversal conjugates moments") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const QuantumModel m = random_valid(rng, 4);
        const auto pairs = enumerate_word_pairs(m.scenario, 3);
        for (std::size_t i = 0; i < pairs.size(); i += 7) {
            const auto &[wA, wB] = pairs[i];
            const Complex f = evaluate_moment(m, wA, wB);
            const Complex g = evaluate_moment(m, reversed(wA), reversed(wB));
            CHECK(std::abs(f - std::conj(g)) < 1e-12);
        }
    }
}

TEST_CASE("auxiliary registers are invisible to moments") {
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        const QuantumModel m = random_valid(rng, 3);
        const CVector aux = kron(random_unit_vector(2, rng), random_unit_vector(3, rng));
        const QuantumModel big = tensor_with_aux(m, aux, 2, 3);
        CHECK(validate_quantum_model(big).valid());
        CHECK(correlation_of(m).max_difference(correlation_of(big)) < 1e-10);
        const auto pairs = enumerate_word_pairs(m.scenario, 3);
        for (std::size_t i = 0; i < pairs.size(); i += 5)
            CHECK(std::abs(evaluate_moment(m, pairs[i].first, pairs[i].second) -
                           evaluate_moment(big, pairs[i].first, pairs[i].second)) < 1e-10);
    }
}

TEST_CASE("kron-extended commuting model has the same correlation") {
    Rng rng(14);
    for (int t = 0; t < 10; ++t) {
        const QuantumModel m = random_valid(rng, 4);
        const CommutingModel c = as_commuting(m);
        CHECK(validate_commuting_model(c).valid());
        CHECK(correlation_of(m).max_difference(correlation_of(c)) < 1e-12);
    }
}

TEST_CASE("word enumeration is length-lex") {
    const Scenario s{2, 1, 2, 2};
    const auto pairs = enumerate_word_pairs(s, 2);
    REQUIRE(pairs.size() > 2);
    CHECK(pairs[0].first.letters.empty());
    CHECK(pairs[0].second.letters.empty());
    CHECK(pairs[1].first.letters.size() == 1);
    for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(length_lex_less(pairs[i - 1], pairs[i]));
    // 1 + (4 + 2) + (16 + 4 + 4*2) words of total length <= 2
    CHECK(pairs.size() == 1 + 6 + 16 + 4 + 8);
}

TEST_CASE("projective state") {
    CHECK(is_projective_state(fx::chsh_ideal()));
    // full-rank, non-projective POVM
    CHECK_FALSE(is_projective_state(fx::binary_violating()));
    CHECK(projective_state_residual(fx::binary_violating()) > 0.1);
    // non-projective POVM living on a level the state never reaches
    const QuantumModel padded = fx::chsh_padded();
    CHECK_FALSE(classify(padded).projective);
    CHECK(is_projective_state(padded));
}

TEST_CASE("local unitaries preserve the correlation") {
    Rng rng(15);
    const QuantumModel m = fx::chsh_ideal();
    const QuantumModel r = apply_local_unitaries(m, random_unitary(2, rng), random_unitary(2, rng));
    CHECK(correlation_of(m).max_difference(correlation_of(r)) < 1e-12);
}
