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

#include <algorithm>

#include "fixture_builders.hpp"
#include "qst/random.hpp"
#include "qst/representations.hpp"
#include "test_support.hpp"

using namespace qst;
namespace fx = qst::fixtures;

namespace {

// Direct sum of (g_i (x) Id_{m_i}) hidden by a random unitary; returns the generator family.
std::vector<CMatrix> constructed_rep(const std::vector<std::vector<CMatrix>> &irreps,
                                     const std::vector<Index> &mult, const CMatrix &U) {
    const std::size_t k = irreps[0].size();
    std::vector<CMatrix> out;
    for (std::size_t g = 0; g < k; ++g) {
        Index d = 0;
        for (std::size_t i = 0; i < irreps.size(); ++i) d += irreps[i][g].rows() * mult[i];
        CMatrix m = CMatrix::Zero(d, d);
        Index off = 0;
        for (std::size_t i = 0; i < irreps.size(); ++i) {
            const CMatrix b = kron(irreps[i][g], identity(mult[i]));
            m.block(off, off, b.rows(), b.cols()) = b;
            off += b.rows();
        }
        out.push_back(U * m * U.adjoint());
    }
    return out;
}

// Random irreducible family of size n: two random Hermitian matrices generate M_n generically.
std::vector<CMatrix> random_irrep(Index n, Rng &rng) {
    if (n == 1) return {CMatrix::Constant(1, 1, std::normal_distribution<double>()(rng)),
                        CMatrix::Constant(1, 1, std::normal_distribution<double>()(rng))};
    return {random_hermitian(n, rng), random_hermitian(n, rng)};
}

} // namespace

TEST_CASE("commutant examples") {
    const std::vector<CMatrix> id{identity(3)};
    CHECK(commutant_basis(id).size() == 9);

    std::vector<CMatrix> units;
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) units.push_back(outer(basis_vector(3, i), basis_vector(3, j)));
    CHECK(commutant_basis(units).size() == 1);

    const std::vector<CMatrix> doubled{kron(identity(2), test::pauli_z()), kron(identity(2), test::pauli_x())};
    const auto basis = commutant_basis(doubled);
    CHECK(basis.size() == 4);
    for (const auto &t : basis) {
        CHECK(t.allFinite());
        for (const auto &g : doubled) CHECK((t * g - g * t).norm() < 1e-10);
    }
    CHECK_THROWS((void)commutant_basis(std::vector<CMatrix>{}));
}

TEST_CASE("irrep examples") {
    const auto chsh = fx::chsh_ideal();
    const auto alice = flatten(chsh.M);
    auto d = irrep_decompose(alice, 0);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].irrepDim == 2);
    CHECK(d.blocks[0].multiplicity == 1);

    std::vector<CMatrix> doubled;
    for (const auto &g : alice) doubled.push_back(kron(g, identity(2)));
    d = irrep_decompose(doubled, 0);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].irrepDim == 2);
    CHECK(d.blocks[0].multiplicity == 2);

    // two inequivalent irreducible pairs side by side
    Rng rng(31);
    const auto g1 = random_irrep(2, rng), g2 = random_irrep(2, rng);
    const auto sum = constructed_rep({g1, g2}, {1, 1}, identity(4));
    d = irrep_decompose(sum, 0);
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.commutant_dimension() == 2);
    CHECK(commutant_basis(sum).size() == 2);
}

TEST_CASE("irrep round trip on constructed representations") {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const auto rep = fx::constructed_representation(1000 + t);
        const auto d = irrep_decompose(rep.generators, t);
        std::vector<std::pair<Index, Index>> got;
        for (const auto &b : d.blocks) got.emplace_back(b.irrepDim, b.multiplicity);
        std::sort(got.begin(), got.end());
        CHECK(got == rep.blocks);
        CHECK(d.reassembly_defect(rep.generators) < 1e-8);
        CHECK(structural_predicates(d.change_of_basis()).unitary);
        CHECK(static_cast<Index>(commutant_basis(rep.generators).size()) == d.commutant_dimension());
        for (const auto &b : d.blocks) CHECK(commutant_basis(b.irrepGenerators).size() == 1);
    }
}

TEST_CASE("intertwiner between equivalent irreps") {
    Rng rng(33);
    const auto g = random_irrep(3, rng);
    const CMatrix U = random_unitary(3, rng);
    std::vector<CMatrix> h;
    for (const auto &x : g) h.push_back(U * x * U.adjoint());
    double res = 1.0;
    const auto W = find_intertwiner(g, h, Tolerance{}, &res);
    REQUIRE(W.has_value());
    CHECK(res < 1e-9);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK((*W * g[i] * W->adjoint() - h[i]).norm() < 1e-9);
    const auto other = random_irrep(3, rng);
    CHECK_FALSE(find_intertwiner(g, other, Tolerance{}).has_value());
}

TEST_CASE("cyclic restriction") {
    // psi already cyclic
    const auto ideal = cyclic_restrict(fx::chsh_ideal());
    CHECK(ideal.unchanged);
    CHECK(ideal.dimension() == 4);

    // example model as a commuting model: span{psi, (M0 (x) Id) psi}
    const auto shat = cyclic_restrict(as_commuting(fx::example_shat()));
    CHECK(shat.dimension() == 2);
    REQUIRE(shat.basisWords.size() == 2);
    CHECK(shat.basisWords[0].first.letters.empty());
    CHECK(shat.basisWords[1].first.letters.size() == 1);
    CHECK(std::holds_alternative<CommutingModel>(shat.model));

    // unreachable block is stripped
    const QuantumModel block = fx::synchronous_block(2, 2, 2, 11);
    const auto r = cyclic_restrict(block);
    CHECK(r.dimension() == 4);
    REQUIRE(std::holds_alternative<QuantumModel>(r.model));
    const auto &q = std::get<QuantumModel>(r.model);
    CHECK(q.dimA == 2);
    CHECK(correlation_of(q).max_difference(correlation_of(block)) < 1e-10);
}

TEST_CASE("cyclic restriction preserves moments and leaves no invariant stabilizer") {
    for (int t = 0; t < 8; ++t) {
        const auto m = fx::central_fixture(static_cast<fx::CentralKind>(t % 3), 400 + t);
        const auto c = cyclic_restrict(m);
        const auto &restricted = c.model;
        CHECK(correlation_of(m).max_difference(std::holds_alternative<QuantumModel>(restricted)
                                                   ? correlation_of(std::get<QuantumModel>(restricted))
                                                   : correlation_of(std::get<CommutingModel>(restricted))) < 1e-10);
        const auto pairs = enumerate_word_pairs(m.scenario, 4);
        for (std::size_t i = 0; i < pairs.size(); i += 13)
            CHECK(std::abs(evaluate_moment(AnyModel(m), pairs[i].first, pairs[i].second) -
                           evaluate_moment(restricted, pairs[i].first, pairs[i].second)) < 1e-9);

        // commutant elements T with T psi = 0 must vanish on the cyclic space
        const CommutingModel cm = std::holds_alternative<QuantumModel>(restricted)
                                      ? as_commuting(std::get<QuantumModel>(restricted))
                                      : std::get<CommutingModel>(restricted);
        auto gens = flatten(cm.M);
        for (const auto &g : flatten(cm.N)) gens.push_back(g);
        const auto basis = commutant_basis(gens);
        CMatrix apply(cm.dim, static_cast<Index>(basis.size()));
        for (std::size_t k = 0; k < basis.size(); ++k) apply.col(static_cast<Index>(k)) = basis[k] * cm.psi;
        CHECK(null_space(apply, 1e-9).cols() == 0);
    }
}

TEST_CASE("state equality") {
    const AnyModel s = fx::example_s(), shat = fx::example_shat();
    const auto eq = states_equal(s, shat);
    CHECK(eq.equal);
    CHECK(eq.cyclic_dim1 == eq.cyclic_dim2);

    CVector aux = kron(basis_vector(2, 0), basis_vector(3, 1));
    const AnyModel padded = tensor_with_aux(fx::chsh_ideal(), aux, 2, 3);
    CHECK(states_equal(AnyModel(fx::chsh_ideal()), padded).equal);

    const auto ne = states_equal(AnyModel(fx::chsh_ideal()), AnyModel(fx::binary_violating()));
    CHECK_FALSE(ne.equal);
    REQUIRE(ne.distinguishing.has_value());
    CHECK(ne.distinguishing->first.length() + ne.distinguishing->second.length() <= 2);
    CHECK(std::abs(ne.value1 - ne.value2) > 1e-6);
}

TEST_CASE("state equality is reflexive, symmetric and unitarily invariant") {
    Rng rng(34);
    const std::vector<QuantumModel> models{fx::chsh_ideal(), fx::chsh_direct_sum(), fx::chsh_padded(),
                                           fx::binary_violating(), fx::chsh_with_entangled_aux()};
    for (std::size_t i = 0; i < models.size(); ++i) {
        CHECK(states_equal(AnyModel(models[i]), AnyModel(models[i])).equal);
        const auto rotated = apply_local_unitaries(models[i], random_unitary(models[i].dimA, rng),
                                                   random_unitary(models[i].dimB, rng));
        CHECK(states_equal(AnyModel(models[i]), AnyModel(rotated)).equal);
        for (std::size_t j = i + 1; j < models.size(); ++j)
            CHECK(states_equal(AnyModel(models[i]), AnyModel(models[j])).equal ==
                  states_equal(AnyModel(models[j]), AnyModel(models[i])).equal);
    }
    CHECK(states_equal(AnyModel(models[0]), AnyModel(models[1])).equal);
    CHECK_FALSE(states_equal(AnyModel(models[0]), AnyModel(models[3])).equal);
}

TEST_CASE("moment precheck") {
    CHECK_FALSE(moment_precheck(AnyModel(fx::chsh_ideal()), AnyModel(fx::chsh_direct_sum()), 3).has_value());
    CHECK(moment_precheck(AnyModel(fx::chsh_ideal()), AnyModel(fx::binary_violating()), 2).has_value());
}
