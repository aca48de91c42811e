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

#include "fixture_builders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qst/random.hpp"

namespace qst::fixtures {

namespace {

CMatrix proj(const CVector &v) { return v * v.adjoint(); }

CMatrix diag(std::initializer_list<double> d) {
    CMatrix m = CMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

CMatrix block_diag(const CMatrix &a, const CMatrix &b) {
    CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

CMatrix pauli_z() { return diag({1.0, -1.0}); }

CMatrix pauli_x() {
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

std::vector<CMatrix> binary_from_observable(const CMatrix &obs) {
    const CMatrix id = identity(obs.rows());
    return {0.5 * (id + obs), 0.5 * (id - obs)};
}

CVector max_entangled(Index d) {
    CVector v = CVector::Zero(d * d);
    for (Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return v;
}

Measurements conjugate(const Measurements &ops, const CMatrix &U) {
    Measurements out;
    for (const auto &fam : ops) {
        auto &f = out.emplace_back();
        for (const auto &op : fam) {
            CMatrix t = U * op * U.adjoint();
            f.push_back(0.5 * (t + t.adjoint()));
        }
    }
    return out;
}

} // namespace

QuantumModel example_shat() {
    QuantumModel m;
    m.scenario = {1, 1, 2, 2};
    m.dimA = m.dimB = 2;
    m.M = {{diag({1, 0}), diag({0, 1})}};
    m.N = m.M;
    m.psi = max_entangled(2);
    return m;
}

QuantumModel example_s() {
    QuantumModel m;
    m.scenario = {1, 1, 2, 2};
    m.dimA = m.dimB = 3;
    m.M = {{diag({1, 0, 0}), diag({0, 1, 1})}};
    m.N = m.M;
    m.psi = CVector::Zero(9);
    m.psi(0) = 1.0 / std::sqrt(2.0);
    m.psi(4) = 0.5;
    m.psi(8) = 0.5;
    return m;
}

QuantumModel chsh_ideal() {
    QuantumModel m;
    m.scenario = {2, 2, 2, 2};
    m.dimA = m.dimB = 2;
    const CMatrix Z = pauli_z(), X = pauli_x();
    const double r = 1.0 / std::sqrt(2.0);
    m.M = {binary_from_observable(Z), binary_from_observable(X)};
    m.N = {binary_from_observable(r * (Z + X)), binary_from_observable(r * (Z - X))};
    m.psi = max_entangled(2);
    return m;
}

Correlation chsh_ideal_correlation() {
    Correlation p({2, 2, 2, 2});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    const int parity = (a + b + x * y) % 2;
                    p(a, b, x, y) = (1.0 + (parity == 0 ? 1.0 : -1.0) / std::sqrt(2.0)) / 4.0;
                }
    return p;
}

QuantumModel chsh_with_entangled_aux() {
    CVector aux = CVector::Zero(4);
    aux(0) = std::sqrt(0.7);
    aux(3) = std::sqrt(0.3);
    return tensor_with_aux(chsh_ideal(), aux, 2, 2);
}

QuantumModel chsh_direct_sum() {
    const QuantumModel ideal = chsh_ideal();
    QuantumModel m;
    m.scenario = ideal.scenario;
    m.dimA = m.dimB = 4;
    auto doubled = [](const Measurements &ops) {
        Measurements out;
        for (const auto &fam : ops) {
            auto &f = out.emplace_back();
            for (const auto &op : fam) f.push_back(block_diag(op, op));
        }
        return out;
    };
    m.M = doubled(ideal.M);
    m.N = doubled(ideal.N);
    // psi = 0.8 psi~ on block (0,0) + 0.6 psi~ on block (1,1)
    CMatrix c = CMatrix::Zero(4, 4);
    const CMatrix t = coefficient_matrix(ideal.psi, 2, 2);
    c.topLeftCorner(2, 2) = 0.8 * t;
    c.bottomRightCorner(2, 2) = 0.6 * t;
    m.psi = from_coefficient_matrix(c);
    return m;
}

QuantumModel chsh_padded() {
    const QuantumModel ideal = chsh_ideal();
    QuantumModel m = ideal;
    m.dimA = 3;
    m.M.clear();
    for (const auto &fam : ideal.M)
        m.M.push_back({block_diag(fam[0], CMatrix::Constant(1, 1, 1.0 / 3.0)),
                       block_diag(fam[1], CMatrix::Constant(1, 1, 2.0 / 3.0))});
    CMatrix c = CMatrix::Zero(3, 2);
    c.topRows(2) = coefficient_matrix(ideal.psi, 2, 2);
    m.psi = from_coefficient_matrix(c);
    return m;
}

QuantumModel binary_violating() {
    QuantumModel m = chsh_ideal();
    m.M[0] = {0.5 * identity(2), 0.5 * identity(2)};
    return m;
}

QuantumModel synchronous_full_rank(Index d, int nX, int nA, std::uint64_t seed) {
    Rng rng(seed);
    QuantumModel m;
    m.scenario = {nX, nX, nA, nA};
    m.dimA = m.dimB = d;
    for (int x = 0; x < nX; ++x) {
        auto pvm = random_pvm(d, nA, rng);
        std::vector<CMatrix> t;
        for (const auto &p : pvm) t.push_back(p.transpose());
        m.M.push_back(std::move(pvm));
        m.N.push_back(std::move(t));
    }
    m.psi = max_entangled(d);
    return m;
}

QuantumModel synchronous_block(Index d, int nX, int nA, std::uint64_t seed) {
    const QuantumModel inner = synchronous_full_rank(d, nX, nA, seed);
    QuantumModel m = inner;
    m.dimA = m.dimB = d + 1;
    auto pad = [&](const Measurements &ops) {
        Measurements out;
        for (const auto &fam : ops) {
            auto &f = out.emplace_back();
            for (std::size_t a = 0; a < fam.size(); ++a)
                f.push_back(block_diag(fam[a], CMatrix::Constant(1, 1, a == 0 ? 1.0 : 0.0)));
        }
        return out;
    };
    m.M = pad(inner.M);
    m.N = pad(inner.N);
    CMatrix c = CMatrix::Zero(d + 1, d + 1);
    c.topLeftCorner(d, d) = coefficient_matrix(inner.psi, d, d);
    m.psi = from_coefficient_matrix(c);
    return m;
}

QuantumModel trine_model() {
    QuantumModel m;
    m.scenario = {1, 1, 3, 1};
    m.dimA = 2;
    m.dimB = 1;
    std::vector<CMatrix> trine;
    for (int j = 0; j < 3; ++j) {
        const double t = 2.0 * std::numbers::pi * j / 3.0;
        CVector phi(2);
        phi << std::cos(t), std::sin(t);
        trine.push_back((2.0 / 3.0) * proj(phi));
    }
    m.M = {trine};
    m.N = {{identity(1)}};
    m.psi = CVector::Zero(2);
    m.psi(0) = 1.0;
    return m;
}

QuantumModel support_mixing() {
    QuantumModel m;
    m.scenario = {1, 1, 2, 2};
    m.dimA = m.dimB = 3;
    CVector v = CVector::Zero(3);
    v(1) = v(2) = 1.0 / std::sqrt(2.0);
    m.M = {{proj(v), identity(3) - proj(v)}};
    m.N = {{diag({1, 0, 0}), diag({0, 1, 1})}};
    m.psi = CVector::Zero(9);
    m.psi(0) = m.psi(4) = 1.0 / std::sqrt(2.0);
    return m;
}

QuantumModel random_model(const Scenario &s, Index dimA, Index dimB, bool projective, std::uint64_t seed) {
    Rng rng(seed);
    QuantumModel m;
    m.scenario = s;
    m.dimA = dimA;
    m.dimB = dimB;
    for (int x = 0; x < s.nX; ++x) m.M.push_back(projective ? random_pvm(dimA, s.nA, rng) : random_povm(dimA, s.nA, rng));
    for (int y = 0; y < s.nY; ++y) m.N.push_back(projective ? random_pvm(dimB, s.nB, rng) : random_povm(dimB, s.nB, rng));
    m.psi = random_unit_vector(dimA * dimB, rng);
    return m;
}

QuantumModel central_fixture(CentralKind kind, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> small(1, 3);
    const Scenario s{small(rng), small(rng), 1 + small(rng), 1 + small(rng)};
    if (kind == CentralKind::FullRank) {
        const Index d = 1 + small(rng);
        return random_model(s, d, d, rng() % 2 == 0, rng());
    }
    // support of rank r inside dimension r + j on both sides
    const Index r = 1 + small(rng);
    const Index j = small(rng);
    const Index d = std::min<Index>(r + j, 6);
    std::vector<double> coeffs;
    for (Index i = 0; i < r; ++i) coeffs.push_back(1.0 + static_cast<double>(i));
    CVector inner = random_state_with_schmidt(r, r, coeffs, rng);
    CMatrix c = CMatrix::Zero(d, d);
    c.topLeftCorner(r, r) = coefficient_matrix(inner, r, r);

    QuantumModel m;
    m.scenario = s;
    m.dimA = m.dimB = d;
    const bool projective = rng() % 2 == 0;
    auto fam = [&](Index k) {
        if (kind == CentralKind::SupportMixing) return projective ? random_pvm(d, k, rng) : random_povm(d, k, rng);
        auto top = projective ? random_pvm(r, k, rng) : random_povm(r, k, rng);
        auto bottom = projective ? random_pvm(d - r, k, rng) : random_povm(d - r, k, rng);
        std::vector<CMatrix> out;
        for (Index a = 0; a < k; ++a) out.push_back(block_diag(top[a], bottom[a]));
        return out;
    };
    for (int x = 0; x < s.nX; ++x) m.M.push_back(fam(s.nA));
    for (int y = 0; y < s.nY; ++y) m.N.push_back(fam(s.nB));
    // hide the block structure behind local unitaries
    const CMatrix U = random_unitary(d, rng), V = random_unitary(d, rng);
    m.M = conjugate(m.M, U);
    m.N = conjugate(m.N, V);
    m.psi = from_coefficient_matrix(U * c * V.transpose());
    return m;
}

ConstructedRep constructed_representation(std::uint64_t seed, Index maxDim) {
    Rng rng(seed);
    std::uniform_int_distribution<int> nb(1, 3), nd(1, 3), nm(1, 3);
    for (;;) {
        const int count = nb(rng);
        std::vector<std::pair<Index, Index>> blocks;
        Index dim = 0;
        for (int b = 0; b < count; ++b) {
            blocks.emplace_back(nd(rng), nm(rng));
            dim += blocks.back().first * blocks.back().second;
        }
        if (dim > maxDim) continue;
        // two random Hermitian matrices generate the full matrix algebra generically
        std::vector<std::vector<CMatrix>> irreps;
        for (const auto &[n, m] : blocks) irreps.push_back({random_hermitian(n, rng), random_hermitian(n, rng)});
        const CMatrix U = random_unitary(dim, rng);
        ConstructedRep out;
        for (std::size_t g = 0; g < 2; ++g) {
            CMatrix op = CMatrix::Zero(dim, dim);
            Index off = 0;
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                const CMatrix b = kron(irreps[i][g], identity(blocks[i].second));
                op.block(off, off, b.rows(), b.cols()) = b;
                off += b.rows();
            }
            out.generators.push_back(U * op * U.adjoint());
        }
        std::sort(blocks.begin(), blocks.end());
        out.blocks = std::move(blocks);
        return out;
    }
}

QuantumModel deterministic_binary() {
    QuantumModel m;
    m.scenario = {2, 2, 2, 2};
    m.dimA = m.dimB = 1;
    const std::vector<CMatrix> fam{identity(1), CMatrix::Zero(1, 1)};
    m.M = {fam, fam};
    m.N = {fam, fam};
    m.psi = CVector::Ones(1);
    return m;
}

} // namespace qst::fixtures
