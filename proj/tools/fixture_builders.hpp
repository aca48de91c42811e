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

// Deterministic constructions shared by the fixture generator and the tests.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qst/models.hpp"
#include "qst/special.hpp"

namespace qst::fixtures {

/// 2-qubit model with one binary PVM per side and the maximally entangled state.
QuantumModel example_shat();
/// 3-dimensional model of the same correlation with Schmidt rank 3.
QuantumModel example_s();

/// EPR pair, A = Z, X and B = (Z +- X)/sqrt 2.
QuantumModel chsh_ideal();
/// (1 + (-1)^(a+b+xy)/sqrt 2)/4
Correlation chsh_ideal_correlation();

/// Ideal CHSH model tensored with the entangled register sqrt(0.7)|00> + sqrt(0.3)|11>.
QuantumModel chsh_with_entangled_aux();
/// Block-diagonal copy of two CHSH blocks on C^2 (+) C^2 per side, state spread over blocks (0,0) and (1,1).
QuantumModel chsh_direct_sum();
/// Ideal CHSH on Alice's first two levels plus a third level where M^x_0 has eigenvalue 1/3.
QuantumModel chsh_padded();
/// EPR pair where Alice's first measurement is {Id/2, Id/2}.
QuantumModel binary_violating();

/// Maximally entangled state on C^d (x) C^d with random PVMs and N = M^T.
QuantumModel synchronous_full_rank(Index d, int nX, int nA, std::uint64_t seed);
/// Synchronous model whose state lives on a proper block of C^(d+1), block-diagonal PVMs.
QuantumModel synchronous_block(Index d, int nX, int nA, std::uint64_t seed);

/// Trine POVM on Alice, trivial Bob, product state.
QuantumModel trine_model();

/// Rank-2 state in C^3 (x) C^3 with an Alice projector mixing the support and its complement.
QuantumModel support_mixing();

/// Random valid model with dims <= maxDim, random POVMs (or PVMs) and a random state.
QuantumModel random_model(const Scenario &s, Index dimA, Index dimB, bool projective, std::uint64_t seed);

enum class CentralKind { FullRank, BlockDiagonal, SupportMixing };
/// Fixture for the two centrally-supported criteria.
QuantumModel central_fixture(CentralKind kind, std::uint64_t seed);

/// Representation (+)_i g_i (x) Id_{m_i}, hidden by a random unitary, with random
/// irreducible pairs g_i. `blocks` lists the planted (n_i, m_i), sorted.
struct ConstructedRep {
    std::vector<CMatrix> generators;
    std::vector<std::pair<Index, Index>> blocks;
};
ConstructedRep constructed_representation(std::uint64_t seed, Index maxDim = 12);

/// Deterministic assignment a = b = 0 for every input (classical, 2 inputs, binary).
QuantumModel deterministic_binary();

} // namespace qst::fixtures
