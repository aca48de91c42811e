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

// Seeded generators for matrices, states and measurements. Every randomized
// routine in the library takes an explicit Rng so results are reproducible.

#include <cstdint>
#include <random>
#include <vector>

#include "qst/numerics.hpp"

namespace qst {

using Rng = std::mt19937_64;

[[nodiscard]] CMatrix random_ginibre(Index rows, Index cols, Rng &rng);
[[nodiscard]] CMatrix random_hermitian(Index d, Rng &rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
[[nodiscard]] CMatrix random_unitary(Index d, Rng &rng);
[[nodiscard]] CVector random_unit_vector(Index d, Rng &rng);

/// Random POVM with k outcomes on C^d: M_i = S^{-1/2} G_i G_i^dag S^{-1/2}.
[[nodiscard]] std::vector<CMatrix> random_povm(Index d, Index k, Rng &rng);

/// Random PVM with k outcomes (some outcomes may be the zero projection when k > d).
[[nodiscard]] std::vector<CMatrix> random_pvm(Index d, Index k, Rng &rng);

/// Random bipartite unit vector with the given Schmidt coefficients (normalized internally).
[[nodiscard]] CVector random_state_with_schmidt(Index dimA, Index dimB,
                                                const std::vector<double> &coefficients,
                                                Rng &rng);

} // namespace qst
