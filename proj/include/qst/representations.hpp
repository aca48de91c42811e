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
 * @file representations.hpp
 * @brief Commutants, irreducible decomposition of finite-dimensional
 * *-representations, cyclic restriction and equality of abstract states.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qst/models.hpp"
#include "qst/numerics.hpp"

namespace qst {

class AlgebraNotSemisimple : public Error {
  public:
    using Error::Error;
};

using AnyModel = std::variant<QuantumModel, CommutingModel>;

/// Every measurement operator of a family, flattened in (input, output) order.
[[nodiscard]] std::vector<CMatrix> flatten(const Measurements &ops);

/**
 * Orthonormal (Hilbert-Schmidt) basis of {T : [T, G] = 0 for all G}, computed
 * as the null space of the stacked maps T -> GT - TG. Throws if `generators`
 * is empty or the matrices are not square of a common size.
 */
[[nodiscard]] std::vector<CMatrix> commutant_basis(std::span<const CMatrix> generators,
                                                   Tolerance tol = {});

/// One isotypic component: C^n (x) C^m with the algebra acting as g (x) Id_m.
struct RepBlock {
    Index irrepDim = 0;
    Index multiplicity = 0;
    /// d x (n*m) orthonormal columns; column a*m + j is basis vector a of copy j.
    CMatrix changeOfBasis;
    /// n x n matrices, one per input generator, in input order.
    std::vector<CMatrix> irrepGenerators;
};

/// Two irreducible components whose intertwiner residual fell in [eps, 100 eps]:
/// reported as distinct blocks, but they might be the same representation.
struct AmbiguousMerge {
    std::size_t first = 0;  ///< irreducible component index in discovery order
    std::size_t second = 0;
    double residual = 0.0;
};

struct RepDecomposition {
    Index dim = 0;
    std::vector<RepBlock> blocks;
    std::vector<AmbiguousMerge> ambiguous;

    /// Concatenation of the block bases; unitary.
    [[nodiscard]] CMatrix change_of_basis() const;
    /// Sum of m_i^2.
    [[nodiscard]] Index commutant_dimension() const;
    /// Block-diagonal operator sum_i g_i (x) Id_{m_i} for generator `k`, in the new basis.
    [[nodiscard]] CMatrix block_operator(std::size_t k) const;
    /// max_k ||Q block_operator(k) Q^dag - G_k||
    [[nodiscard]] double reassembly_defect(std::span<const CMatrix> generators) const;
};

/**
 * Decompose the *-algebra generated by `generators` (adjoints are added) as
 * a direct sum of irreducible blocks with multiplicity. Irreducible subspaces
 * are found by splitting with seeded random Hermitian elements of the
 * commutant; equivalent irreducibles are merged through a unitary intertwiner.
 * Blocks are sorted by irrep dimension, then by the traces of the irrep
 * generators, then by multiplicity.
 */
[[nodiscard]] RepDecomposition irrep_decompose(std::span<const CMatrix> generators,
                                               std::uint64_t seed, Tolerance tol = {});

/**
 * Unitary U with U g_from U^dag = g_to for every generator pair, if the two
 * irreducible families are equivalent. `residual` receives the smallest
 * singular value of the intertwiner system.
 */
[[nodiscard]] std::optional<CMatrix> find_intertwiner(std::span<const CMatrix> from,
                                                      std::span<const CMatrix> to, Tolerance tol,
                                                      double *residual = nullptr);

struct CyclicModel {
    /// The compressed model. A QuantumModel when the cyclic subspace is a
    /// tensor product K_A (x) K_B (including the whole space), otherwise a
    /// CommutingModel on the cyclic subspace.
    AnyModel model;
    /// Words whose images pi(w) psi, orthonormalized in order, span the space.
    std::vector<WordPair> basisWords;
    /// Isometry from the cyclic space into the original space.
    CMatrix embedding;
    bool unchanged = false; ///< psi was already cyclic

    [[nodiscard]] Index dimension() const noexcept { return embedding.cols(); }
};

/**
 * Restrict to the cyclic subspace generated by psi. Words are enumerated in
 * length-lex order by left-multiplying kept words with single letters, and
 * enumeration stops once a whole length adds nothing.
 */
[[nodiscard]] CyclicModel cyclic_restrict(const QuantumModel &m, Tolerance tol = {});
[[nodiscard]] CyclicModel cyclic_restrict(const CommutingModel &m, Tolerance tol = {});
[[nodiscard]] CyclicModel cyclic_restrict(const AnyModel &m, Tolerance tol = {});

struct StateEquality {
    bool equal = false;
    /// When equal: unitary from the cyclic space of model 1 onto that of model
    /// 2, expressed between the ambient spaces (dim2 x dim1 partial isometry).
    CMatrix unitary;
    /// When not equal: a word pair on which the two moments differ.
    std::optional<WordPair> distinguishing;
    Complex value1{};
    Complex value2{};
    double gram_residual = 0.0;
    double intertwining_residual = 0.0;
    Index cyclic_dim1 = 0;
    Index cyclic_dim2 = 0;
};

/**
 * Decide f_1 = f_2 through GNS uniqueness: both models are cyclically
 * restricted, Gram matrices of the shared word frame are compared, and the
 * induced map between cyclic spaces is checked to intertwine every generator.
 */
[[nodiscard]] StateEquality states_equal(const AnyModel &m1, const AnyModel &m2, Tolerance tol = {});

/// Moment of a word pair in either kind of model.
[[nodiscard]] Complex evaluate_moment(const AnyModel &m, const Word &wA, const Word &wB);

/// Degree-bounded comparison of moments; a heuristic pre-check only. Returns
/// the first word pair (length-lex) whose moments differ, if any.
[[nodiscard]] std::optional<WordPair> moment_precheck(const AnyModel &m1, const AnyModel &m2,
                                                      int max_total_length, Tolerance tol = {});

[[nodiscard]] const Scenario &scenario_of(const AnyModel &m);

} // namespace qst
