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
 * @file models.hpp
 * @brief Bipartite measurement models, correlations and moments.
 *
 * A QuantumModel is a tensor-product model: POVMs M[x][a] on H_A, N[y][b] on
 * H_B and a unit vector psi in H_A (x) H_B. A CommutingModel puts both
 * families on one space and requires them to commute. Words are formal
 * products of the abstract generators m^x_a (side A) or n^y_b (side B); the
 * abstract state of a model is evaluated on pairs of words.
 */

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "qst/numerics.hpp"

namespace qst {

class InvalidModel : public Error {
  public:
    using Error::Error;
};

class ScenarioError : public Error {
  public:
    using Error::Error;
};

struct Scenario {
    int nX = 1;
    int nY = 1;
    int nA = 1;
    int nB = 1;

    /// Throws ScenarioError unless every count is >= 1.
    void validate() const;
    [[nodiscard]] bool binary() const noexcept { return nA == 2 && nB == 2; }
    [[nodiscard]] bool synchronous_shape() const noexcept { return nX == nY && nA == nB; }

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

[[nodiscard]] std::string to_string(const Scenario &s);

/// Measurement operators indexed [input][output].
using Measurements = std::vector<std::vector<CMatrix>>;

struct QuantumModel {
    Scenario scenario;
    Index dimA = 1;
    Index dimB = 1;
    Measurements M;
    Measurements N;
    CVector psi;
};

struct CommutingModel {
    Scenario scenario;
    Index dim = 1;
    Measurements M;
    Measurements N;
    CVector psi;
};

/// Table p(a,b|x,y); stored flat with index ((a*nB + b)*nX + x)*nY + y.
class Correlation {
  public:
    Correlation() = default;
    explicit Correlation(Scenario s);

    [[nodiscard]] const Scenario &scenario() const noexcept { return scenario_; }
    [[nodiscard]] double operator()(int a, int b, int x, int y) const { return p_[index(a, b, x, y)]; }
    double &operator()(int a, int b, int x, int y) { return p_[index(a, b, x, y)]; }
    [[nodiscard]] const std::vector<double> &values() const noexcept { return p_; }
    [[nodiscard]] std::vector<double> &values() noexcept { return p_; }

    /// Largest entrywise |p - q|; throws ScenarioError on scenario mismatch.
    [[nodiscard]] double max_difference(const Correlation &other) const;

  private:
    [[nodiscard]] std::size_t index(int a, int b, int x, int y) const;

    Scenario scenario_;
    std::vector<double> p_;
};

struct Letter {
    int input = 0;
    int output = 0;
    friend auto operator<=>(const Letter &, const Letter &) = default;
};

struct Word {
    Side side = Side::A;
    std::vector<Letter> letters; ///< empty = identity

    [[nodiscard]] std::size_t length() const noexcept { return letters.size(); }
    friend bool operator==(const Word &, const Word &) = default;
};

/// Word with letters in reverse order; since every generator is self-adjoint
/// this is the adjoint word.
[[nodiscard]] Word reversed(const Word &w);
[[nodiscard]] std::string to_string(const Word &w);

/// Pair of words acting on the A and B factors (or, in a commuting model,
/// the product pi(wA) pi(wB)).
using WordPair = std::pair<Word, Word>;

/**
 * All word pairs with |wA| + |wB| <= max_total_length in length-lex order:
 * shorter first, then lexicographic on the letter sequence wA followed by wB,
 * with side A letters before side B letters and letters ordered by
 * (input, output).
 */
[[nodiscard]] std::vector<WordPair> enumerate_word_pairs(const Scenario &s, int max_total_length);

/// Strict length-lex order used by enumerate_word_pairs().
[[nodiscard]] bool length_lex_less(const WordPair &lhs, const WordPair &rhs);

struct ModelFlags {
    bool projective = false;
    bool full_rank = false;
    bool synchronous_scenario = false;
    bool binary = false;
};

struct Violation {
    std::string invariant; ///< e.g. "POVM completeness"
    std::string location;  ///< e.g. "M[0]"
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
};

[[nodiscard]] ValidationReport validate_quantum_model(const QuantumModel &m, Tolerance tol = {});
[[nodiscard]] ValidationReport validate_commuting_model(const CommutingModel &m, Tolerance tol = {});
[[nodiscard]] ValidationReport validate_correlation(const Correlation &p, Tolerance tol = {});

/// Throws InvalidModel listing the first violation when the report is not empty.
void require_valid(const QuantumModel &m, Tolerance tol = {});
void require_valid(const CommutingModel &m, Tolerance tol = {});

/// What correlation_of() had to scrub from the raw expectation values.
struct CorrelationNotes {
    double max_imaginary = 0.0;
    double max_clamped = 0.0; ///< largest negative value clamped to zero
    bool renormalized = false;
};

[[nodiscard]] Correlation correlation_of(const QuantumModel &m, Tolerance tol = {},
                                         CorrelationNotes *notes = nullptr);
[[nodiscard]] Correlation correlation_of(const CommutingModel &m, Tolerance tol = {},
                                         CorrelationNotes *notes = nullptr);

/// Concrete operator pi(w) = M[x1][a1] ... M[xk][ak] on a space of dimension `dim`.
[[nodiscard]] CMatrix word_operator(const Measurements &ops, Index dim, const Word &w);

/// <psi| pi_A(wA) (x) pi_B(wB) |psi>
[[nodiscard]] Complex evaluate_moment(const QuantumModel &m, const Word &wA, const Word &wB);
/// <psi| pi(wA) pi(wB) |psi>
[[nodiscard]] Complex evaluate_moment(const CommutingModel &m, const Word &wA, const Word &wB);

[[nodiscard]] ModelFlags classify(const QuantumModel &m, Tolerance tol = {});

/// True iff f_S(m - m^2) and f_S(n - n^2) vanish for every generator.
[[nodiscard]] bool is_projective_state(const QuantumModel &m, Tolerance tol = {});
/// Largest |f_S(m - m^2)| or |f_S(n - n^2)|.
[[nodiscard]] double projective_state_residual(const QuantumModel &m);

/// Commuting model on H_A (x) H_B with operators M (x) Id and Id (x) N.
[[nodiscard]] CommutingModel as_commuting(const QuantumModel &m);

/**
 * Append auxiliary registers: H_A -> H_A (x) K_A, H_B -> H_B (x) K_B, operators
 * act as M (x) Id, and the state becomes psi (x) aux regrouped as
 * (H_A (x) K_A) (x) (H_B (x) K_B). `aux` lives on K_A (x) K_B.
 */
[[nodiscard]] QuantumModel tensor_with_aux(const QuantumModel &m, const CVector &aux, Index auxDimA,
                                           Index auxDimB);

/// Conjugate by local unitaries: M -> U M U^dag, N -> V N V^dag, psi -> (U (x) V) psi.
[[nodiscard]] QuantumModel apply_local_unitaries(const QuantumModel &m, const CMatrix &U,
                                                 const CMatrix &V);

} // namespace qst
