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
 * @file special.hpp
 * @brief Synchronous and binary models, XOR correlations with the even-rank
 * certificate, and the tilted-CHSH sum-of-squares identities.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qst/dilations.hpp"
#include "qst/models.hpp"
#include "qst/ncpoly.hpp"

namespace qst {

class NotSynchronous : public Error {
  public:
    using Error::Error;
};

struct SwapResidual {
    int x = 0;
    int a = 0;
    double residual = 0.0; ///< ||(M^x_a (x) Id - Id (x) N^x_a) psi||
};

struct ProjectivityResidual {
    Side side = Side::A;
    int input = 0;
    int output = 0;
    double residual = 0.0; ///< ||E^2 - E||
};

struct SyncReport {
    double synchronicity_violation = 0.0; ///< max_x max_{a != b} p(a,b|x,x)
    std::vector<SwapResidual> swap_residuals;
    double max_swap_residual = 0.0;
    bool full_rank = false;
    std::vector<ProjectivityResidual> projectivity_residuals; ///< filled only when full-rank
    double max_projectivity_residual = 0.0;
    bool projective_state = false;
    double projective_state_residual = 0.0;
    bool passed = false;
};

/// Throws ScenarioError unless X = Y and A = B, and NotSynchronous when
/// p(a,b|x,x) exceeds eps for some a != b.
[[nodiscard]] SyncReport synchronous_verify(const QuantumModel &m, Tolerance tol = {});

class LemmaViolated : public Error {
  public:
    LemmaViolated(Side side, int input, Index eigenIndex, double eigenvalue, double residual);
    Side side;
    int input;
    Index eigenIndex;
    double eigenvalue;
    double residual; ///< ||(|phi><phi| (x) Id) psi|| (or the B-side analogue)
};

/// Which branch of the trichotomy an eigenpair of E^x_0 fell into.
struct EigenpairCheck {
    Side side = Side::A;
    int input = 0;
    Index index = 0;
    double eigenvalue = 0.0;
    double support_residual = 0.0;
    char condition = 'a'; ///< 'a': eigenvalue ~ 0, 'b': ~ 1, 'c': invisible to psi
};

struct BinaryRounding {
    QuantumModel model;      ///< projective model with the same correlation
    DilationWitness witness; ///< identity isometries, scalar aux
    bool extremality_asserted = false;
    std::vector<EigenpairCheck> eigenpairs;
    double correlation_difference = 0.0;
    double max_state_residual = 0.0; ///< max ||(M - P) (x) Id psi|| and B analogue
};

/**
 * Replace every binary POVM by the spectral projection of E^x_0 onto
 * eigenvalue 1. Each eigenpair must be near 0, near 1, or orthogonal to the
 * state's support on that side; otherwise LemmaViolated is thrown.
 */
[[nodiscard]] BinaryRounding binary_round(const QuantumModel &m, bool extremality_asserted, Tolerance tol = {});

struct XorCorrelation {
    RMatrix c; ///< X x Y
    bool unbiased = false;
    double max_bias = 0.0; ///< largest marginal imbalance
    Index rank = 0;
};

/// Throws ScenarioError unless nA = nB = 2.
[[nodiscard]] XorCorrelation xor_of(const Correlation &p, Tolerance tol = {});

struct WeightedCorrelation {
    double weight = 0.0;
    Correlation p;
};

struct XorCertificate {
    bool granted = false;
    bool unbiased = false;
    bool extremality_asserted = false;
    bool extremality_refuted = false;
    Index rank = 0;
    bool even_rank = false;
    std::vector<std::string> reasons; ///< why it was denied
    std::string refutation;           ///< explanation when a decomposition refutes extremality
    std::string summary;
};

/**
 * Grants "commuting operator self-test" iff p is unbiased, extremality is
 * asserted, rank(c) is even and positive, and the optional decomposition does
 * not refute extremality. Extremality itself is never decided here.
 */
[[nodiscard]] XorCertificate xor_selftest_certificate(const Correlation &p, bool extremality_asserted,
                                                      const std::vector<WeightedCorrelation> *decomposition = nullptr,
                                                      Tolerance tol = {});

/// Variables of the tilted-CHSH polynomials.
enum TiltedVar : int { kA0 = 0, kA1 = 1, kB0 = 2, kB1 = 3 };

struct TiltedChsh {
    double alpha = 0.0;
    double lambda = 0.0; ///< sqrt(8 + 2 alpha^2)
    double delta = 0.0;  ///< sqrt(8 - 2 alpha^2)
    NcPoly eta;
    std::array<NcPoly, 4> r;
    std::array<NcPoly, 8> s;
    NcPoly lhs;  ///< 2 lambda (lambda - eta)
    NcPoly rhs1; ///< r1^2 + r2^2 + (s1+s2+s3+s4)/2 + 2(s5+s6)
    NcPoly rhs2; ///< r3^2 + r4^2 + (s1+..+s4)/2 + 2(2-a0^2-a1^2)(2-b0^2-b1^2) + the two squared tails
};

/// Throws Error unless 0 <= alpha < 2.
[[nodiscard]] TiltedChsh tilted_chsh_build(double alpha);

struct NamedResidual {
    std::string name;
    double value = 0.0;
};

struct TiltedChshCertificate {
    double alpha = 0.0;
    double lambda = 0.0;
    double delta = 0.0;
    double f_eta = 0.0;
    bool optimal = false;
    double identity_defect_1 = 0.0;
    double identity_defect_2 = 0.0;
    std::vector<NamedResidual> state_residuals; ///< f(r1^2..r4^2), f(s1..s8)
    double max_state_residual = 0.0;
};

/// Evaluates the polynomials with a_x = (M^x_0 - M^x_1) (x) Id and b_y = Id (x) (N^y_0 - N^y_1).
[[nodiscard]] TiltedChshCertificate verify_tilted_sos(const QuantumModel &m, double alpha, Tolerance tol = {});

/// Two-qubit tilted-CHSH model: psi = cos t |00> + sin t |11>, A_x = cos u_x Z + sin u_x X,
/// B_y = cos v_y Z + sin v_y X; params = (t, u0, u1, v0, v1).
[[nodiscard]] QuantumModel tilted_chsh_model(const std::array<double, 5> &params);

struct TiltedOptimum {
    QuantumModel model;
    std::array<double, 5> params{};
    double value = 0.0; ///< f(eta)
    int restarts = 0;
};

/// Seeded Nelder-Mead search over two-qubit projective models maximizing f(eta).
[[nodiscard]] TiltedOptimum optimize_tilted_chsh(double alpha, std::uint64_t seed, int restarts = 8);

} // namespace qst
