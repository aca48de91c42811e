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
 * @file ncpoly.hpp
 * @brief Noncommutative polynomials with real coefficients, stored as merged
 * monomial lists, evaluated by substituting concrete matrices.
 */

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qst/numerics.hpp"

namespace qst {

class NcPoly {
  public:
    using Monomial = std::vector<int>; ///< variable indices, left to right

    NcPoly() = default;
    /// Constant polynomial.
    NcPoly(double c); // NOLINT(google-explicit-constructor)
    static NcPoly variable(int v);

    NcPoly &operator+=(const NcPoly &o);
    NcPoly &operator-=(const NcPoly &o);
    NcPoly &operator*=(double c);

    friend NcPoly operator+(NcPoly a, const NcPoly &b) { return a += b; }
    friend NcPoly operator-(NcPoly a, const NcPoly &b) { return a -= b; }
    friend NcPoly operator-(NcPoly a) { return a *= -1.0; }
    friend NcPoly operator*(NcPoly a, double c) { return a *= c; }
    friend NcPoly operator*(double c, NcPoly a) { return a *= c; }
    friend NcPoly operator*(const NcPoly &a, const NcPoly &b);

    [[nodiscard]] const std::map<Monomial, double> &terms() const noexcept { return terms_; }
    [[nodiscard]] int degree() const;

    /// Substitute vars[i] for variable i; `dim` is the size of the identity.
    [[nodiscard]] CMatrix evaluate(std::span<const CMatrix> vars, Index dim) const;

    /// Human-readable form with the given variable names.
    [[nodiscard]] std::string to_string(std::span<const std::string> names) const;

  private:
    void prune();
    std::map<Monomial, double> terms_;
};

} // namespace qst
