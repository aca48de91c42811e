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

// Independent reference computations used as oracles by the unit tests. These
// deliberately avoid the library's own routines where an alternative is cheap.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qst/models.hpp"
#include "qst/numerics.hpp"

namespace qst::test {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline CMatrix cdiag(std::initializer_list<double> d) {
    CMatrix m = CMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

inline CMatrix pauli_x() {
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

inline CMatrix pauli_z() { return cdiag({1.0, -1.0}); }

// Entry-by-entry tensor product straight from the definition.
inline CMatrix naive_kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// <psi| A (x) B |psi> by explicit summation over composite indices.
inline Complex naive_expectation(const CVector &psi, const CMatrix &A, const CMatrix &B) {
    const Index dA = A.rows(), dB = B.rows();
    Complex s = 0.0;
    for (Index i = 0; i < dA; ++i)
        for (Index k = 0; k < dB; ++k)
            for (Index j = 0; j < dA; ++j)
                for (Index l = 0; l < dB; ++l) s += std::conj(psi(i * dB + k)) * A(i, j) * B(k, l) * psi(j * dB + l);
    return s;
}

inline double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qst::test
