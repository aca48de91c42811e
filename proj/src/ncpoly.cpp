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

#include "qst/ncpoly.hpp"

#include <cmath>
#include <sstream>

namespace qst {

NcPoly::NcPoly(double c) {
    if (c != 0.0) terms_[{}] = c;
}

NcPoly NcPoly::variable(int v) {
    NcPoly p;
    p.terms_[{v}] = 1.0;
    return p;
}

void NcPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0.0) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

NcPoly &NcPoly::operator+=(const NcPoly &o) {
    for (const auto &[m, c] : o.terms_) terms_[m] += c;
    prune();
    return *this;
}

NcPoly &NcPoly::operator-=(const NcPoly &o) {
    for (const auto &[m, c] : o.terms_) terms_[m] -= c;
    prune();
    return *this;
}

NcPoly &NcPoly::operator*=(double c) {
    for (auto &[m, v] : terms_) v *= c;
    prune();
    return *this;
}

NcPoly operator*(const NcPoly &a, const NcPoly &b) {
    NcPoly out;
    for (const auto &[ma, ca] : a.terms_)
        for (const auto &[mb, cb] : b.terms_) {
            NcPoly::Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            out.terms_[m] += ca * cb;
        }
    out.prune();
    return out;
}

int NcPoly::degree() const {
    int d = 0;
    for (const auto &[m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
    return d;
}

CMatrix NcPoly::evaluate(std::span<const CMatrix> vars, Index dim) const {
    CMatrix out = CMatrix::Zero(dim, dim);
    for (const auto &[m, c] : terms_) {
        CMatrix prod = identity(dim);
        for (int v : m) {
            if (v < 0 || static_cast<std::size_t>(v) >= vars.size())
                throw DimensionError("NcPoly::evaluate: variable index out of range");
            prod = prod * vars[static_cast<std::size_t>(v)];
        }
        out += c * prod;
    }
    return out;
}

std::string NcPoly::to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto &[m, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        const double mag = std::abs(c);
        if (m.empty() || mag != 1.0) {
            os << mag;
            if (!m.empty()) os << "*";
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i) os << "*";
            const auto v = static_cast<std::size_t>(m[i]);
            os << (v < names.size() ? names[v] : "x" + std::to_string(v));
        }
    }
    return os.str();
}

} // namespace qst
