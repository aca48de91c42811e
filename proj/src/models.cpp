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

#include "qst/models.hpp"
#include "qst/schmidt_support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qst {

void Scenario::validate() const {
    if (nX < 1 || nY < 1 || nA < 1 || nB < 1) {
        throw ScenarioError("scenario counts must all be >= 1, got " + to_string(*this));
    }
}

std::string to_string(const Scenario &s) {
    std::ostringstream os;
    os << "(nX=" << s.nX << ", nY=" << s.nY << ", nA=" << s.nA << ", nB=" << s.nB << ")";
    return os.str();
}

Correlation::Correlation(Scenario s)
    : scenario_(s), p_(static_cast<std::size_t>(s.nA * s.nB * s.nX * s.nY), 0.0) {
    s.validate();
}

std::size_t Correlation::index(int a, int b, int x, int y) const {
    const auto &s = scenario_;
    if (a < 0 || a >= s.nA || b < 0 || b >= s.nB || x < 0 || x >= s.nX || y < 0 || y >= s.nY) {
        throw ScenarioError("correlation index out of range");
    }
    return static_cast<std::size_t>(((a * s.nB + b) * s.nX + x) * s.nY + y);
}

double Correlation::max_difference(const Correlation &other) const {
    if (!(scenario_ == other.scenario_)) {
        throw ScenarioError("scenario mismatch: " + to_string(scenario_) + " vs " +
                            to_string(other.scenario_));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) worst = std::max(worst, std::abs(p_[i] - other.p_[i]));
    return worst;
}

Word reversed(const Word &w) {
    Word r = w;
    std::reverse(r.letters.begin(), r.letters.end());
    return r;
}

std::string to_string(const Word &w) {
    if (w.letters.empty()) return "1";
    std::ostringstream os;
    const char g = w.side == Side::A ? 'm' : 'n';
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) os << '*';
        os << g << '^' << w.letters[i].input << '_' << w.letters[i].output;
    }
    return os.str();
}

namespace {

// Sequence key used for length-lex ordering: A letters then B letters.
struct SeqLetter {
    int side;
    Letter letter;
    friend auto operator<=>(const SeqLetter &, const SeqLetter &) = default;
};

std::vector<SeqLetter> sequence(const WordPair &w) {
    std::vector<SeqLetter> s;
    for (const auto &l : w.first.letters) s.push_back({0, l});
    for (const auto &l : w.second.letters) s.push_back({1, l});
    return s;
}

} // namespace

bool length_lex_less(const WordPair &lhs, const WordPair &rhs) {
    const auto a = sequence(lhs);
    const auto b = sequence(rhs);
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::vector<WordPair> enumerate_word_pairs(const Scenario &s, int max_total_length) {
    std::vector<Letter> lettersA;
    std::vector<Letter> lettersB;
    for (int x = 0; x < s.nX; ++x)
        for (int a = 0; a < s.nA; ++a) lettersA.push_back({x, a});
    for (int y = 0; y < s.nY; ++y)
        for (int b = 0; b < s.nB; ++b) lettersB.push_back({y, b});

    std::vector<WordPair> out;
    for (int total = 0; total <= max_total_length; ++total) {
        const auto first = out.size();
        for (int lenA = total; lenA >= 0; --lenA) {
            const int lenB = total - lenA;
            std::vector<std::size_t> ia(static_cast<std::size_t>(lenA), 0);
            std::vector<std::size_t> ib(static_cast<std::size_t>(lenB), 0);
            auto advance = [](std::vector<std::size_t> &digits, std::size_t base) {
                for (std::size_t k = digits.size(); k-- > 0;) {
                    if (++digits[k] < base) return true;
                    digits[k] = 0;
                }
                return false;
            };
            bool moreA = true;
            while (moreA) {
                bool moreB = true;
                while (moreB) {
                    WordPair wp{Word{Side::A, {}}, Word{Side::B, {}}};
                    for (auto k : ia) wp.first.letters.push_back(lettersA[k]);
                    for (auto k : ib) wp.second.letters.push_back(lettersB[k]);
                    out.push_back(std::move(wp));
                    moreB = lenB > 0 && advance(ib, lettersB.size());
                }
                moreA = lenA > 0 && advance(ia, lettersA.size());
            }
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), length_lex_less);
    }
    return out;
}

// ---------------------------------------------------------------------------
// validation

namespace {

std::string family_name(char side, int input) {
    std::ostringstream os;
    os << side << '[' << input << ']';
    return os.str();
}

void check_family_shapes(const Measurements &ops, int nInputs, int nOutputs, Index dim, char side,
                         ValidationReport &report) {
    if (static_cast<int>(ops.size()) != nInputs) {
        report.violations.push_back({"family count", std::string(1, side),
                                     std::abs(static_cast<double>(ops.size()) - nInputs)});
        return;
    }
    for (int x = 0; x < nInputs; ++x) {
        const auto &fam = ops[static_cast<std::size_t>(x)];
        if (static_cast<int>(fam.size()) != nOutputs) {
            report.violations.push_back({"outcome count", family_name(side, x),
                                         std::abs(static_cast<double>(fam.size()) - nOutputs)});
            continue;
        }
        for (const auto &op : fam) {
            if (op.rows() != dim || op.cols() != dim) {
                report.violations.push_back({"operator shape", family_name(side, x),
                                             static_cast<double>(std::abs(op.rows() - dim))});
            }
        }
    }
}

void check_povms(const Measurements &ops, Index dim, char side, Tolerance tol,
                 ValidationReport &report) {
    for (std::size_t x = 0; x < ops.size(); ++x) {
        CMatrix total = CMatrix::Zero(dim, dim);
        for (std::size_t a = 0; a < ops[x].size(); ++a) {
            const CMatrix &op = ops[x][a];
            if (op.rows() != dim || op.cols() != dim) return;
            std::ostringstream loc;
            loc << side << '[' << x << "][" << a << ']';
            if (!op.allFinite()) {
                report.violations.push_back({"finite entries", loc.str(), INFINITY});
                continue;
            }
            const auto flags = structural_predicates(op, tol);
            if (!flags.hermitian) {
                report.violations.push_back({"Hermitian", loc.str(), flags.hermitian_residual});
            } else if (!flags.positive) {
                report.violations.push_back({"positive", loc.str(), -flags.min_eigenvalue});
            }
            total += op;
        }
        const double completeness = op_norm(total - identity(dim));
        if (!tol.accepts(completeness)) {
            report.violations.push_back(
                {"POVM completeness", family_name(side, static_cast<int>(x)), completeness});
        }
    }
}

void check_state(const CVector &psi, Index dim, Tolerance tol, ValidationReport &report) {
    if (psi.size() != dim) {
        report.violations.push_back({"state dimension", "psi",
                                     static_cast<double>(std::abs(psi.size() - dim))});
        return;
    }
    if (!psi.allFinite()) {
        report.violations.push_back({"finite entries", "psi", INFINITY});
        return;
    }
    const double defect = std::abs(psi.norm() - 1.0);
    if (!tol.accepts(defect)) report.violations.push_back({"unit norm", "psi", defect});
}

void check_scenario(const Scenario &s, ValidationReport &report) {
    if (s.nX < 1 || s.nY < 1 || s.nA < 1 || s.nB < 1) {
        report.violations.push_back({"scenario counts", to_string(s), 1.0});
    }
}

} // namespace

ValidationReport validate_quantum_model(const QuantumModel &m, Tolerance tol) {
    ValidationReport r;
    check_scenario(m.scenario, r);
    if (m.dimA < 1 || m.dimB < 1) {
        r.violations.push_back({"positive dimensions", "dimA/dimB", 1.0});
        return r;
    }
    check_family_shapes(m.M, m.scenario.nX, m.scenario.nA, m.dimA, 'M', r);
    check_family_shapes(m.N, m.scenario.nY, m.scenario.nB, m.dimB, 'N', r);
    if (!r.valid()) return r;
    check_povms(m.M, m.dimA, 'M', tol, r);
    check_povms(m.N, m.dimB, 'N', tol, r);
    check_state(m.psi, m.dimA * m.dimB, tol, r);
    return r;
}

ValidationReport validate_commuting_model(const CommutingModel &m, Tolerance tol) {
    ValidationReport r;
    check_scenario(m.scenario, r);
    if (m.dim < 1) {
        r.violations.push_back({"positive dimensions", "dim", 1.0});
        return r;
    }
    check_family_shapes(m.M, m.scenario.nX, m.scenario.nA, m.dim, 'M', r);
    check_family_shapes(m.N, m.scenario.nY, m.scenario.nB, m.dim, 'N', r);
    if (!r.valid()) return r;
    check_povms(m.M, m.dim, 'M', tol, r);
    check_povms(m.N, m.dim, 'N', tol, r);
    check_state(m.psi, m.dim, tol, r);
    for (std::size_t x = 0; x < m.M.size(); ++x)
        for (std::size_t a = 0; a < m.M[x].size(); ++a)
            for (std::size_t y = 0; y < m.N.size(); ++y)
                for (std::size_t b = 0; b < m.N[y].size(); ++b) {
                    const CMatrix &P = m.M[x][a];
                    const CMatrix &Q = m.N[y][b];
                    const double c = (P * Q - Q * P).norm();
                    if (!tol.accepts(c)) {
                        std::ostringstream loc;
                        loc << "[M[" << x << "][" << a << "], N[" << y << "][" << b << "]]";
                        r.violations.push_back({"commutation", loc.str(), c});
                    }
                }
    return r;
}

ValidationReport validate_correlation(const Correlation &p, Tolerance tol) {
    ValidationReport r;
    const auto &s = p.scenario();
    check_scenario(s, r);
    if (!r.valid()) return r;
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y) {
            double total = 0.0;
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b) {
                    const double v = p(a, b, x, y);
                    if (!std::isfinite(v) || v < -tol.eps) {
                        std::ostringstream loc;
                        loc << "p(" << a << ',' << b << '|' << x << ',' << y << ')';
                        r.violations.push_back({"non-negative", loc.str(), std::isfinite(v) ? -v : INFINITY});
                    }
                    total += v;
                }
            const double defect = std::abs(total - 1.0);
            if (!tol.accepts(defect)) {
                std::ostringstream loc;
                loc << "sum p(.,.|" << x << ',' << y << ')';
                r.violations.push_back({"normalization", loc.str(), defect});
            }
        }
    return r;
}

namespace {

[[noreturn]] void throw_invalid(const ValidationReport &r) {
    const auto &v = r.violations.front();
    std::ostringstream os;
    os << "invalid model: " << v.invariant << " violated at " << v.location
       << " (residual " << v.residual << ")";
    throw InvalidModel(os.str());
}

} // namespace

void require_valid(const QuantumModel &m, Tolerance tol) {
    const auto r = validate_quantum_model(m, tol);
    if (!r.valid()) throw_invalid(r);
}

void require_valid(const CommutingModel &m, Tolerance tol) {
    const auto r = validate_commuting_model(m, tol);
    if (!r.valid()) throw_invalid(r);
}

// ---------------------------------------------------------------------------
// correlations and moments

namespace {

const CMatrix &letter_op(const Measurements &ops, const Letter &l, char side) {
    if (l.input < 0 || static_cast<std::size_t>(l.input) >= ops.size() || l.output < 0 ||
        static_cast<std::size_t>(l.output) >= ops[static_cast<std::size_t>(l.input)].size()) {
        std::ostringstream os;
        os << "letter " << side << '^' << l.input << '_' << l.output << " out of range";
        throw ScenarioError(os.str());
    }
    return ops[static_cast<std::size_t>(l.input)][static_cast<std::size_t>(l.output)];
}

// sum over entries of conj(C) .* (A C B^T) = <psi| A (x) B |psi>
Complex bipartite_expectation(const CMatrix &coeff, const CMatrix &opA, const CMatrix &opB) {
    const CMatrix image = opA * coeff * opB.transpose();
    return (coeff.conjugate().array() * image.array()).sum();
}

Correlation finalize(Scenario s, std::vector<Complex> raw, Tolerance tol, CorrelationNotes *notes) {
    CorrelationNotes local;
    Correlation p(s);
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y) {
            double total = 0.0;
            bool clamped = false;
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b) {
                    const Complex v = raw[static_cast<std::size_t>(((a * s.nB + b) * s.nX + x) * s.nY + y)];
                    local.max_imaginary = std::max(local.max_imaginary, std::abs(v.imag()));
                    double re = v.real();
                    if (re < 0.0) {
                        local.max_clamped = std::max(local.max_clamped, -re);
                        re = 0.0;
                        clamped = true;
                    }
                    p(a, b, x, y) = re;
                    total += re;
                }
            if (clamped && total > 0.0) {
                local.renormalized = true;
                for (int a = 0; a < s.nA; ++a)
                    for (int b = 0; b < s.nB; ++b) p(a, b, x, y) /= total;
            }
        }
    if (!tol.accepts(local.max_imaginary)) {
        std::ostringstream os;
        os << "correlation has an imaginary part of " << local.max_imaginary
           << "; the measurement operators are not Hermitian";
        throw InvalidModel(os.str());
    }
    if (local.max_clamped > tol.eps) {
        std::ostringstream os;
        os << "correlation has a negative entry " << -local.max_clamped
           << "; the measurement operators are not positive";
        throw InvalidModel(os.str());
    }
    if (notes) *notes = local;
    return p;
}

} // namespace

Correlation correlation_of(const QuantumModel &m, Tolerance tol, CorrelationNotes *notes) {
    const auto &s = m.scenario;
    const CMatrix coeff = coefficient_matrix(m.psi, m.dimA, m.dimB);
    std::vector<Complex> raw(static_cast<std::size_t>(s.nA * s.nB * s.nX * s.nY));
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b) {
                    const Word wA{Side::A, {{x, a}}};
                    const Word wB{Side::B, {{y, b}}};
                    raw[static_cast<std::size_t>(((a * s.nB + b) * s.nX + x) * s.nY + y)] =
                        bipartite_expectation(coeff, word_operator(m.M, m.dimA, wA),
                                              word_operator(m.N, m.dimB, wB));
                }
    return finalize(s, std::move(raw), tol, notes);
}

Correlation correlation_of(const CommutingModel &m, Tolerance tol, CorrelationNotes *notes) {
    const auto &s = m.scenario;
    std::vector<Complex> raw(static_cast<std::size_t>(s.nA * s.nB * s.nX * s.nY));
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            for (int a = 0; a < s.nA; ++a)
                for (int b = 0; b < s.nB; ++b)
                    raw[static_cast<std::size_t>(((a * s.nB + b) * s.nX + x) * s.nY + y)] =
                        evaluate_moment(m, Word{Side::A, {{x, a}}}, Word{Side::B, {{y, b}}});
    return finalize(s, std::move(raw), tol, notes);
}

CMatrix word_operator(const Measurements &ops, Index dim, const Word &w) {
    CMatrix out = identity(dim);
    const char side = w.side == Side::A ? 'M' : 'N';
    for (const auto &l : w.letters) out = out * letter_op(ops, l, side);
    return out;
}

Complex evaluate_moment(const QuantumModel &m, const Word &wA, const Word &wB) {
    const CMatrix coeff = coefficient_matrix(m.psi, m.dimA, m.dimB);
    return bipartite_expectation(coeff, word_operator(m.M, m.dimA, wA), word_operator(m.N, m.dimB, wB));
}

Complex evaluate_moment(const CommutingModel &m, const Word &wA, const Word &wB) {
    const CVector v = word_operator(m.M, m.dim, wA) * (word_operator(m.N, m.dim, wB) * m.psi);
    return m.psi.dot(v);
}

ModelFlags classify(const QuantumModel &m, Tolerance tol) {
    ModelFlags f;
    f.projective = true;
    for (const auto *fams : {&m.M, &m.N})
        for (const auto &fam : *fams)
            for (const auto &op : fam)
                if (!structural_predicates(op, tol).projection) f.projective = false;
    f.full_rank = m.dimA == m.dimB && schmidt_rank(m.psi, m.dimA, m.dimB, tol) == m.dimA;
    f.binary = m.scenario.binary();
    f.synchronous_scenario = m.scenario.synchronous_shape();
    return f;
}

double projective_state_residual(const QuantumModel &m) {
    double worst = 0.0;
    const Word empty_a{Side::A, {}};
    const Word empty_b{Side::B, {}};
    for (int x = 0; x < m.scenario.nX; ++x)
        for (int a = 0; a < m.scenario.nA; ++a) {
            const Complex v = evaluate_moment(m, Word{Side::A, {{x, a}}}, empty_b) -
                              evaluate_moment(m, Word{Side::A, {{x, a}, {x, a}}}, empty_b);
            worst = std::max(worst, std::abs(v));
        }
    for (int y = 0; y < m.scenario.nY; ++y)
        for (int b = 0; b < m.scenario.nB; ++b) {
            const Complex v = evaluate_moment(m, empty_a, Word{Side::B, {{y, b}}}) -
                              evaluate_moment(m, empty_a, Word{Side::B, {{y, b}, {y, b}}});
            worst = std::max(worst, std::abs(v));
        }
    return worst;
}

bool is_projective_state(const QuantumModel &m, Tolerance tol) {
    return tol.accepts(projective_state_residual(m));
}

CommutingModel as_commuting(const QuantumModel &m) {
    CommutingModel c;
    c.scenario = m.scenario;
    c.dim = m.dimA * m.dimB;
    const CMatrix idA = identity(m.dimA);
    const CMatrix idB = identity(m.dimB);
    for (const auto &fam : m.M) {
        auto &out = c.M.emplace_back();
        for (const auto &op : fam) out.push_back(kron(op, idB));
    }
    for (const auto &fam : m.N) {
        auto &out = c.N.emplace_back();
        for (const auto &op : fam) out.push_back(kron(idA, op));
    }
    c.psi = m.psi;
    return c;
}

QuantumModel tensor_with_aux(const QuantumModel &m, const CVector &aux, Index auxDimA, Index auxDimB) {
    if (aux.size() != auxDimA * auxDimB) {
        throw DimensionError("auxiliary state does not match its factor dimensions");
    }
    QuantumModel out;
    out.scenario = m.scenario;
    out.dimA = m.dimA * auxDimA;
    out.dimB = m.dimB * auxDimB;
    const CMatrix idA = identity(auxDimA);
    const CMatrix idB = identity(auxDimB);
    for (const auto &fam : m.M) {
        auto &f = out.M.emplace_back();
        for (const auto &op : fam) f.push_back(kron(op, idA));
    }
    for (const auto &fam : m.N) {
        auto &f = out.N.emplace_back();
        for (const auto &op : fam) f.push_back(kron(op, idB));
    }
    // psi (x) aux lives on H_A H_B K_A K_B; regroup as H_A K_A H_B K_B
    const CVector joint = kron(m.psi, aux);
    const std::vector<Index> dims{m.dimA, m.dimB, auxDimA, auxDimB};
    const std::vector<int> perm{0, 2, 1, 3};
    out.psi = permute_tensor(joint, dims, perm);
    return out;
}

QuantumModel apply_local_unitaries(const QuantumModel &m, const CMatrix &U, const CMatrix &V) {
    if (U.rows() != m.dimA || V.rows() != m.dimB) {
        throw DimensionError("local unitaries do not match the model dimensions");
    }
    QuantumModel out = m;
    for (auto &fam : out.M)
        for (auto &op : fam) op = U * op * U.adjoint();
    for (auto &fam : out.N)
        for (auto &op : fam) op = V * op * V.adjoint();
    out.psi = kron(U, V) * m.psi;
    return out;
}

} // namespace qst
