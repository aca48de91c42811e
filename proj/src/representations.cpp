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

#include "qst/representations.hpp"
#include "qst/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qst {

std::vector<CMatrix> flatten(const Measurements &ops) {
    std::vector<CMatrix> out;
    for (const auto &fam : ops)
        for (const auto &op : fam) out.push_back(op);
    return out;
}

const Scenario &scenario_of(const AnyModel &m) {
    return std::visit([](const auto &v) -> const Scenario & { return v.scenario; }, m);
}

namespace {

double max_op_scale(std::span<const CMatrix> gens) {
    double s = 0.0;
    for (const auto &g : gens) s = std::max(s, g.norm());
    return s;
}

Index common_dim(std::span<const CMatrix> gens, const char *what) {
    if (gens.empty()) throw Error(std::string(what) + ": at least one generator is required");
    const Index d = gens[0].rows();
    for (const auto &g : gens)
        if (g.rows() != d || g.cols() != d)
            throw DimensionError(std::string(what) + ": generators must be square of a common size");
    return d;
}

// Stacked system for X with X g_from = g_to X, acting on column-major vec(X).
CMatrix intertwiner_system(std::span<const CMatrix> from, std::span<const CMatrix> to) {
    const Index n = from[0].rows();
    const Index k = to[0].rows();
    CMatrix sys(static_cast<Index>(from.size()) * n * k, n * k);
    const CMatrix idn = identity(n);
    const CMatrix idk = identity(k);
    for (std::size_t t = 0; t < from.size(); ++t) {
        // vec(X G) = (G^T (x) I) vec X,  vec(H X) = (I (x) H) vec X
        sys.middleRows(static_cast<Index>(t) * n * k, n * k) =
            kron(CMatrix(from[t].transpose()), idk) - kron(idn, to[t]);
    }
    return sys;
}

CMatrix unvec(const CVector &v, Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index c = 0; c < cols; ++c) m.col(c) = v.segment(c * rows, rows);
    return m;
}

std::vector<CMatrix> with_adjoints(std::span<const CMatrix> gens, Tolerance tol) {
    std::vector<CMatrix> all(gens.begin(), gens.end());
    for (const auto &g : gens)
        if (!tol.accepts((g - g.adjoint()).norm(), g.norm())) all.push_back(g.adjoint());
    return all;
}

std::vector<CMatrix> compress(std::span<const CMatrix> gens, const CMatrix &W) {
    std::vector<CMatrix> out;
    out.reserve(gens.size());
    for (const auto &g : gens) out.push_back(W.adjoint() * g * W);
    return out;
}

} // namespace

std::vector<CMatrix> commutant_basis(std::span<const CMatrix> generators, Tolerance tol) {
    const Index d = common_dim(generators, "commutant_basis");
    const CMatrix sys = intertwiner_system(generators, generators);
    const CMatrix ns = null_space(sys, tol.eps * (1.0 + max_op_scale(generators)));
    std::vector<CMatrix> basis;
    basis.reserve(static_cast<std::size_t>(ns.cols()));
    for (Index c = 0; c < ns.cols(); ++c) basis.push_back(unvec(ns.col(c), d, d));
    return basis;
}

std::optional<CMatrix> find_intertwiner(std::span<const CMatrix> from, std::span<const CMatrix> to,
                                        Tolerance tol, double *residual) {
    if (from.size() != to.size() || from.empty()) throw Error("find_intertwiner: generator lists differ in length");
    const Index n = from[0].rows();
    if (to[0].rows() != n) {
        if (residual) *residual = INFINITY;
        return std::nullopt;
    }
    const CMatrix sys = intertwiner_system(from, to);
    Eigen::JacobiSVD<CMatrix> svd(sys.rows() > sys.cols() ? CMatrix(Eigen::HouseholderQR<CMatrix>(sys).matrixQR().topRows(sys.cols()).triangularView<Eigen::Upper>()) : sys,
                               Eigen::ComputeFullV);
    const RVector s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    if (residual) *residual = smallest;
    const double scale = std::max(max_op_scale(from), max_op_scale(to));
    if (!tol.accepts(smallest, scale)) return std::nullopt;
    const CMatrix X = unvec(svd.matrixV().col(s.size() - 1), n, n);
    const RVector xs = singular_values(X);
    if (xs(xs.size() - 1) < 0.5 * xs(0)) return std::nullopt;
    CMatrix U = unitary_polar(X);
    // U g_from U^dag = g_to; polar factor of X with X g_from = g_to X
    double defect = 0.0;
    for (std::size_t t = 0; t < from.size(); ++t)
        defect = std::max(defect, (U * from[t] * U.adjoint() - to[t]).norm());
    if (!tol.accepts(defect, scale)) return std::nullopt;
    fix_phase(Eigen::Map<CVector>(U.data(), U.size()));
    return U;
}

CMatrix RepDecomposition::change_of_basis() const {
    CMatrix q(dim, dim);
    Index col = 0;
    for (const auto &b : blocks) {
        q.middleCols(col, b.changeOfBasis.cols()) = b.changeOfBasis;
        col += b.changeOfBasis.cols();
    }
    return q;
}

Index RepDecomposition::commutant_dimension() const {
    Index total = 0;
    for (const auto &b : blocks) total += b.multiplicity * b.multiplicity;
    return total;
}

CMatrix RepDecomposition::block_operator(std::size_t k) const {
    CMatrix out = CMatrix::Zero(dim, dim);
    Index off = 0;
    for (const auto &b : blocks) {
        const Index size = b.irrepDim * b.multiplicity;
        out.block(off, off, size, size) = kron(b.irrepGenerators.at(k), identity(b.multiplicity));
        off += size;
    }
    return out;
}

double RepDecomposition::reassembly_defect(std::span<const CMatrix> generators) const {
    const CMatrix q = change_of_basis();
    double worst = 0.0;
    for (std::size_t k = 0; k < generators.size(); ++k)
        worst = std::max(worst, (q * block_operator(k) * q.adjoint() - generators[k]).norm());
    return worst;
}

namespace {

constexpr int kSplitAttempts = 32;
// Minimum separation between eigenvalue clusters of the random commutant element.
constexpr double kSplitGap = 1e-6;

class Splitter {
  public:
    Splitter(std::span<const CMatrix> algebra, Rng &rng, Tolerance tol)
        : algebra_(algebra), rng_(rng), tol_(tol) {}

    void split(const CMatrix &W) {
        const auto local = compress(algebra_, W);
        const auto comm = commutant_basis(local, tol_);
        if (comm.size() <= 1) {
            irreducible_.push_back(W);
            return;
        }
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int attempt = 0; attempt < kSplitAttempts; ++attempt) {
            CMatrix h = CMatrix::Zero(W.cols(), W.cols());
            for (const auto &c : comm) {
                h += gauss(rng_) * 0.5 * (c + c.adjoint());
                h += gauss(rng_) * Complex(0.0, -0.5) * (c - c.adjoint());
            }
            const double hn = h.norm();
            if (!(hn > 0.0)) continue;
            h /= hn;
            const auto eig = hermitian_eig(h);
            std::vector<Index> cuts{0};
            double min_gap = INFINITY;
            for (Index i = 1; i < eig.values.size(); ++i) {
                const double gap = eig.values(i - 1) - eig.values(i);
                if (gap > kSplitGap * 1e2) {
                    cuts.push_back(i);
                } else if (gap > kSplitGap * 1e-2) {
                    min_gap = std::min(min_gap, gap);
                }
            }
            // an ambiguous gap means the draw did not separate eigenvalues cleanly
            if (cuts.size() < 2 || min_gap < INFINITY) continue;
            cuts.push_back(eig.values.size());
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const CMatrix sub = W * eig.vectors.middleCols(cuts[c], cuts[c + 1] - cuts[c]);
                split(orthonormalize_columns(sub, tol_));
            }
            return;
        }
        throw AlgebraNotSemisimple("irrep_decompose: random commutant elements failed to split a "
                                   "reducible subspace; the input is numerically ill-conditioned");
    }

    std::vector<CMatrix> take() { return std::move(irreducible_); }

  private:
    std::span<const CMatrix> algebra_;
    Rng &rng_;
    Tolerance tol_;
    std::vector<CMatrix> irreducible_;
};

bool trace_signature_less(const RepBlock &a, const RepBlock &b) {
    if (a.irrepDim != b.irrepDim) return a.irrepDim < b.irrepDim;
    for (std::size_t k = 0; k < a.irrepGenerators.size(); ++k) {
        const Complex ta = a.irrepGenerators[k].trace();
        const Complex tb = b.irrepGenerators[k].trace();
        if (std::abs(ta.real() - tb.real()) > 1e-8) return ta.real() < tb.real();
        if (std::abs(ta.imag() - tb.imag()) > 1e-8) return ta.imag() < tb.imag();
    }
    return a.multiplicity < b.multiplicity;
}

} // namespace

RepDecomposition irrep_decompose(std::span<const CMatrix> generators, std::uint64_t seed, Tolerance tol) {
    const Index d = common_dim(generators, "irrep_decompose");
    const auto algebra = with_adjoints(generators, tol);
    Rng rng(seed);
    Splitter splitter(algebra, rng, tol);
    splitter.split(identity(d));
    const auto parts = splitter.take();

    RepDecomposition out;
    out.dim = d;
    const double scale = max_op_scale(algebra);

    struct Klass {
        std::size_t representative;
        std::vector<std::pair<std::size_t, CMatrix>> members; // component, U with U g_rep U^dag = g_k
    };
    std::vector<Klass> classes;
    std::vector<std::vector<CMatrix>> local;
    for (const auto &W : parts) local.push_back(compress(algebra, W));

    for (std::size_t k = 0; k < parts.size(); ++k) {
        bool merged = false;
        for (auto &cls : classes) {
            const std::size_t r = cls.representative;
            if (parts[r].cols() != parts[k].cols()) continue;
            double residual = 0.0;
            auto U = find_intertwiner(local[r], local[k], tol, &residual);
            if (U) {
                cls.members.emplace_back(k, *U);
                merged = true;
                break;
            }
            if (residual <= 100.0 * tol.eps * (1.0 + scale)) out.ambiguous.push_back({r, k, residual});
        }
        if (!merged) {
            const Index n = parts[k].cols();
            classes.push_back({k, {{k, identity(n)}}});
        }
    }

    for (const auto &cls : classes) {
        RepBlock block;
        const std::size_t r = cls.representative;
        block.irrepDim = parts[r].cols();
        block.multiplicity = static_cast<Index>(cls.members.size());
        block.changeOfBasis.resize(d, block.irrepDim * block.multiplicity);
        for (std::size_t j = 0; j < cls.members.size(); ++j) {
            const auto &[k, U] = cls.members[j];
            const CMatrix cols = parts[k] * U;
            for (Index a = 0; a < block.irrepDim; ++a)
                block.changeOfBasis.col(a * block.multiplicity + static_cast<Index>(j)) = cols.col(a);
        }
        for (std::size_t g = 0; g < generators.size(); ++g) block.irrepGenerators.push_back(local[r][g]);
        out.blocks.push_back(std::move(block));
    }
    std::stable_sort(out.blocks.begin(), out.blocks.end(), trace_signature_less);

    const CMatrix q = out.change_of_basis();
    const double unitarity = (q.adjoint() * q - identity(d)).norm();
    const double defect = out.reassembly_defect(generators);
    if (!tol.accepts(unitarity) || !tol.accepts(defect, scale)) {
        std::ostringstream os;
        os << "irrep_decompose: block structure residual " << std::max(unitarity, defect)
           << " exceeds tolerance " << tol.eps;
        throw AlgebraNotSemisimple(os.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// cyclic restriction

namespace {

struct LetterOp {
    Side side;
    Letter letter;
    const CMatrix *op;
};

std::vector<LetterOp> letters_of(const Measurements &M, const Measurements &N) {
    std::vector<LetterOp> out;
    for (std::size_t x = 0; x < M.size(); ++x)
        for (std::size_t a = 0; a < M[x].size(); ++a)
            out.push_back({Side::A, {static_cast<int>(x), static_cast<int>(a)}, &M[x][a]});
    for (std::size_t y = 0; y < N.size(); ++y)
        for (std::size_t b = 0; b < N[y].size(); ++b)
            out.push_back({Side::B, {static_cast<int>(y), static_cast<int>(b)}, &N[y][b]});
    return out;
}

struct Frame {
    std::vector<WordPair> words;
    CMatrix basis; // orthonormal columns
};

// Krylov-style enumeration of pi(w) psi for commuting letter operators.
Frame cyclic_frame(const std::vector<LetterOp> &letters, const CVector &psi, Tolerance tol) {
    struct Kept {
        WordPair word;
        CVector image;
    };
    std::vector<CVector> basis;
    std::vector<WordPair> words;
    std::vector<Kept> frontier;

    const WordPair empty{Word{Side::A, {}}, Word{Side::B, {}}};
    basis.push_back(psi / psi.norm());
    words.push_back(empty);
    frontier.push_back({empty, psi});

    const Index dim = psi.size();
    while (!frontier.empty() && static_cast<Index>(basis.size()) < dim) {
        std::vector<Kept> candidates;
        for (const auto &k : frontier)
            for (const auto &l : letters) {
                Kept c{k.word, (*l.op) * k.image};
                auto &w = l.side == Side::A ? c.word.first : c.word.second;
                w.letters.insert(w.letters.begin(), l.letter);
                candidates.push_back(std::move(c));
            }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Kept &a, const Kept &b) { return length_lex_less(a.word, b.word); });
        std::vector<Kept> next;
        for (auto &c : candidates) {
            if (!next.empty() && next.back().word == c.word) continue;
            CVector r = c.image;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto &b : basis) r -= b * b.dot(r);
            if (r.norm() < tol.eps * (1.0 + c.image.norm())) continue;
            basis.push_back(r / r.norm());
            words.push_back(c.word);
            next.push_back(std::move(c));
            if (static_cast<Index>(basis.size()) == dim) break;
        }
        frontier = std::move(next);
    }
    Frame f;
    f.words = std::move(words);
    f.basis.resize(dim, static_cast<Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) f.basis.col(static_cast<Index>(i)) = basis[i];
    return f;
}

Measurements compress_family(const Measurements &ops, const CMatrix &W) {
    Measurements out;
    for (const auto &fam : ops) {
        auto &f = out.emplace_back();
        for (const auto &op : fam) {
            CMatrix t = W.adjoint() * op * W;
            f.push_back(0.5 * (t + t.adjoint()));
        }
    }
    return out;
}

CMatrix support_basis(const CMatrix &positive, Tolerance tol) {
    const auto eig = hermitian_eig(positive, tol);
    Index r = 0;
    const double cutoff = tol.eps * (1.0 + eig.values(0));
    while (r < eig.values.size() && eig.values(r) > cutoff) ++r;
    return canonical_basis(eig.vectors.leftCols(r));
}

} // namespace

CyclicModel cyclic_restrict(const CommutingModel &m, Tolerance tol) {
    const auto letters = letters_of(m.M, m.N);
    Frame f = cyclic_frame(letters, m.psi, tol);
    CyclicModel out;
    out.basisWords = f.words;
    if (f.basis.cols() == m.dim) {
        out.unchanged = true;
        out.embedding = identity(m.dim);
        out.model = m;
        return out;
    }
    CommutingModel c;
    c.scenario = m.scenario;
    c.dim = f.basis.cols();
    c.M = compress_family(m.M, f.basis);
    c.N = compress_family(m.N, f.basis);
    CVector psi = f.basis.adjoint() * m.psi;
    c.psi = psi / psi.norm();
    out.embedding = f.basis;
    out.model = std::move(c);
    return out;
}

CyclicModel cyclic_restrict(const QuantumModel &m, Tolerance tol) {
    const CommutingModel lifted = as_commuting(m);
    CyclicModel generic = cyclic_restrict(lifted, tol);
    if (generic.unchanged) {
        generic.model = m;
        return generic;
    }
    const CMatrix projector = generic.embedding * generic.embedding.adjoint();
    const CMatrix KA = support_basis(partial_trace(projector, m.dimA, m.dimB, Side::A), tol);
    const CMatrix KB = support_basis(partial_trace(projector, m.dimA, m.dimB, Side::B), tol);
    if (KA.cols() * KB.cols() != generic.dimension()) return generic;

    QuantumModel q;
    q.scenario = m.scenario;
    q.dimA = KA.cols();
    q.dimB = KB.cols();
    q.M = compress_family(m.M, KA);
    q.N = compress_family(m.N, KB);
    const CMatrix coeff = coefficient_matrix(m.psi, m.dimA, m.dimB);
    CVector psi = from_coefficient_matrix(KA.adjoint() * coeff * KB.conjugate());
    q.psi = psi / psi.norm();
    generic.embedding = kron(KA, KB);
    generic.model = std::move(q);
    return generic;
}

CyclicModel cyclic_restrict(const AnyModel &m, Tolerance tol) {
    return std::visit([&](const auto &v) { return cyclic_restrict(v, tol); }, m);
}

// ---------------------------------------------------------------------------
// state equality

Complex evaluate_moment(const AnyModel &m, const Word &wA, const Word &wB) {
    return std::visit([&](const auto &v) { return evaluate_moment(v, wA, wB); }, m);
}

namespace {

CommutingModel lift(const AnyModel &m) {
    if (const auto *q = std::get_if<QuantumModel>(&m)) return as_commuting(*q);
    return std::get<CommutingModel>(m);
}

CVector word_image(const CommutingModel &m, const WordPair &w) {
    return word_operator(m.M, m.dim, w.first) * (word_operator(m.N, m.dim, w.second) * m.psi);
}

Word concat(const Word &lhs, const Word &rhs) {
    Word out = lhs;
    out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
    return out;
}

// Word pair whose moment equals <pi(v) psi | pi(g) pi(w) psi> in a commuting model.
WordPair inner_word(const WordPair &v, const WordPair &w, const LetterOp *g) {
    WordPair out{concat(reversed(v.first), w.first), concat(reversed(v.second), w.second)};
    if (g) {
        auto &side = g->side == Side::A ? out.first : out.second;
        const auto &prefix = g->side == Side::A ? v.first : v.second;
        side.letters.insert(side.letters.begin() + static_cast<std::ptrdiff_t>(prefix.letters.size()),
                            g->letter);
    }
    return out;
}

} // namespace

StateEquality states_equal(const AnyModel &m1, const AnyModel &m2, Tolerance tol) {
    if (!(scenario_of(m1) == scenario_of(m2))) {
        throw ScenarioError("states_equal: scenarios differ: " + to_string(scenario_of(m1)) + " vs " +
                            to_string(scenario_of(m2)));
    }
    const CommutingModel c1 = lift(m1);
    const CommutingModel c2 = lift(m2);
    const auto letters1 = letters_of(c1.M, c1.N);
    const auto letters2 = letters_of(c2.M, c2.N);
    const Frame f1 = cyclic_frame(letters1, c1.psi, tol);
    const Frame f2 = cyclic_frame(letters2, c2.psi, tol);

    std::vector<WordPair> shared = f1.words;
    shared.insert(shared.end(), f2.words.begin(), f2.words.end());
    std::stable_sort(shared.begin(), shared.end(), length_lex_less);
    shared.erase(std::unique(shared.begin(), shared.end()), shared.end());

    const auto n = static_cast<Index>(shared.size());
    CMatrix F1(c1.dim, n);
    CMatrix F2(c2.dim, n);
    for (Index i = 0; i < n; ++i) {
        F1.col(i) = word_image(c1, shared[static_cast<std::size_t>(i)]);
        F2.col(i) = word_image(c2, shared[static_cast<std::size_t>(i)]);
    }

    StateEquality out;
    out.cyclic_dim1 = f1.basis.cols();
    out.cyclic_dim2 = f2.basis.cols();

    auto report_difference = [&](const WordPair &w) {
        out.equal = false;
        out.distinguishing = w;
        out.value1 = evaluate_moment(c1, w.first, w.second);
        out.value2 = evaluate_moment(c2, w.first, w.second);
    };

    const CMatrix G1 = F1.adjoint() * F1;
    const CMatrix G2 = F2.adjoint() * F2;
    out.gram_residual = (G1 - G2).cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (!tol.equal(G1(i, j), G2(i, j))) {
                report_difference(inner_word(shared[static_cast<std::size_t>(i)],
                                             shared[static_cast<std::size_t>(j)], nullptr));
                return out;
            }

    for (std::size_t l = 0; l < letters1.size(); ++l) {
        const CMatrix X1 = F1.adjoint() * (*letters1[l].op) * F1;
        const CMatrix X2 = F2.adjoint() * (*letters2[l].op) * F2;
        out.intertwining_residual = std::max(out.intertwining_residual, (X1 - X2).cwiseAbs().maxCoeff());
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (!tol.equal(X1(i, j), X2(i, j))) {
                    report_difference(inner_word(shared[static_cast<std::size_t>(i)],
                                                 shared[static_cast<std::size_t>(j)], &letters1[l]));
                    return out;
                }
    }

    // U = F2 G^+ F1^dag maps pi_1(w) psi_1 to pi_2(w) psi_2
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(G1.rows(), G1.cols());
    cod.setThreshold(tol.eps);
    cod.compute(G1);
    out.unitary = F2 * cod.pseudoInverse() * F1.adjoint();
    double residual = 0.0;
    for (std::size_t l = 0; l < letters1.size(); ++l)
        residual = std::max(residual,
                            (out.unitary * (*letters1[l].op) * F1 - (*letters2[l].op) * F2).norm());
    out.intertwining_residual = std::max(out.intertwining_residual, residual);
    out.equal = true;
    return out;
}

std::optional<WordPair> moment_precheck(const AnyModel &m1, const AnyModel &m2, int max_total_length,
                                        Tolerance tol) {
    if (!(scenario_of(m1) == scenario_of(m2))) throw ScenarioError("moment_precheck: scenarios differ");
    for (const auto &w : enumerate_word_pairs(scenario_of(m1), max_total_length)) {
        if (!tol.equal(evaluate_moment(m1, w.first, w.second), evaluate_moment(m2, w.first, w.second)))
            return w;
    }
    return std::nullopt;
}

} // namespace qst
