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

#include "qst/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace qst {

namespace {

void write_canonical(const Json &j, std::string &out) {
    switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case Json::value_t::number_float: {
        double v = j.get<double>();
        if (v == 0.0) v = 0.0; // drop the sign of -0
        if (!std::isfinite(v)) {
            out += "null";
            break;
        }
        std::array<char, 32> buf{};
        std::snprintf(buf.data(), buf.size(), "%.17g", v);
        out += buf.data();
        break;
    }
    case Json::value_t::string: out += j.dump(); break;
    case Json::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto &e : j) {
            if (!first) out += ',';
            first = false;
            write_canonical(e, out);
        }
        out += ']';
        break;
    }
    case Json::value_t::object: {
        // nlohmann::json objects are std::map backed, so iteration is sorted
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            out += Json(it.key()).dump();
            out += ':';
            write_canonical(it.value(), out);
        }
        out += '}';
        break;
    }
    default: out += j.dump(); break;
    }
}

[[noreturn]] void fail(const std::string &origin, const std::string &field, const std::string &what) {
    throw ParseError(origin + ": field '" + field + "': " + what);
}

const Json &member(const Json &j, const char *key, const std::string &origin, const std::string &path) {
    if (!j.is_object()) fail(origin, path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(origin, path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double number(const Json &j, const std::string &origin, const std::string &field) {
    if (!j.is_number()) fail(origin, field, "expected a number");
    return j.get<double>();
}

Index count(const Json &j, const std::string &origin, const std::string &field) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 1) fail(origin, field, "expected a positive integer");
    return static_cast<Index>(j.get<std::int64_t>());
}

Complex entry(const Json &j, const std::string &origin, const std::string &field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) fail(origin, field, "expected [re, im]");
    return {number(j[0], origin, field + "[0]"), number(j[1], origin, field + "[1]")};
}

CMatrix matrix_at(const Json &j, const std::string &origin, const std::string &field) {
    if (!j.is_array() || j.empty()) fail(origin, field, "expected a non-empty list of rows");
    const auto rows = static_cast<Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) fail(origin, field + "[0]", "expected a non-empty row");
    const auto cols = static_cast<Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto &row = j[static_cast<std::size_t>(r)];
        const std::string rf = field + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            fail(origin, rf, "row length differs from " + std::to_string(cols));
        for (Index c = 0; c < cols; ++c)
            m(r, c) = entry(row[static_cast<std::size_t>(c)], origin, rf + "[" + std::to_string(c) + "]");
    }
    return m;
}

CVector vector_at(const Json &j, const std::string &origin, const std::string &field) {
    if (!j.is_array() || j.empty()) fail(origin, field, "expected a non-empty list of [re, im]");
    CVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = entry(j[i], origin, field + "[" + std::to_string(i) + "]");
    return v;
}

Measurements families_at(const Json &j, int nInputs, int nOutputs, Index dim, const std::string &origin,
                         const std::string &field) {
    if (!j.is_array() || static_cast<int>(j.size()) != nInputs)
        fail(origin, field, "expected " + std::to_string(nInputs) + " measurement families, got " +
                                std::to_string(j.is_array() ? j.size() : 0));
    Measurements out;
    for (int x = 0; x < nInputs; ++x) {
        const auto &fam = j[static_cast<std::size_t>(x)];
        const std::string ff = field + "[" + std::to_string(x) + "]";
        if (!fam.is_array() || static_cast<int>(fam.size()) != nOutputs)
            fail(origin, ff, "expected " + std::to_string(nOutputs) + " operators");
        auto &ops = out.emplace_back();
        for (int a = 0; a < nOutputs; ++a) {
            const std::string of = ff + "[" + std::to_string(a) + "]";
            CMatrix m = matrix_at(fam[static_cast<std::size_t>(a)], origin, of);
            if (m.rows() != dim || m.cols() != dim)
                fail(origin, of,
                     "operator has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
            ops.push_back(std::move(m));
        }
    }
    return out;
}

} // namespace

std::string canonical_dump(const Json &j) {
    std::string out;
    write_canonical(j, out);
    return out;
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" +
                         e.what() + ")");
    }
}

Json matrix_to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const CVector &v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

Json real_matrix_to_json(const RMatrix &m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json scenario_to_json(const Scenario &s) { return {{"nX", s.nX}, {"nY", s.nY}, {"nA", s.nA}, {"nB", s.nB}}; }

namespace {

Json families_to_json(const Measurements &ops) {
    Json out = Json::array();
    for (const auto &fam : ops) {
        Json f = Json::array();
        for (const auto &op : fam) f.push_back(matrix_to_json(op));
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace

Json model_to_json(const QuantumModel &m) {
    return {{"kind", "tensor"},        {"scenario", scenario_to_json(m.scenario)},
            {"dimA", m.dimA},          {"dimB", m.dimB},
            {"M", families_to_json(m.M)}, {"N", families_to_json(m.N)},
            {"psi", vector_to_json(m.psi)}};
}

Json model_to_json(const CommutingModel &m) {
    return {{"kind", "commuting"},       {"scenario", scenario_to_json(m.scenario)},
            {"dim", m.dim},              {"M", families_to_json(m.M)},
            {"N", families_to_json(m.N)}, {"psi", vector_to_json(m.psi)}};
}

Json model_to_json(const AnyModel &m) {
    return std::visit([](const auto &v) { return model_to_json(v); }, m);
}

Json correlation_to_json(const Correlation &p) {
    const Scenario &s = p.scenario();
    Json table = Json::array();
    for (int a = 0; a < s.nA; ++a) {
        Json ja = Json::array();
        for (int b = 0; b < s.nB; ++b) {
            Json jb = Json::array();
            for (int x = 0; x < s.nX; ++x) {
                Json jx = Json::array();
                for (int y = 0; y < s.nY; ++y) jx.push_back(p(a, b, x, y));
                jb.push_back(std::move(jx));
            }
            ja.push_back(std::move(jb));
        }
        table.push_back(std::move(ja));
    }
    return {{"scenario", scenario_to_json(s)}, {"p", std::move(table)}};
}

Json witness_to_json(const DilationWitness &w) {
    return {{"IA", matrix_to_json(w.IA)},
            {"IB", matrix_to_json(w.IB)},
            {"aux", vector_to_json(w.aux)},
            {"auxDimA", w.auxDimA},
            {"auxDimB", w.auxDimB}};
}

Json word_pair_to_json(const WordPair &w) {
    auto letters = [](const Word &word) {
        Json out = Json::array();
        for (const auto &l : word.letters) out.push_back({l.input, l.output});
        return out;
    };
    return {{"A", letters(w.first)}, {"B", letters(w.second)}, {"text", to_string(w.first) + " (x) " + to_string(w.second)}};
}

CMatrix matrix_from_json(const Json &j, const std::string &origin) { return matrix_at(j, origin, "matrix"); }
CVector vector_from_json(const Json &j, const std::string &origin) { return vector_at(j, origin, "vector"); }

Scenario scenario_from_json(const Json &j, const std::string &origin) {
    Scenario s;
    s.nX = static_cast<int>(count(member(j, "nX", origin, "scenario"), origin, "scenario.nX"));
    s.nY = static_cast<int>(count(member(j, "nY", origin, "scenario"), origin, "scenario.nY"));
    s.nA = static_cast<int>(count(member(j, "nA", origin, "scenario"), origin, "scenario.nA"));
    s.nB = static_cast<int>(count(member(j, "nB", origin, "scenario"), origin, "scenario.nB"));
    return s;
}

AnyModel model_from_json(const Json &j, const std::string &origin) {
    if (!j.is_object()) fail(origin, "<root>", "expected an object");
    const auto &kindJ = member(j, "kind", origin, "");
    if (!kindJ.is_string()) fail(origin, "kind", "expected \"tensor\" or \"commuting\"");
    const std::string kind = kindJ.get<std::string>();
    const Scenario s = scenario_from_json(member(j, "scenario", origin, ""), origin);
    if (kind == "tensor") {
        QuantumModel m;
        m.scenario = s;
        m.dimA = count(member(j, "dimA", origin, ""), origin, "dimA");
        m.dimB = count(member(j, "dimB", origin, ""), origin, "dimB");
        m.M = families_at(member(j, "M", origin, ""), s.nX, s.nA, m.dimA, origin, "M");
        m.N = families_at(member(j, "N", origin, ""), s.nY, s.nB, m.dimB, origin, "N");
        m.psi = vector_at(member(j, "psi", origin, ""), origin, "psi");
        if (m.psi.size() != m.dimA * m.dimB)
            fail(origin, "psi", "has length " + std::to_string(m.psi.size()) + ", expected dimA*dimB = " +
                                    std::to_string(m.dimA * m.dimB));
        return m;
    }
    if (kind == "commuting") {
        CommutingModel m;
        m.scenario = s;
        m.dim = count(member(j, "dim", origin, ""), origin, "dim");
        m.M = families_at(member(j, "M", origin, ""), s.nX, s.nA, m.dim, origin, "M");
        m.N = families_at(member(j, "N", origin, ""), s.nY, s.nB, m.dim, origin, "N");
        m.psi = vector_at(member(j, "psi", origin, ""), origin, "psi");
        if (m.psi.size() != m.dim)
            fail(origin, "psi", "has length " + std::to_string(m.psi.size()) + ", expected dim = " + std::to_string(m.dim));
        return m;
    }
    fail(origin, "kind", "unknown model kind '" + kind + "'");
}

Correlation correlation_from_json(const Json &j, const std::string &origin) {
    const Scenario s = scenario_from_json(member(j, "scenario", origin, ""), origin);
    const Json &t = member(j, "p", origin, "");
    Correlation p(s);
    auto expect = [&](const Json &v, int n, const std::string &field) {
        if (!v.is_array() || static_cast<int>(v.size()) != n)
            fail(origin, field, "expected a list of length " + std::to_string(n));
    };
    expect(t, s.nA, "p");
    for (int a = 0; a < s.nA; ++a) {
        const std::string fa = "p[" + std::to_string(a) + "]";
        expect(t[a], s.nB, fa);
        for (int b = 0; b < s.nB; ++b) {
            const std::string fb = fa + "[" + std::to_string(b) + "]";
            expect(t[a][b], s.nX, fb);
            for (int x = 0; x < s.nX; ++x) {
                const std::string fx = fb + "[" + std::to_string(x) + "]";
                expect(t[a][b][x], s.nY, fx);
                for (int y = 0; y < s.nY; ++y) p(a, b, x, y) = number(t[a][b][x][y], origin, fx + "[" + std::to_string(y) + "]");
            }
        }
    }
    return p;
}

DilationWitness witness_from_json(const Json &j, const std::string &origin) {
    if (j.is_object() && j.contains("witness")) return witness_from_json(j["witness"], origin);
    DilationWitness w;
    w.IA = matrix_at(member(j, "IA", origin, ""), origin, "IA");
    w.IB = matrix_at(member(j, "IB", origin, ""), origin, "IB");
    w.aux = vector_at(member(j, "aux", origin, ""), origin, "aux");
    w.auxDimA = count(member(j, "auxDimA", origin, ""), origin, "auxDimA");
    w.auxDimB = count(member(j, "auxDimB", origin, ""), origin, "auxDimB");
    if (w.aux.size() != w.auxDimA * w.auxDimB)
        fail(origin, "aux", "has length " + std::to_string(w.aux.size()) + ", expected auxDimA*auxDimB = " +
                                std::to_string(w.auxDimA * w.auxDimB));
    return w;
}

std::vector<WeightedCorrelation> decomposition_from_json(const Json &j, const std::string &origin) {
    const Json &comps = member(j, "components", origin, "");
    if (!comps.is_array() || comps.empty()) fail(origin, "components", "expected a non-empty list");
    std::vector<WeightedCorrelation> out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string f = "components[" + std::to_string(i) + "]";
        WeightedCorrelation wc;
        wc.weight = number(member(comps[i], "weight", origin, f), origin, f + ".weight");
        wc.p = correlation_from_json(comps[i], origin + " " + f);
        out.push_back(std::move(wc));
    }
    return out;
}

AnyModel read_model(const std::string &path) { return model_from_json(read_json_file(path), path); }

QuantumModel read_quantum_model(const std::string &path) {
    AnyModel m = read_model(path);
    if (auto *q = std::get_if<QuantumModel>(&m)) return std::move(*q);
    throw ParseError(path + ": field 'kind': expected a tensor-product model");
}

Correlation read_correlation(const std::string &path) { return correlation_from_json(read_json_file(path), path); }

std::string sha256_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 8192> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest.data(), &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

} // namespace qst
