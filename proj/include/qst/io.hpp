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
 * @file io.hpp
 * @brief JSON file formats for models, correlations, dilation witnesses and
 * convex decompositions, and the canonical (byte-stable) JSON writer.
 *
 * Matrices are row-major lists of rows with entries [re, im]; vectors are
 * lists of [re, im]. Correlation tables are nested [a][b][x][y].
 */

#include <string>
#include <vector>

#include <json.hpp>

#include "qst/dilations.hpp"
#include "qst/models.hpp"
#include "qst/representations.hpp"
#include "qst/special.hpp"

namespace qst {

using Json = nlohmann::json;

/// Malformed input; the message names the file and the offending line or field.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Sorted keys, no whitespace, floats with 17 significant digits.
[[nodiscard]] std::string canonical_dump(const Json &j);

/// Read and parse a JSON file; syntax errors report the line and column.
[[nodiscard]] Json read_json_file(const std::string &path);

[[nodiscard]] Json matrix_to_json(const CMatrix &m);
[[nodiscard]] Json vector_to_json(const CVector &v);
[[nodiscard]] Json real_matrix_to_json(const RMatrix &m);
[[nodiscard]] Json scenario_to_json(const Scenario &s);
[[nodiscard]] Json model_to_json(const QuantumModel &m);
[[nodiscard]] Json model_to_json(const CommutingModel &m);
[[nodiscard]] Json model_to_json(const AnyModel &m);
[[nodiscard]] Json correlation_to_json(const Correlation &p);
[[nodiscard]] Json witness_to_json(const DilationWitness &w);
[[nodiscard]] Json word_pair_to_json(const WordPair &w);

/// `origin` prefixes error messages (usually the file path).
[[nodiscard]] CMatrix matrix_from_json(const Json &j, const std::string &origin);
[[nodiscard]] CVector vector_from_json(const Json &j, const std::string &origin);
[[nodiscard]] Scenario scenario_from_json(const Json &j, const std::string &origin);
[[nodiscard]] AnyModel model_from_json(const Json &j, const std::string &origin);
[[nodiscard]] Correlation correlation_from_json(const Json &j, const std::string &origin);
/// Accepts a bare witness object or any document with a "witness" member.
[[nodiscard]] DilationWitness witness_from_json(const Json &j, const std::string &origin);
/// {"components": [{"weight": w, "scenario": {...}, "p": [...]}, ...]}
[[nodiscard]] std::vector<WeightedCorrelation> decomposition_from_json(const Json &j, const std::string &origin);

[[nodiscard]] AnyModel read_model(const std::string &path);
[[nodiscard]] QuantumModel read_quantum_model(const std::string &path);
[[nodiscard]] Correlation read_correlation(const std::string &path);

/// Hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::string &path);

} // namespace qst
