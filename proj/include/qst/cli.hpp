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
 * @file cli.hpp
 * @brief Batch front-end: one command per verification procedure, producing a
 * deterministic JSON report and an exit code (0 pass, 1 check failed,
 * 2 input or usage error).
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qst/io.hpp"

namespace qst {

enum class Command {
    Validate,
    Correlation,
    Schmidt,
    Support,
    Naimark,
    RoundBinary,
    SyncVerify,
    Xor,
    XorCertify,
    StateEqual,
    FindDilation,
    VerifyDilation,
    Irrep,
    Cyclic,
    TiltedSos,
};

[[nodiscard]] const char *to_string(Command c) noexcept;
[[nodiscard]] std::optional<Command> parse_command(const std::string &name);
[[nodiscard]] const std::vector<std::string> &command_names();

enum class OutputFormat { Json, Text };

struct RunConfig {
    Command command = Command::Validate;
    std::vector<std::string> inputPaths;
    Tolerance tol{};
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Json;
    bool assertExtremal = false;
    std::optional<std::string> decompositionPath;
    double alpha = 0.0;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

struct Report {
    Json document;                 ///< command, verdict, result, provenance (or error)
    int exitCode = kExitPass;
    std::vector<std::string> text; ///< human-readable lines for --format text
};

/// Never throws for bad input: errors become exit code 2 with an "error" member.
[[nodiscard]] Report run(const RunConfig &config);

/// Report rendered in the configured format, newline terminated.
[[nodiscard]] std::string render(const Report &report, OutputFormat format);

} // namespace qst
