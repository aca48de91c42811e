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

#include <iostream>

#include <CLI11.hpp>

#include "qst/cli.hpp"

int main(int argc, char **argv) {
    CLI::App app{"qst: verification toolkit for finite-dimensional bipartite correlation models"};
    app.set_version_flag("--version", std::string(QST_VERSION));

    std::string command;
    std::vector<std::string> inputs;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string format = "json";
    bool assertExtremal = false;
    std::string decomposition;
    double alpha = 0.0;

    app.add_option("command", command, "Command to run")
        ->required()
        ->check(CLI::IsMember(qst::command_names()));
    app.add_option("inputs", inputs, "Input files (models, correlations, witnesses)");
    app.add_option("--tol", tol, "Tolerance eps for approximate equalities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", seed, "Seed for randomized subroutines")->capture_default_str();
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_flag("--assert-extremal", assertExtremal, "Assert that the correlation is extremal");
    app.add_option("--decomposition", decomposition, "Convex decomposition refuting extremality");
    app.add_option("--alpha", alpha, "Tilted-CHSH parameter in [0, 2)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qst::kExitInputError;
    }

    qst::RunConfig config;
    config.command = *qst::parse_command(command);
    config.inputPaths = inputs;
    config.tol = qst::Tolerance(tol);
    config.seed = seed;
    config.format = format == "text" ? qst::OutputFormat::Text : qst::OutputFormat::Json;
    config.assertExtremal = assertExtremal;
    if (!decomposition.empty()) config.decompositionPath = decomposition;
    config.alpha = alpha;

    const qst::Report report = qst::run(config);
    if (report.document.contains("error"))
        std::cerr << "qst " << command << ": " << report.document["error"]["message"].get<std::string>() << "\n";
    std::cout << qst::render(report, config.format);
    return report.exitCode;
}
