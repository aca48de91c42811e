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

// Writes the shipped fixture corpus into the directory given as argv[1].

#include <fstream>
#include <iostream>

#include "fixture_builders.hpp"
#include "qst/dilations.hpp"
#include "qst/io.hpp"

namespace {

void write(const std::string &dir, const std::string &name, const qst::Json &j) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    out << qst::canonical_dump(j) << "\n";
    if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
}

} // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output-dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    namespace fx = qst::fixtures;
    try {
        write(dir, "exA_S.model.json", qst::model_to_json(fx::example_s()));
        write(dir, "exA_Shat.model.json", qst::model_to_json(fx::example_shat()));
        write(dir, "exA_Shat_commuting.model.json", qst::model_to_json(qst::as_commuting(fx::example_shat())));
        write(dir, "chsh_ideal.model.json", qst::model_to_json(fx::chsh_ideal()));
        write(dir, "chsh.corr.json", qst::correlation_to_json(fx::chsh_ideal_correlation()));
        write(dir, "chsh_aux.model.json", qst::model_to_json(fx::chsh_with_entangled_aux()));
        write(dir, "chsh_direct_sum.model.json", qst::model_to_json(fx::chsh_direct_sum()));
        write(dir, "chsh_padded.model.json", qst::model_to_json(fx::chsh_padded()));
        write(dir, "binary_violating.model.json", qst::model_to_json(fx::binary_violating()));
        write(dir, "sync_full_rank.model.json", qst::model_to_json(fx::synchronous_full_rank(3, 2, 3, 7)));
        write(dir, "sync_block.model.json", qst::model_to_json(fx::synchronous_block(2, 2, 2, 11)));
        write(dir, "trine.model.json", qst::model_to_json(fx::trine_model()));
        write(dir, "support_mixing.model.json", qst::model_to_json(fx::support_mixing()));
        write(dir, "deterministic.model.json", qst::model_to_json(fx::deterministic_binary()));

        const auto w = qst::find_local_dilation(fx::chsh_with_entangled_aux(), fx::chsh_ideal(), 0);
        write(dir, "chsh_aux_to_ideal.witness.json", qst::witness_to_json(w));

        // half ideal CHSH, half uniform noise: unbiased, rank 2, not extremal
        qst::Correlation uniform({2, 2, 2, 2});
        for (auto &v : uniform.values()) v = 0.25;
        const qst::Correlation ideal = fx::chsh_ideal_correlation();
        qst::Correlation mixed({2, 2, 2, 2});
        for (std::size_t i = 0; i < mixed.values().size(); ++i)
            mixed.values()[i] = 0.5 * ideal.values()[i] + 0.5 * uniform.values()[i];
        write(dir, "chsh_noisy.corr.json", qst::correlation_to_json(mixed));
        qst::Json c1 = qst::correlation_to_json(ideal);
        c1["weight"] = 0.5;
        qst::Json c2 = qst::correlation_to_json(uniform);
        c2["weight"] = 0.5;
        write(dir, "chsh_noisy.decomposition.json", {{"components", {c1, c2}}});
    } catch (const std::exception &e) {
        std::cerr << "make_fixtures: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
