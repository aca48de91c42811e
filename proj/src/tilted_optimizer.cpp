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

#include "qst/random.hpp"
#include "qst/special.hpp"

#include <cmath>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace qst {

QuantumModel tilted_chsh_model(const std::array<double, 5> &params) {
    CMatrix Z(2, 2), X(2, 2);
    Z << 1, 0, 0, -1;
    X << 0, 1, 1, 0;
    const CMatrix id = identity(2);
    auto binary_pvm = [&](double angle) {
        const CMatrix obs = std::cos(angle) * Z + std::sin(angle) * X;
        return std::vector<CMatrix>{0.5 * (id + obs), 0.5 * (id - obs)};
    };
    QuantumModel m;
    m.scenario = {2, 2, 2, 2};
    m.dimA = 2;
    m.dimB = 2;
    m.M = {binary_pvm(params[1]), binary_pvm(params[2])};
    m.N = {binary_pvm(params[3]), binary_pvm(params[4])};
    m.psi = CVector::Zero(4);
    m.psi(0) = std::cos(params[0]);
    m.psi(3) = std::sin(params[0]);
    return m;
}

namespace {

double tilted_value(const std::array<double, 5> &q, double alpha) {
    // For psi = cos t|00> + sin t|11> and real observables in the Z-X plane:
    // <A (x) B> = cos u cos v + sin 2t sin u sin v, <A (x) Id> = cos 2t cos u
    const double s2 = std::sin(2.0 * q[0]);
    const double c2 = std::cos(2.0 * q[0]);
    auto corr = [&](double u, double v) { return std::cos(u) * std::cos(v) + s2 * std::sin(u) * std::sin(v); };
    return alpha * c2 * std::cos(q[1]) + corr(q[1], q[3]) + corr(q[1], q[4]) + corr(q[2], q[3]) -
           corr(q[2], q[4]);
}

struct Objective {
    double alpha;
};

double negated(const gsl_vector *v, void *params) {
    const auto *o = static_cast<const Objective *>(params);
    std::array<double, 5> q{};
    for (std::size_t i = 0; i < 5; ++i) q[i] = gsl_vector_get(v, i);
    return -tilted_value(q, o->alpha);
}

std::pair<std::array<double, 5>, double> simplex(const std::array<double, 5> &start, double step, double alpha) {
    Objective obj{alpha};
    gsl_multimin_function fn{&negated, 5, &obj};
    gsl_vector *x = gsl_vector_alloc(5);
    gsl_vector *steps = gsl_vector_alloc(5);
    for (std::size_t i = 0; i < 5; ++i) gsl_vector_set(x, i, start[i]);
    gsl_vector_set_all(steps, step);
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 5);
    gsl_multimin_fminimizer_set(s, &fn, x, steps);
    for (int iter = 0; iter < 20000; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
    }
    std::array<double, 5> best{};
    for (std::size_t i = 0; i < 5; ++i) best[i] = gsl_vector_get(s->x, i);
    const double value = -s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(steps);
    gsl_vector_free(x);
    return {best, value};
}

} // namespace

TiltedOptimum optimize_tilted_chsh(double alpha, std::uint64_t seed, int restarts) {
    (void)tilted_chsh_build(alpha); // range check
    gsl_set_error_handler_off();
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    TiltedOptimum best;
    best.value = -INFINITY;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::array<double, 5> start{};
        for (auto &v : start) v = angle(rng);
        auto [q, value] = simplex(start, 0.5, alpha);
        // polish from the converged point with a small simplex
        for (int pass = 0; pass < 3; ++pass) {
            auto [q2, v2] = simplex(q, 1e-3, alpha);
            if (v2 < value) break;
            q = q2;
            value = v2;
        }
        if (value > best.value) {
            best.value = value;
            best.params = q;
        }
        ++best.restarts;
    }
    best.model = tilted_chsh_model(best.params);
    return best;
}

} // namespace qst
