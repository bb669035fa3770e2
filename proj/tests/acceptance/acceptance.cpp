/*******************************************************************************
* Copyright 2026 The fracctl Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracctl/fraccalc.hpp"
#include "fracctl/identify.hpp"
#include "fracctl/loopsim.hpp"
#include "fracctl/plant.hpp"
#include "fracctl/simd/kernels.hpp"
#include "fracctl/synthesis.hpp"
#include "support/oracles.hpp"

namespace {

using namespace fracctl;
using plant::FractionalPlant;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

FractionalPlant integer_plant() { return FractionalPlant({1.0, 0.2313, 0.7414}, {0.0, 1.0, 2.0}); }
FractionalPlant fractional_plant() { return FractionalPlant({1.0, 0.5, 0.8}, {0.0, 0.9, 2.2}); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

void differint_oracle(Outcome& out) {
    const double h = 1e-3;
    std::vector<double> f(1001);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = h * static_cast<double>(k);
    for (double alpha : {0.3, 0.5, 0.9}) {
        const double value = fraccalc::gl_differint(f, {alpha, h}).back();
        const double exact = std::tgamma(2.0) / std::tgamma(2.0 - alpha);
        const double rel = std::abs(value - exact) / exact;
        out.detail << " a=" << alpha << ":rel " << rel;
        out.check(rel < 0.01, "alpha " + std::to_string(alpha));
    }
}

void mittag_leffler_identities(Outcome& out) {
    double worst = 0.0;
    for (double z : {0.5, 1.0, 2.0}) {
        const double e11 = fraccalc::mittag_leffler(1.0, 1.0, z).real();
        const double e12 = fraccalc::mittag_leffler(1.0, 2.0, z).real();
        worst = std::max(worst, std::abs(e11 - std::exp(z)) / std::exp(z));
        const double ref = (std::exp(z) - 1.0) / z;
        worst = std::max(worst, std::abs(e12 - ref) / ref);
    }
    out.detail << " max rel " << worst;
    out.check(worst < 1e-9, "relative error");
}

void solver_cross_check(Outcome& out) {
    const FractionalPlant lag({1.0, 1.0}, {0.0, 1.0});
    const plant::TimeGrid grid{1e-3, 5.0};
    const auto y = plant::simulate_plant(lag, std::vector<double>(grid.steps() + 1, 1.0), grid);
    double numeric = 0.0, analytic = 0.0;
    for (std::size_t k = 0; k <= grid.steps(); ++k) {
        const double t = grid.time(k);
        const double exact = 1.0 - std::exp(-t);
        numeric = std::max(numeric, std::abs(y[k] - exact));
        if (k % 10 == 0) analytic = std::max(analytic, std::abs(plant::analytic_solution(lag, t) - exact));
    }
    out.detail << " numeric " << numeric << ", analytic " << analytic;
    out.check(numeric < 5e-3, "numeric solver");
    out.check(analytic < 1e-3, "analytic series");
}

void classical_degeneration(Outcome& out) {
    const control::FoPidController pid{20.5, 1.0, 1.0, 2.7343, 1.0};
    const testing::SecondOrderPlant oracle_plant{1.0, 0.2313, 0.7414};

    // Zero-delay loop against a backward-Euler state-space integrator.
    const double h = 0.01;
    const testing::LoopSpec spec{oracle_plant, pid.gain, pid.ti, pid.td, h, 1000};
    const auto reference = testing::backward_euler_pid_loop(spec);
    const auto trace = loop::simulate_closed_loop({integer_plant(), pid, {h, 10.0}});
    const double implicit_err = max_abs_diff(trace.y, reference);

    // One-sample-delay loop against an RK4 integrator with zero-order hold.
    const double hd = 5e-4;
    const testing::LoopSpec delay_spec{oracle_plant, pid.gain, pid.ti, pid.td, hd, 20000};
    const auto rk4 = testing::rk4_pid_loop(delay_spec);
    loop::LoopConfig delayed{integer_plant(), pid, {hd, 10.0}};
    delayed.one_step_delay = true;
    const double delay_err = max_abs_diff(loop::simulate_closed_loop(delayed).y, rk4);

    out.detail << " implicit vs backward Euler " << implicit_err << ", delayed vs RK4 " << delay_err;
    out.check(implicit_err < 1e-3, "backward-Euler oracle");
    out.check(delay_err < 1e-3, "RK4 oracle");
}

void design_reproduction(Outcome& out) {
    const auto roots = testing::quadratic_roots(0.7414, 0.2313 + 2.7343, 21.5);
    const auto upper = roots[0].imag() > 0 ? roots[0] : roots[1];
    out.detail << " back-substituted pole " << upper.real() << (upper.imag() >= 0 ? "+" : "") << upper.imag() << "i";
    out.check(std::abs(upper - std::complex<double>(-2.0, 5.0)) < 0.05, "pole back-substitution");

    const auto spec = synthesis::poles_from_measures(2.0, 0.4);
    const auto integer = synthesis::solve_controller_params(integer_plant(), 20.5, spec, synthesis::SynthesisMode::pd_delta);
    const auto fractional =
        synthesis::solve_controller_params(fractional_plant(), 20.5, spec, synthesis::SynthesisMode::pd_delta);
    out.detail << "; integer Td " << integer.controller.td << " delta " << integer.controller.delta
               << "; fractional Td " << fractional.controller.td << " delta " << fractional.controller.delta;
    out.check(std::abs(integer.controller.td - 2.7343) <= 0.03, "integer Td");
    out.check(std::abs(integer.controller.delta - 1.0) <= 0.01, "integer delta");
    out.check(std::abs(fractional.controller.td - 5.79) <= 0.12, "fractional Td");
    out.check(std::abs(fractional.controller.delta - 0.95) <= 0.02, "fractional delta");
}

void controller_comparison(Outcome& out) {
    const control::FoPidController fractional_pd{20.5, 0.0, 0.0, 5.79, 0.95};
    const control::FoPidController integer_pd{20.5, 0.0, 0.0, 2.7343, 1.0};
    const plant::TimeGrid grid{0.01, 10.0};
    const auto mf = loop::compute_metrics(loop::simulate_closed_loop({fractional_plant(), fractional_pd, grid}));
    const auto mi = loop::compute_metrics(loop::simulate_closed_loop({fractional_plant(), integer_pd, grid}));
    out.detail << " fractional P_r " << mf.overshoot << "% T_r " << mf.control_time << " s; integer P_r "
               << mi.overshoot << "% T_r " << mi.control_time << " s";
    out.check(mf.overshoot < mi.overshoot, "overshoot ordering");
    out.check(mf.control_time < mi.control_time, "control time ordering");

    auto region = synthesis::default_region(synthesis::poles_from_measures(2.0, 0.4));
    region.re_max = -region.re_min;
    out.check(synthesis::verify_stability(fractional_plant(), fractional_pd, region).stable, "fractional loop stable");
    out.check(synthesis::verify_stability(fractional_plant(), integer_pd, region).stable, "integer loop stable");
}

void identification_round_trip(Outcome& out) {
    const plant::TimeGrid grid{0.01, 10.0};
    identify::MeasuredResponse data;
    data.values = plant::simulate_plant(fractional_plant(), std::vector<double>(grid.steps() + 1, 1.0), grid);
    for (std::size_t k = 0; k <= grid.steps(); ++k) data.times.push_back(grid.time(k));

    identify::IdentProblem problem;
    problem.term_count = 3;
    problem.free_mask = {false, true, true, false, true, true};
    problem.bounds = {{1.0, 1.0}, {0.05, 2.0}, {0.05, 2.0}, {0.0, 0.0}, {0.1, 1.5}, {1.5, 3.0}};
    problem.initial_guess = {1.0, 0.5 * 1.2, 0.8 / 1.2, 0.0, 0.9 / 1.2, 2.2 * 1.2};
    const auto r = identify::identify(data, problem);

    const std::vector<double> truth{1.0, 0.5, 0.8, 0.0, 0.9, 2.2};
    double worst = 0.0;
    for (std::size_t i : {1u, 2u, 4u, 5u}) worst = std::max(worst, std::abs(r.parameters[i] - truth[i]) / truth[i]);
    out.detail << " max rel param error " << worst << ", Q " << r.q << ", " << r.evaluations << " evaluations";
    out.check(worst < 0.05, "parameter recovery");
    out.check(r.q < 1e-6, "final Q");
}

void property_suites(Outcome& out) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Binomial recurrence against the gamma-function form.
    double binom_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = -3.0 + 6.0 * unit(rng);
        const auto table = fraccalc::binomial_coeffs(alpha, 30);
        for (std::size_t j = 0; j <= 30; ++j) {
            const double ref = testing::gamma_binomial_weight(alpha, j);
            binom_err = std::max(binom_err, std::abs(table.values[j] - ref) / std::max(1.0, std::abs(ref)));
        }
    }
    out.check(binom_err < 1e-10, "binomial recurrence");

    // Short memory covering the whole signal changes nothing.
    std::vector<double> f(500);
    for (double& v : f) v = unit(rng);
    const auto full = fraccalc::gl_differint(f, {0.7, 0.01});
    const auto windowed = fraccalc::gl_differint(f, {0.7, 0.01, 5.0});
    out.check(full == windowed, "short-memory exactness");

    // Conjugate closure of the characteristic function.
    double conj_err = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const control::FoPidController c{20 * unit(rng), 5 * unit(rng), 2 * unit(rng), 5 * unit(rng), 2 * unit(rng)};
        const std::complex<double> p(-10 + 20 * unit(rng), 0.01 + 10 * unit(rng));
        const auto a = synthesis::char_residual(fractional_plant(), c, p);
        const auto b = synthesis::char_residual(fractional_plant(), c, std::conj(p));
        conj_err = std::max(conj_err, std::abs(a - std::conj(b)) / std::max(1.0, std::abs(a)));
    }
    out.check(conj_err < 1e-12, "conjugate closure");

    // Trace reconstruction e = w* - y.
    const auto trace = loop::simulate_closed_loop(
        {fractional_plant(), control::FoPidController{10.0, 2.0, 0.6, 3.0, 0.8}, {0.01, 5.0}, 1.0});
    bool reconstructs = true;
    for (std::size_t k = 0; k < trace.size(); ++k) reconstructs &= trace.e[k] == trace.w_star[k] - trace.y[k];
    out.check(reconstructs, "trace reconstruction");

    // Q non-negativity and quadratic scaling.
    bool q_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(64), b(64);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = unit(rng) - 0.5;
            b[i] = unit(rng) - 0.5;
        }
        const double q = identify::quadratic_criterion(a, b);
        const double c = 0.5 + 3.0 * unit(rng);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] *= c;
            b[i] *= c;
        }
        q_ok &= q >= 0.0 && std::abs(identify::quadratic_criterion(a, b) - c * c * q) <= 1e-12 * c * c * q;
        q_ok &= identify::quadratic_criterion(a, a) == 0.0;
    }
    out.check(q_ok, "criterion non-negativity and scaling");
    out.detail << " binomial err " << binom_err << ", conjugate err " << conj_err;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "fractional derivative of t matches the gamma formula", 1.0, differint_oracle},
        {2, "Mittag-Leffler exponential identities", 1.0, mittag_leffler_identities},
        {3, "numerical and analytic solvers match 1 - exp(-t)", 5.0, solver_cross_check},
        {4, "integer-order loop matches classical PID oracles", 5.0, classical_degeneration},
        {5, "PD-delta synthesis reproduces the reference designs", 10.0, design_reproduction},
        {6, "fractional PD beats integer PD on the fractional plant", 30.0, controller_comparison},
        {7, "identification recovers the fractional plant", 60.0, identification_round_trip},
        {8, "property suites hold", 60.0, property_suites},
    };

    std::printf("kernel variant: %s\n", std::string(simd::to_string(simd::active_variant())).c_str());
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " [exception: " << e.what() << "]";
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_seconds) {
            out.pass = false;
            out.detail << " [over budget " << c.budget_seconds << " s]";
        }
        failures += out.pass ? 0 : 1;
        std::printf("%s criterion %d: %s (%.3f s):%s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                    out.detail.str().c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
