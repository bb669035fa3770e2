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

#include "fracctl/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracctl::synthesis {

namespace {

// Principal log with the negative real axis mapped to Arg = +pi.
complex principal_log(complex p) {
    if (p.imag() == 0.0 && p.real() < 0.0) p = complex(p.real(), 0.0);
    return std::log(p);
}

complex principal_pow(complex p, double order) {
    if (order == 0.0) return 1.0;
    if (p == 0.0) {
        if (order > 0.0) return 0.0;
        throw DomainError("p^" + std::to_string(order) + " is singular at p = 0");
    }
    return std::exp(order * principal_log(p));
}

}  // namespace

DominantPoleSpec poles_from_measures(double stability_measure, double damping_measure) {
    if (!(stability_measure > 0.0) || !std::isfinite(stability_measure)) {
        throw DomainError("unstable specification: stability measure S_t must be > 0");
    }
    if (!(damping_measure > 0.0) || !std::isfinite(damping_measure)) {
        throw DomainError("damping measure T_l must be > 0");
    }
    return {stability_measure, damping_measure};
}

double min_gain(double static_deviation, double a0) {
    if (!(static_deviation > 0.0) || !std::isfinite(static_deviation)) {
        throw DomainError("static deviation E_t must be > 0");
    }
    return 100.0 / static_deviation - a0;
}

complex char_residual(const plant::FractionalPlant& plant, const control::FoPidController& c, complex p) {
    complex f = c.gain;
    for (std::size_t k = 0; k < plant.term_count(); ++k) {
        f += plant.coeffs()[k] * principal_pow(p, plant.orders()[k]);
    }
    if (c.ti != 0.0) f += c.ti * principal_pow(p, -c.lambda);
    if (c.td != 0.0) f += c.td * principal_pow(p, c.delta);
    return f;
}

complex char_derivative(const plant::FractionalPlant& plant, const control::FoPidController& c, complex p) {
    complex df = 0.0;
    for (std::size_t k = 0; k < plant.term_count(); ++k) {
        const double b = plant.orders()[k];
        if (b != 0.0) df += plant.coeffs()[k] * b * principal_pow(p, b - 1.0);
    }
    if (c.ti != 0.0 && c.lambda != 0.0) df -= c.lambda * c.ti * principal_pow(p, -c.lambda - 1.0);
    if (c.td != 0.0 && c.delta != 0.0) df += c.delta * c.td * principal_pow(p, c.delta - 1.0);
    return df;
}

std::string to_string(SynthesisMode mode) {
    switch (mode) {
        case SynthesisMode::pd_delta: return "PD_delta";
        case SynthesisMode::pi_lambda: return "PI_lambda";
        case SynthesisMode::pid_fixed_lambda: return "PID_fixed_lambda";
    }
    return "unknown";
}

SynthesisMode parse_mode(const std::string& text) {
    for (SynthesisMode m : {SynthesisMode::pd_delta, SynthesisMode::pi_lambda, SynthesisMode::pid_fixed_lambda}) {
        if (text == to_string(m)) return m;
    }
    throw DomainError("unknown synthesis mode '" + text + "' (PD_delta, PI_lambda, PID_fixed_lambda)");
}

void RootRegion::validate() const {
    for (double v : {re_min, re_max, im_min, im_max}) {
        if (!std::isfinite(v)) throw DomainError("root region must be bounded");
    }
    if (!(re_max > re_min) || !(im_max > im_min)) throw DomainError("root region is empty");
}

bool RootRegion::contains(complex p, double slack) const noexcept {
    return p.real() >= re_min - slack && p.real() <= re_max + slack && p.imag() >= im_min - slack &&
           p.imag() <= im_max + slack;
}

RootRegion default_region(const DominantPoleSpec& spec) {
    return {-20.0 * spec.stability_measure, 0.0, 0.0, 20.0 * spec.stability_measure / spec.damping_measure};
}

namespace {

// The solved channel contributes constant * p^(sign * order).
struct Channel {
    double sign;  // +1 derivative, -1 integral
};

struct Unknowns {
    double constant;
    double order;
};

control::FoPidController assemble(SynthesisMode mode, double gain, const SynthesisOptions& opt, Unknowns x) {
    control::FoPidController c;
    c.gain = gain;
    switch (mode) {
        case SynthesisMode::pd_delta:
            c.td = x.constant;
            c.delta = x.order;
            break;
        case SynthesisMode::pi_lambda:
            c.ti = x.constant;
            c.lambda = x.order;
            break;
        case SynthesisMode::pid_fixed_lambda:
            c.ti = opt.fixed_ti;
            c.lambda = opt.fixed_lambda;
            c.td = x.constant;
            c.delta = x.order;
            break;
    }
    return c;
}

struct NewtonOutcome {
    Unknowns x;
    double residual;
    std::size_t iterations;
    bool converged;
};

// Damped Newton on (Re R, Im R) with R(x) = rest + C p^(s q).
NewtonOutcome newton_solve(complex rest, complex p, Channel ch, Unknowns x, const SynthesisOptions& opt) {
    const complex log_p = principal_log(p);
    const auto residual = [&](Unknowns u) { return rest + u.constant * std::exp(ch.sign * u.order * log_p); };

    complex r = residual(x);
    std::size_t it = 0;
    for (; it < opt.max_iterations && std::abs(r) > opt.tol; ++it) {
        const complex power = std::exp(ch.sign * x.order * log_p);
        const complex d_const = power;
        const complex d_order = x.constant * ch.sign * log_p * power;
        const double j11 = d_const.real(), j12 = d_order.real();
        const double j21 = d_const.imag(), j22 = d_order.imag();
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dc = (-r.real() * j22 + j12 * r.imag()) / det;
        const double dq = (-j11 * r.imag() + j21 * r.real()) / det;

        double step = 1.0;
        Unknowns next{};
        complex r_next;
        for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
            next = {x.constant + step * dc, x.order + step * dq};
            r_next = residual(next);
            if (std::isfinite(std::abs(r_next)) && std::abs(r_next) < std::abs(r)) break;
        }
        if (!(std::abs(r_next) < std::abs(r))) break;
        x = next;
        r = r_next;
    }
    return {x, std::abs(r), it, std::abs(r) <= opt.tol};
}

// Orders in (0, 2]; exactly 2 is an ordinary second derivative.
bool physical(Unknowns x) { return x.constant > 0.0 && x.order > 0.0 && x.order <= 2.0 + 1e-9; }

}  // namespace

SynthesisResult solve_controller_params(const plant::FractionalPlant& plant, double gain,
                                        const DominantPoleSpec& spec, SynthesisMode mode,
                                        const SynthesisOptions& options) {
    poles_from_measures(spec.stability_measure, spec.damping_measure);
    if (!std::isfinite(gain)) throw DomainError("gain K must be finite");
    if (!(options.tol > 0.0)) throw DomainError("synthesis tolerance must be positive");
    if (mode == SynthesisMode::pid_fixed_lambda && (options.fixed_lambda < 0.0 || !std::isfinite(options.fixed_ti))) {
        throw DomainError("PID_fixed_lambda needs a finite Ti and lambda >= 0");
    }

    const complex p1 = spec.upper_pole();
    const Channel ch{mode == SynthesisMode::pi_lambda ? -1.0 : 1.0};
    // Everything in F except the channel being solved.
    const complex rest = char_residual(plant, assemble(mode, gain, options, {0.0, 0.0}), p1);

    // Integer-order start: order 1, constant minimizing |rest + C p^(+-1)|.
    const complex unit = principal_pow(p1, ch.sign);
    const double c0 = -(std::conj(unit) * rest).real() / std::norm(unit);
    const Unknowns start{c0, 1.0};

    NewtonOutcome best = newton_solve(rest, p1, ch, start, options);
    std::size_t total_iterations = best.iterations;
    if (!(best.converged && physical(best.x))) {
        // Grid of starts; keep the admissible solution nearest the integer start.
        const double scale = std::max(std::abs(c0), 1e-3);
        std::optional<NewtonOutcome> chosen;
        double chosen_distance = std::numeric_limits<double>::infinity();
        bool any_converged = best.converged;
        for (double cf : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            for (double q = 0.1; q < 2.0; q += 0.1) {
                const NewtonOutcome o = newton_solve(rest, p1, ch, {cf * scale, q}, options);
                total_iterations += o.iterations;
                if (!o.converged) continue;
                any_converged = true;
                if (!physical(o.x)) continue;
                const double dist = std::hypot((o.x.constant - start.constant) / scale, o.x.order - start.order);
                if (dist < chosen_distance) {
                    chosen_distance = dist;
                    chosen = o;
                }
            }
        }
        if (!chosen) {
            const auto last = assemble(mode, gain, options, best.x);
            if (any_converged) {
                throw SynthesisError(ErrorKind::non_physical,
                                     "non-physical solution: no root with order in (0, 2] and positive constant",
                                     last, total_iterations);
            }
            throw SynthesisError(ErrorKind::convergence,
                                 "synthesis not converged after " + std::to_string(total_iterations) +
                                     " Newton iterations (residual " + std::to_string(best.residual) + ")",
                                 last, total_iterations);
        }
        best = *chosen;
    }

    SynthesisResult result;
    result.controller = assemble(mode, gain, options, best.x);
    result.iterations = total_iterations;
    result.residual = {std::abs(char_residual(plant, result.controller, p1)),
                       std::abs(char_residual(plant, result.controller, std::conj(p1)))};

    const RootRegion region = options.region.value_or(default_region(spec));
    const auto roots = find_dominant_roots(plant, result.controller, region, options.grid_density);
    if (!roots.empty()) result.rightmost_root = roots.front();
    const double closeness = 1e-6 * std::max(1.0, std::abs(p1));
    const bool target_found = std::any_of(roots.begin(), roots.end(),
                                          [&](complex r) { return std::abs(r - p1) < closeness; });
    const bool nothing_right = std::none_of(roots.begin(), roots.end(),
                                            [&](complex r) { return r.real() > p1.real() + closeness; });
    result.dominance_verified = target_found && nothing_right;
    return result;
}

namespace {

constexpr double root_residual_limit = 1e-8;
constexpr double dedup_distance = 1e-6;

std::optional<complex> newton_root(const plant::FractionalPlant& plant, const control::FoPidController& c,
                                   complex p) {
    complex f = char_residual(plant, c, p);
    for (int it = 0; it < 100; ++it) {
        const complex df = char_derivative(plant, c, p);
        if (df == 0.0 || !std::isfinite(std::abs(df))) return std::nullopt;
        const complex delta = f / df;
        double step = 1.0;
        complex next;
        complex f_next;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
            next = p - step * delta;
            if (next == 0.0) continue;
            f_next = char_residual(plant, c, next);
            if (std::abs(f_next) < std::abs(f)) {
                improved = true;
                break;
            }
        }
        if (!improved) break;
        const double moved = std::abs(next - p);
        p = next;
        f = f_next;
        if (moved <= 1e-15 * std::max(1.0, std::abs(p))) break;
    }
    if (std::abs(f) < root_residual_limit) return p;
    return std::nullopt;
}

bool before(complex a, complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

}  // namespace

std::vector<complex> find_dominant_roots(const plant::FractionalPlant& plant,
                                         const control::FoPidController& controller, const RootRegion& region,
                                         std::size_t grid_density) {
    region.validate();
    controller.validate();
    if (grid_density == 0) throw DomainError("grid density must be positive");

    const double dx = (region.re_max - region.re_min) / static_cast<double>(grid_density);
    const double dy = (region.im_max - region.im_min) / static_cast<double>(grid_density);
    const double slack = 1e-9 * std::max({1.0, std::abs(region.re_min), std::abs(region.re_max),
                                          std::abs(region.im_min), std::abs(region.im_max)});

    std::vector<complex> found;
    for (std::size_t i = 0; i < grid_density; ++i) {
        for (std::size_t j = 0; j < grid_density; ++j) {
            const complex seed(region.re_min + (static_cast<double>(i) + 0.5) * dx,
                               region.im_min + (static_cast<double>(j) + 0.5) * dy);
            auto root = newton_root(plant, controller, seed);
            if (!root) continue;
            complex r = *root;
            if (r.imag() < 0.0) r = std::conj(r);
            if (std::abs(r.imag()) <= 1e-10 * std::max(1.0, std::abs(r.real()))) r = complex(r.real(), 0.0);
            if (region.contains(r, slack) || region.contains(std::conj(r), slack)) found.push_back(r);
        }
    }

    std::sort(found.begin(), found.end(), before);
    std::vector<complex> unique;
    for (complex r : found) {
        const bool duplicate = std::any_of(unique.begin(), unique.end(),
                                           [&](complex u) { return std::abs(u - r) < dedup_distance; });
        if (!duplicate) unique.push_back(r);
    }

    std::vector<complex> roots = unique;
    for (complex r : unique) {
        if (r.imag() != 0.0) roots.push_back(std::conj(r));
    }
    std::sort(roots.begin(), roots.end(), before);
    return roots;
}

StabilityReport verify_stability(const plant::FractionalPlant& plant, const control::FoPidController& controller,
                                 const RootRegion& region, std::size_t grid_density) {
    if (region.re_max < 0.0) throw DomainError("stability region must reach Re p = 0");
    const auto roots = find_dominant_roots(plant, controller, region, grid_density);
    StabilityReport report;
    if (!roots.empty()) report.rightmost_root = roots.front();
    report.stable = std::none_of(roots.begin(), roots.end(), [](complex r) { return r.real() >= 0.0; });
    return report;
}

}  // namespace fracctl::synthesis
