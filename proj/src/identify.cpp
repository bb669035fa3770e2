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

#include "fracctl/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracctl/error.hpp"
#include "fracctl/simd/kernels.hpp"

namespace fracctl::identify {

void MeasuredResponse::validate() const {
    if (times.size() != values.size()) throw ValidationError("measurement times and values differ in length");
    if (times.size() < 2) throw ValidationError("measurement needs at least two samples");
    if (times.front() != 0.0) throw ValidationError("measurement must start at t = 0");
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw ValidationError("measurement times must be strictly increasing");
    for (std::size_t m = 1; m < times.size(); ++m) {
        const double dt = times[m] - times[m - 1];
        if (!(dt > 0.0) || std::abs(dt - h) > 1e-6 * h) {
            throw ValidationError("measurement times are not uniform at sample " + std::to_string(m));
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("measurement values must be finite");
    }
}

double MeasuredResponse::step() const {
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

std::string IdentProblem::parameter_name(std::size_t i) const {
    return (i < term_count ? "a" : "beta") + std::to_string(i % term_count);
}

void IdentProblem::validate() const {
    const std::size_t n = parameter_count();
    if (term_count == 0) throw DomainError("identification needs at least one term");
    if (free_mask.size() != n || bounds.size() != n || initial_guess.size() != n) {
        throw DomainError("free mask, bounds and initial guess need " + std::to_string(n) + " entries");
    }
    if (std::none_of(free_mask.begin(), free_mask.end(), [](bool f) { return f; })) {
        throw DomainError("no free parameters");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = bounds[i];
        if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || b.lower > b.upper ||
            (free_mask[i] && b.lower == b.upper)) {
            throw DomainError("infeasible bounds for " + parameter_name(i));
        }
        if (initial_guess[i] < b.lower || initial_guess[i] > b.upper) {
            throw DomainError("initial guess for " + parameter_name(i) + " lies outside its bounds");
        }
    }
    // Orders must admit a strictly increasing assignment.
    for (std::size_t k = term_count + 1; k < n; ++k) {
        if (bounds[k].upper <= bounds[k - 1].lower) {
            throw DomainError("bounds of " + parameter_name(k) + " cannot exceed " + parameter_name(k - 1));
        }
    }
    if (bounds[term_count].upper < 0.0) throw DomainError("beta0 must be allowed to be >= 0");
    for (std::size_t k = term_count + 1; k < n; ++k) {
        if (!(initial_guess[k] > initial_guess[k - 1])) {
            throw DomainError("initial guess orders must be strictly increasing");
        }
    }
    if (initial_guess[term_count] < 0.0) throw DomainError("initial guess beta0 must be >= 0");
}

double quadratic_criterion(std::span<const double> measured, std::span<const double> computed) {
    if (measured.size() != computed.size()) throw DomainError("criterion needs equally long sequences");
    if (measured.empty()) throw DomainError("criterion needs at least one sample");
    return simd::sum_sq_diff(measured, computed) / static_cast<double>(measured.size());
}

ObjectiveValue objective_q(std::span<const double> coeffs, std::span<const double> orders,
                           const MeasuredResponse& data) {
    const std::vector<double> input(data.values.size(), 1.0);
    std::vector<double> y;
    try {
        y = plant::simulate_terms(coeffs, orders, input, data.step());
    } catch (const DomainError&) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    const double q = quadratic_criterion(data.values, y);
    if (!std::isfinite(q)) return {std::numeric_limits<double>::infinity(), true};
    return {q, false};
}

ObjectiveValue objective_q(const plant::FractionalPlant& candidate, const MeasuredResponse& data) {
    data.validate();
    return objective_q(candidate.coeffs(), candidate.orders(), data);
}

namespace {

class Objective {
public:
    Objective(const MeasuredResponse& data, const IdentProblem& problem, const IdentOptions& options)
        : data_(data), problem_(problem), options_(options), free_() {
        for (std::size_t i = 0; i < problem.parameter_count(); ++i) {
            if (problem.free_mask[i]) free_.push_back(i);
        }
    }

    std::size_t dimension() const noexcept { return free_.size(); }
    std::size_t evaluations() const noexcept { return evaluations_; }

    // Scaled coordinates: s = (x - lower) / (upper - lower).
    std::vector<double> to_scaled(const std::vector<double>& full) const {
        std::vector<double> s(free_.size());
        for (std::size_t i = 0; i < free_.size(); ++i) {
            const auto& b = problem_.bounds[free_[i]];
            s[i] = (full[free_[i]] - b.lower) / (b.upper - b.lower);
        }
        return s;
    }

    std::vector<double> to_full(const std::vector<double>& scaled) const {
        std::vector<double> full = problem_.initial_guess;
        for (std::size_t i = 0; i < free_.size(); ++i) {
            const auto& b = problem_.bounds[free_[i]];
            full[free_[i]] = b.lower + std::clamp(scaled[i], 0.0, 1.0) * (b.upper - b.lower);
        }
        return full;
    }

    double order_violation(const std::vector<double>& full) const {
        const std::size_t n = problem_.term_count;
        double v = std::max(0.0, -full[n]);
        for (std::size_t k = n + 1; k < 2 * n; ++k) {
            v += std::max(0.0, full[k - 1] + options_.order_margin - full[k]);
        }
        if (full[n - 1] == 0.0) v += 1.0;
        return v;
    }

    bool feasible(const std::vector<double>& full) const {
        const std::size_t n = problem_.term_count;
        if (full[n] < 0.0 || full[n - 1] == 0.0) return false;
        for (std::size_t k = n + 1; k < 2 * n; ++k) {
            if (!(full[k] > full[k - 1])) return false;
        }
        return true;
    }

    double operator()(const std::vector<double>& scaled) {
        ++evaluations_;
        const std::vector<double> full = to_full(scaled);
        const std::size_t n = problem_.term_count;
        const std::span<const double> params(full);
        const ObjectiveValue q = objective_q(params.first(n), params.subspan(n), data_);
        const double violation = order_violation(full);
        if (feasible(full) && q.q < best_feasible_q_) {
            best_feasible_q_ = q.q;
            best_feasible_ = full;
        }
        return q.q + options_.penalty_weight * violation * violation;
    }

    // Lowest-Q evaluation whose orders were strictly increasing.
    const std::vector<double>& best_feasible() const noexcept { return best_feasible_; }
    double best_feasible_q() const noexcept { return best_feasible_q_; }

private:
    const MeasuredResponse& data_;
    const IdentProblem& problem_;
    const IdentOptions& options_;
    std::vector<std::size_t> free_;
    std::size_t evaluations_ = 0;
    std::vector<double> best_feasible_;
    double best_feasible_q_ = std::numeric_limits<double>::infinity();
};

struct Vertex {
    std::vector<double> x;
    double f;
};

double diameter(const std::vector<Vertex>& simplex) {
    double d = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
        double dist = 0.0;
        for (std::size_t k = 0; k < simplex[0].x.size(); ++k) {
            dist = std::max(dist, std::abs(simplex[i].x[k] - simplex[0].x[k]));
        }
        d = std::max(d, dist);
    }
    return d;
}

std::vector<double> affine(const std::vector<double>& a, const std::vector<double>& b, double t) {
    // a + t (b - a)
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
}

}  // namespace

IdentResult identify(const MeasuredResponse& data, const IdentProblem& problem, const IdentOptions& options) {
    data.validate();
    problem.validate();
    if (options.max_evaluations < problem.parameter_count() + 2) {
        throw DomainError("evaluation budget too small for the simplex");
    }

    Objective objective(data, problem, options);
    const std::size_t dim = objective.dimension();
    const auto budget_left = [&] { return objective.evaluations() < options.max_evaluations; };

    std::vector<double> best_x = objective.to_scaled(problem.initial_guess);
    double best_f = objective(best_x);
    std::vector<double> history;
    bool converged = false;

    // Restart from the incumbent until a restart no longer improves it.
    for (int restart = 0; restart < 8 && budget_left(); ++restart) {
        const double initial_edge = restart == 0 ? 0.1 : 0.05;
        std::vector<Vertex> simplex{{best_x, best_f}};
        for (std::size_t i = 0; i < dim && budget_left(); ++i) {
            std::vector<double> x = best_x;
            x[i] += (x[i] + initial_edge <= 1.0) ? initial_edge : -initial_edge;
            simplex.push_back({x, objective(x)});
        }
        if (simplex.size() < dim + 1) break;

        const double start_f = best_f;
        bool restart_converged = false;
        while (budget_left()) {
            std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
            history.push_back(std::min(best_f, simplex.front().f));
            if (diameter(simplex) < options.simplex_tolerance) {
                restart_converged = true;
                break;
            }
            std::vector<double> centroid(dim, 0.0);
            for (std::size_t v = 0; v < dim; ++v) {
                for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[v].x[k] / static_cast<double>(dim);
            }
            Vertex& worst = simplex.back();
            const auto clamp01 = [](std::vector<double> x) {
                for (double& v : x) v = std::clamp(v, 0.0, 1.0);
                return x;
            };
            const std::vector<double> xr = clamp01(affine(centroid, worst.x, -1.0));
            const double fr = objective(xr);
            if (fr < simplex.front().f) {
                const std::vector<double> xe = clamp01(affine(centroid, worst.x, -2.0));
                const double fe = budget_left() ? objective(xe) : std::numeric_limits<double>::infinity();
                worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
            } else if (fr < simplex[dim - 1].f) {
                worst = {xr, fr};
            } else {
                const bool outside = fr < worst.f;
                const std::vector<double> xc = affine(centroid, outside ? xr : worst.x, 0.5);
                const double fc = objective(xc);
                if (fc < std::min(fr, worst.f)) {
                    worst = {xc, fc};
                } else {
                    for (std::size_t v = 1; v <= dim && budget_left(); ++v) {
                        simplex[v].x = affine(simplex.front().x, simplex[v].x, 0.5);
                        simplex[v].f = objective(simplex[v].x);
                    }
                }
            }
        }
        std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        if (simplex.front().f < best_f) {
            best_f = simplex.front().f;
            best_x = simplex.front().x;
        }
        history.push_back(best_f);
        if (restart_converged && restart > 0 && start_f - best_f <= 1e-12 * std::max(start_f, 1e-300)) {
            converged = true;
            break;
        }
        if (restart_converged && best_f == 0.0) {
            converged = true;
            break;
        }
    }

    if (objective.best_feasible().empty()) {
        throw ConvergenceError("identification found no candidate with strictly increasing orders",
                               objective.evaluations());
    }
    const std::vector<double> full = objective.best_feasible();
    const std::size_t n = problem.term_count;
    std::vector<double> coeffs(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> orders(full.begin() + static_cast<std::ptrdiff_t>(n), full.end());
    plant::FractionalPlant fitted(std::move(coeffs), std::move(orders));

    return IdentResult{std::move(fitted), objective.best_feasible_q(), objective.evaluations(), converged, full,
                       std::move(history)};
}

}  // namespace fracctl::identify
