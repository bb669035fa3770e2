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

#include "fracctl/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracctl/error.hpp"
#include "fracctl/simd/kernels.hpp"

namespace fracctl::plant {

FractionalPlant::FractionalPlant(std::vector<double> coeffs, std::vector<double> orders)
    : coeffs_(std::move(coeffs)), orders_(std::move(orders)) {
    if (coeffs_.empty()) throw ValidationError("plant needs at least one term");
    if (coeffs_.size() != orders_.size()) {
        throw ValidationError("coeffs and orders differ in length (" + std::to_string(coeffs_.size()) +
                              " vs " + std::to_string(orders_.size()) + ")");
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (!std::isfinite(coeffs_[i]) || !std::isfinite(orders_[i])) {
            throw ValidationError("plant term " + std::to_string(i) + " is not finite");
        }
    }
    if (orders_.front() < 0.0) throw ValidationError("orders: lowest order must be >= 0");
    for (std::size_t i = 1; i < orders_.size(); ++i) {
        if (!(orders_[i] > orders_[i - 1])) {
            throw ValidationError("orders not strictly increasing at index " + std::to_string(i));
        }
    }
    if (coeffs_.back() == 0.0) throw ValidationError("coeffs: highest-order coefficient must be nonzero");
}

FractionalPlant validate_plant(std::vector<double> coeffs, std::vector<double> orders) {
    return FractionalPlant(std::move(coeffs), std::move(orders));
}

void TimeGrid::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("time grid step must be positive");
    if (!(horizon >= step) || !std::isfinite(horizon)) throw DomainError("time grid horizon must be >= step");
}

std::size_t TimeGrid::steps() const {
    validate();
    return static_cast<std::size_t>(std::llround(horizon / step));
}

namespace {

bool is_nonneg_integer(double x) { return x >= 0.0 && x == std::floor(x); }

}  // namespace

PlantStepper::PlantStepper(std::span<const double> coeffs, std::span<const double> orders, double step) {
    if (!(step > 0.0)) throw DomainError("plant step must be positive");
    if (coeffs.size() != orders.size() || coeffs.empty()) {
        throw DomainError("plant coefficient and order lists must be non-empty and equal in length");
    }
    std::size_t support = 1;
    bool finite_support = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double scale = coeffs[i] * std::pow(step, -orders[i]);
        denominator_ += scale;
        tables_.push_back(fraccalc::CoefficientTable{orders[i], {1.0}});
        scales_.push_back(scale);
        if (is_nonneg_integer(orders[i])) {
            support = std::max(support, static_cast<std::size_t>(orders[i]) + 1);
        } else {
            finite_support = false;
        }
    }
    if (denominator_ == 0.0 || !std::isfinite(denominator_)) {
        throw DomainError("plant step equation is singular (sum a_i h^-b_i = 0)");
    }
    if (finite_support) support_ = support;
    weights_.assign(1, 0.0);
}

PlantStepper::PlantStepper(const FractionalPlant& plant, double step)
    : PlantStepper(plant.coeffs(), plant.orders(), step) {}

void PlantStepper::reserve(std::size_t samples) {
    outputs_.reserve(samples);
    ensure_weights(samples);
}

void PlantStepper::ensure_weights(std::size_t count) {
    if (support_) count = std::min(count, *support_ - 1);
    const std::size_t have = weights_.size() - 1;
    if (count <= have) return;
    const std::size_t target = std::max(count, 2 * have);
    const std::size_t limit = support_ ? std::min(target, *support_ - 1) : target;
    weights_.resize(limit + 1, 0.0);
    for (std::size_t i = 0; i < tables_.size(); ++i) {
        tables_[i].extend_to(limit);
        simd::axpy(scales_[i], std::span<const double>(tables_[i].values).subspan(have + 1, limit - have),
                   std::span<double>(weights_).subspan(have + 1, limit - have));
    }
}

double PlantStepper::history_term() {
    const std::size_t k = outputs_.size();
    if (k == 0) return 0.0;
    ensure_weights(k);
    return simd::reversed_dot(std::span<const double>(weights_).subspan(1), outputs_);
}

double PlantStepper::advance(double u) {
    const double y = (u - history_term()) / denominator_;
    outputs_.push_back(y);
    return y;
}

void PlantStepper::push(double y) { outputs_.push_back(y); }

std::vector<double> simulate_terms(std::span<const double> coeffs, std::span<const double> orders,
                                   std::span<const double> input, double step) {
    PlantStepper stepper(coeffs, orders, step);
    if (input.empty()) return {};
    stepper.reserve(input.size());
    stepper.push(0.0);
    for (std::size_t k = 1; k < input.size(); ++k) stepper.advance(input[k]);
    const auto out = stepper.outputs();
    return {out.begin(), out.end()};
}

std::vector<double> simulate_plant(const FractionalPlant& plant, std::span<const double> input,
                                   const TimeGrid& grid) {
    const std::size_t samples = grid.steps() + 1;
    if (input.size() != samples) {
        throw ValidationError("input has " + std::to_string(input.size()) + " samples, grid needs " +
                              std::to_string(samples));
    }
    return simulate_terms(plant.coeffs(), plant.orders(), input, grid.step);
}

namespace {

constexpr double outer_tail_tol = 1e-10;
constexpr double accuracy_limit = 1e-6;

// t^{lambda m + mu - 1} E^{(m)}_{lambda,mu}(y t^lambda) together with a bound
// on its rounding error.
struct Epsilon {
    double value;
    double error;
};

Epsilon eps_m(double t, double y, double lambda, double mu, unsigned m) {
    const double power = lambda * m + mu - 1.0;
    const double z = y * std::pow(t, lambda);
    const fraccalc::SeriesSum s = fraccalc::ml_series(lambda, mu, z, m);
    const double scale = std::pow(t, power);
    return {scale * s.value.real(),
            scale * s.abs_sum * std::numeric_limits<double>::epsilon() * (s.terms + 1)};
}

}  // namespace

double analytic_solution(const FractionalPlant& plant, double t, std::size_t truncation) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("analytic_solution: t must be >= 0");
    if (truncation == 0) throw DomainError("analytic_solution: truncation must be positive");
    const auto& a = plant.coeffs();
    const auto& b = plant.orders();

    switch (plant.term_count()) {
        case 1:
            return std::pow(t, b[0]) / (a[0] * fraccalc::gamma(b[0] + 1.0));
        case 2: {
            if (t == 0.0) return 0.0;
            const double lambda = b[1] - b[0];
            const Epsilon e = eps_m(t, -a[0] / a[1], lambda, b[1] + 1.0, 0);
            if (e.error > accuracy_limit * std::max(1.0, std::abs(e.value))) {
                throw ConvergenceError("analytic series lost precision at t = " + std::to_string(t), 1);
            }
            return e.value / a[1];
        }
        case 3:
            break;
        default:
            throw UnsupportedError("analytic_solution: unsupported term count " +
                                   std::to_string(plant.term_count()) + " (at most 3)");
    }
    if (t == 0.0) return 0.0;

    // Three terms: the multinomial sum collapses to k_0 = m.
    const double lambda = b[2] - b[1];
    const double inner_arg = -a[1] / a[2];
    const double ratio = a[0] / a[2];
    double sum = 0.0;
    double error = 0.0;
    std::size_t small_run = 0;
    for (std::size_t m = 0; m < truncation; ++m) {
        const double md = static_cast<double>(m);
        // Step input: impulse-response kernel integrated once, mu -> mu + 1.
        const double mu = b[2] + (b[1] - b[0]) * md + 1.0;
        const Epsilon e = eps_m(t, inner_arg, lambda, mu, static_cast<unsigned>(m));
        if (m > 0 && ratio == 0.0) return sum / a[2];
        // (-1)^m (a_0/a_2)^m / m!
        const double log_coef = m == 0 ? 0.0 : md * std::log(std::abs(ratio)) - std::lgamma(md + 1.0);
        const bool negative = m % 2 == 1 && ratio > 0.0;
        const double coef = negative ? -std::exp(log_coef) : std::exp(log_coef);
        const double term = coef * e.value;
        if (!std::isfinite(term)) {
            throw ConvergenceError("analytic series overflowed at t = " + std::to_string(t), m);
        }
        sum += term;
        error += std::abs(coef) * e.error + std::abs(term) * std::numeric_limits<double>::epsilon();
        if (m >= 2 && std::abs(term) < outer_tail_tol * std::max(std::abs(sum), 1e-300)) {
            if (++small_run >= 2) {
                if (error > accuracy_limit * std::max(1.0, std::abs(sum))) {
                    throw ConvergenceError("analytic series lost precision at t = " + std::to_string(t), m);
                }
                return sum / a[2];
            }
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("analytic series did not converge within " + std::to_string(truncation) +
                               " terms at t = " + std::to_string(t),
                           truncation);
}

}  // namespace fracctl::plant
