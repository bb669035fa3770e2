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

#pragma once

// n-term fractional-order plant
//   a_n D^{b_n} y + ... + a_1 D^{b_1} y + a_0 D^{b_0} y = u
// with zero initial conditions.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracctl/fraccalc.hpp"

namespace fracctl::plant {

class FractionalPlant {
public:
    // Throws ValidationError unless the lengths match and are >= 1,
    // b_0 >= 0, orders strictly increase, a_n != 0 and every value is finite.
    FractionalPlant(std::vector<double> coeffs, std::vector<double> orders);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    const std::vector<double>& orders() const noexcept { return orders_; }
    std::size_t term_count() const noexcept { return coeffs_.size(); }

    bool operator==(const FractionalPlant&) const = default;

private:
    std::vector<double> coeffs_;
    std::vector<double> orders_;
};

FractionalPlant validate_plant(std::vector<double> coeffs, std::vector<double> orders);

struct TimeGrid {
    double step = 0.01;     // h [s]
    double horizon = 10.0;  // T_final [s]

    void validate() const;  // DomainError unless 0 < step <= horizon
    // Number of steps after t = 0; samples are k = 0 .. steps().
    std::size_t steps() const;
    double time(std::size_t k) const noexcept { return static_cast<double>(k) * step; }
};

// Incremental solver for the discretized FODE
//   y(k) = (u(k) - sum_i a_i h^{-b_i} sum_{j>=1} b^{(i)}_j y(k-j)) / sum_i a_i h^{-b_i}.
// The per-term weights are folded into one table so each step costs a
// single reversed dot product over the output history.
//
// Works on raw coefficient/order spans so that optimizers can evaluate
// candidates that violate the ordering invariant.
class PlantStepper {
public:
    PlantStepper(std::span<const double> coeffs, std::span<const double> orders, double step);
    PlantStepper(const FractionalPlant& plant, double step);

    // sum_i a_i h^{-b_i}; the coefficient of y(k) in the step equation.
    double denominator() const noexcept { return denominator_; }

    // History part of the step equation for the next sample k = size().
    double history_term();

    // Solves the step equation for input u, appends y(k) and returns it.
    double advance(double u);

    // Appends an externally computed y(k), e.g. from a closed-loop solve.
    void push(double y);

    std::span<const double> outputs() const noexcept { return outputs_; }
    std::size_t size() const noexcept { return outputs_.size(); }
    void reserve(std::size_t samples);

private:
    void ensure_weights(std::size_t count);

    std::vector<fraccalc::CoefficientTable> tables_;
    std::vector<double> scales_;   // a_i h^{-b_i}
    std::vector<double> weights_;  // weights_[j] = sum_i scales_[i] b^{(i)}_j, j >= 1
    std::optional<std::size_t> support_;  // set when every order is a non-negative integer
    double denominator_ = 0.0;
    std::vector<double> outputs_;
};

// Step-by-step response to `input` (one sample per grid point, input[0] at
// t = 0). y(0) = 0; y(1) onwards follow from the recurrence.
std::vector<double> simulate_plant(const FractionalPlant& plant, std::span<const double> input,
                                   const TimeGrid& grid);

// Same recurrence on unvalidated coefficients. Throws DomainError if the
// step-equation denominator vanishes.
std::vector<double> simulate_terms(std::span<const double> coeffs, std::span<const double> orders,
                                   std::span<const double> input, double step);

// Unit-step response from the closed-form multinomial Mittag-Leffler series,
// for plants with at most three terms. A single-term plant gives
// t^b0 / (a_0 Gamma(b0 + 1)), which is 1/a_0 for a static plant.
//
// Throws UnsupportedError for more than three terms and ConvergenceError if
// the outer series has not settled after `truncation` terms or lost
// accuracy to cancellation at this t.
double analytic_solution(const FractionalPlant& plant, double t, std::size_t truncation = 50);

}  // namespace fracctl::plant
