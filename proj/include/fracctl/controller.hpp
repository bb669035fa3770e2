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

// Discrete PI^lambda D^delta position algorithm:
//   1. w*(k) = w*(k-1) + c (w(k) - w*(k-1))          (c = 0.5 by default)
//   2. e(k)  = w*(k) - y(k)
//   3. u(k)  = K e(k) + Ti T^lambda  sum_j q_j e(k-j)
//                     + Td T^-delta  sum_j d_j e(k-j)
// q_j and d_j are Grunwald-Letnikov weights of orders -lambda and delta;
// j runs over 0 .. min(k, floor(L/T)) (short memory).

#include <cstddef>
#include <span>
#include <vector>

#include "fracctl/fraccalc.hpp"

namespace fracctl::control {

struct FoPidController {
    double gain = 0.0;    // K
    double ti = 0.0;      // integration constant
    double lambda = 0.0;  // integration order, >= 0
    double td = 0.0;      // differentiation constant
    double delta = 0.0;   // differentiation order, >= 0

    void validate() const;  // DomainError on negative orders or non-finite values

    bool operator==(const FoPidController&) const = default;
};

// Output of step 3 as an affine function of the measurement:
//   u = base - gain * y.
// The closed-loop simulator uses this to resolve the algebraic loop between
// an implicit plant step and a controller without computational delay.
struct PendingStep {
    double w_star = 0.0;
    double base = 0.0;
    double gain = 0.0;

    double output(double y) const noexcept { return base - gain * y; }
};

class ControllerState {
public:
    // Throws DomainError unless sample_period > 0, memory_length > 0 and
    // filter_coefficient lies in (0, 1].
    ControllerState(const FoPidController& controller, double sample_period,
                    double memory_length = fraccalc::unbounded, double filter_coefficient = 0.5);

    const FoPidController& controller() const noexcept { return controller_; }
    double sample_period() const noexcept { return sample_period_; }
    double memory_length() const noexcept { return memory_length_; }
    double filter_coefficient() const noexcept { return filter_coefficient_; }

    double filtered_setpoint() const noexcept { return w_star_; }
    std::size_t step_count() const noexcept { return steps_; }

    // Errors e(k - j), oldest first; at most floor(L/T) + 1 entries.
    std::span<const double> error_history() const noexcept;

    const fraccalc::CoefficientTable& integral_coeffs() const noexcept { return q_; }
    const fraccalc::CoefficientTable& derivative_coeffs() const noexcept { return d_; }

    // Step 1 only: updates and returns w*.
    double filter_setpoint(double w);

    // Steps 1 and 3 evaluated without committing anything.
    PendingStep prepare(double w);

    // Commits a prepared step for the measured y(k); returns u(k).
    double commit(const PendingStep& pending, double y);

    // Steps 1-3 for measurement y and required value w; returns u(k).
    double control_step(double y, double w);

    // Empty history and w* = 0; cached coefficient tables are kept.
    void reset() noexcept;

private:
    double filter_value(double w) const noexcept;
    void ensure_weights(std::size_t count);
    void push_error(double e);

    FoPidController controller_;
    double sample_period_;
    double memory_length_;
    double filter_coefficient_;
    std::size_t memory_;  // floor(L/T), SIZE_MAX when unbounded

    double w_star_ = 0.0;
    std::size_t steps_ = 0;

    // Window [begin_, errors_.size()) of a buffer that is compacted when
    // the bounded window reaches the end.
    std::vector<double> errors_;
    std::size_t begin_ = 0;

    fraccalc::CoefficientTable q_;
    fraccalc::CoefficientTable d_;
    double integral_scale_ = 0.0;    // Ti T^lambda
    double derivative_scale_ = 0.0;  // Td T^-delta
    std::vector<double> weights_;    // integral_scale_ q_j + derivative_scale_ d_j
    std::size_t support_ = 0;        // nonzero entries of weights_, 0 if unbounded
};

}  // namespace fracctl::control
