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

// Plant identification from a measured unit-step response by minimizing
//   Q = 1/(M+1) sum_{m=0}^{M} (y^e_m - y^c_m)^2.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracctl/plant.hpp"

namespace fracctl::identify {

// Unit-step response samples on a uniform grid starting at t = 0.
struct MeasuredResponse {
    std::vector<double> times;
    std::vector<double> values;

    // ValidationError unless lengths match, there are >= 2 samples, times
    // start at 0 and are strictly increasing with uniform spacing.
    void validate() const;
    double step() const;
};

// Parameter vector layout: [a_0 .. a_n, b_0 .. b_n].
struct ParameterBound {
    double lower = 0.0;
    double upper = 0.0;
};

struct IdentProblem {
    std::size_t term_count = 0;             // n + 1
    std::vector<bool> free_mask;            // 2 * term_count flags
    std::vector<ParameterBound> bounds;     // 2 * term_count intervals
    std::vector<double> initial_guess;      // 2 * term_count values

    std::size_t parameter_count() const noexcept { return 2 * term_count; }
    void validate() const;  // DomainError for infeasible or malformed problems

    // Name of parameter i: "a0".."an", "beta0".."betan".
    std::string parameter_name(std::size_t i) const;
};

struct IdentOptions {
    std::size_t max_evaluations = 2000;
    double simplex_tolerance = 1e-6;  // diameter in bound-scaled coordinates
    double penalty_weight = 1e6;
    double order_margin = 1e-6;       // required gap between consecutive orders
};

struct ObjectiveValue {
    double q = 0.0;
    bool diverged = false;  // simulation blew up; q is +infinity
};

// Plain quadratic criterion of two equally long sequences.
double quadratic_criterion(std::span<const double> measured, std::span<const double> computed);

// Q of a candidate plant against the data, simulated on the data grid.
ObjectiveValue objective_q(const plant::FractionalPlant& candidate, const MeasuredResponse& data);

// Same, for raw parameters that may violate the plant invariants.
ObjectiveValue objective_q(std::span<const double> coeffs, std::span<const double> orders,
                           const MeasuredResponse& data);

struct IdentResult {
    plant::FractionalPlant plant;
    double q = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<double> parameters;
    std::vector<double> best_q_history;  // best penalized objective after each iteration
};

// Bounded Nelder-Mead search over the free parameters. Parameters are
// scaled to their bound widths, clamped into the bounds, and ordering
// violations pay penalty_weight * violation^2. When the budget runs out the
// best point so far is returned with converged = false.
IdentResult identify(const MeasuredResponse& data, const IdentProblem& problem, const IdentOptions& options = {});

}  // namespace fracctl::identify
