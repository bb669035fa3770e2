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

// Unity-feedback loop: PI^lambda D^delta controller in series with a
// fractional plant, simulated in the time domain.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracctl/controller.hpp"
#include "fracctl/error.hpp"
#include "fracctl/fraccalc.hpp"
#include "fracctl/plant.hpp"

namespace fracctl::loop {

// Required value w(t): explicit samples when given, otherwise a step of
// `amplitude` at `step_time`.
struct Setpoint {
    double amplitude = 1.0;
    double step_time = 0.0;
    std::vector<double> samples;

    double at(std::size_t k, double t) const;
};

struct LoopConfig {
    plant::FractionalPlant plant;
    control::FoPidController controller;
    plant::TimeGrid grid;
    double memory_length = fraccalc::unbounded;  // controller short memory L [s]
    Setpoint setpoint;
    double filter_coefficient = 0.5;
    // false: u(k) and y(k) are solved together (no computational delay).
    // true: u(k) drives the plant step that produces y(k + 1).
    bool one_step_delay = false;
    double divergence_bound = 1e6;
    std::optional<double> u_min;
    std::optional<double> u_max;

    void validate() const;
};

struct SimulationTrace {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<double> w_star;
    std::vector<double> e;
    std::vector<double> u;
    std::vector<double> y;

    std::size_t size() const noexcept { return t.size(); }
    void reserve(std::size_t n);

    bool operator==(const SimulationTrace&) const = default;
};

class LoopDivergedError : public Error {
public:
    LoopDivergedError(const std::string& what, SimulationTrace partial)
        : Error(ErrorKind::divergence, what), partial_(std::move(partial)) {}

    const SimulationTrace& partial_trace() const noexcept { return partial_; }

private:
    SimulationTrace partial_;
};

// Samples k = 0 .. grid.steps(), y(0) = 0. Throws LoopDivergedError once
// |y| or |u| exceeds config.divergence_bound or turns non-finite.
SimulationTrace simulate_closed_loop(const LoopConfig& config);

struct PerformanceMetrics {
    double static_deviation = 0.0;  // E_t [%]
    double control_time = 0.0;      // T_r [s]
    double overshoot = 0.0;         // P_r [%]
    double final_value = 0.0;       // y_final used for the above
    // Set when w_final = 0 and E_t holds 100 |y_final| instead of a ratio.
    bool deviation_absolute = false;
};

inline constexpr double default_settle_band = 2.0;  // percent

// y_final is the mean of the last 5% of samples. T_r counts from the last
// setpoint change to the first sample after which y stays within
// +-settle_band % of y_final.
PerformanceMetrics compute_metrics(const SimulationTrace& trace, double settle_band = default_settle_band);

}  // namespace fracctl::loop
