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

#include "fracctl/loopsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fracctl::loop {

double Setpoint::at(std::size_t k, double t) const {
    if (!samples.empty()) return k < samples.size() ? samples[k] : samples.back();
    return t + 1e-12 >= step_time ? amplitude : 0.0;
}

void LoopConfig::validate() const {
    grid.validate();
    controller.validate();
    if (!std::isfinite(setpoint.amplitude)) throw DomainError("setpoint amplitude must be finite");
    for (double w : setpoint.samples) {
        if (!std::isfinite(w)) throw DomainError("setpoint samples must be finite");
    }
    if (!(filter_coefficient > 0.0 && filter_coefficient <= 1.0)) {
        throw DomainError("filter coefficient must lie in (0, 1]");
    }
    if (!(memory_length > 0.0)) throw DomainError("memory length must be positive");
    if (!(divergence_bound > 0.0)) throw DomainError("divergence bound must be positive");
    if (u_min && u_max && *u_min > *u_max) throw DomainError("u_min exceeds u_max");
}

void SimulationTrace::reserve(std::size_t n) {
    for (auto* v : {&t, &w, &w_star, &e, &u, &y}) v->reserve(n);
}

namespace {

double saturate(const LoopConfig& config, double u) {
    if (config.u_min) u = std::max(u, *config.u_min);
    if (config.u_max) u = std::min(u, *config.u_max);
    return u;
}

void record(SimulationTrace& trace, double t, double w, double w_star, double y, double u) {
    trace.t.push_back(t);
    trace.w.push_back(w);
    trace.w_star.push_back(w_star);
    trace.e.push_back(w_star - y);
    trace.u.push_back(u);
    trace.y.push_back(y);
}

}  // namespace

SimulationTrace simulate_closed_loop(const LoopConfig& config) {
    config.validate();
    const std::size_t steps = config.grid.steps();
    const double h = config.grid.step;

    control::ControllerState controller(config.controller, h, config.memory_length, config.filter_coefficient);
    plant::PlantStepper plant(config.plant, h);
    plant.reserve(steps + 2);

    SimulationTrace trace;
    trace.reserve(steps + 1);

    const auto guard = [&](double y, double u, std::size_t k) {
        if (!std::isfinite(y) || !std::isfinite(u) || std::abs(y) > config.divergence_bound ||
            std::abs(u) > config.divergence_bound) {
            throw LoopDivergedError("loop diverged at t = " + std::to_string(config.grid.time(k)),
                                    std::move(trace));
        }
    };

    double pending_u = 0.0;  // delayed mode: input for the next plant step
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = config.grid.time(k);
        const double w = config.setpoint.at(k, t);
        const control::PendingStep step = controller.prepare(w);

        double y = 0.0;
        double u = 0.0;
        if (k == 0) {
            plant.push(0.0);
            u = saturate(config, controller.commit(step, 0.0));
        } else if (config.one_step_delay) {
            y = plant.advance(pending_u);
            u = saturate(config, controller.commit(step, y));
        } else {
            // u = base - g y and y = (u - H) / D  =>  y = (base - H) / (D + g)
            const double history = plant.history_term();
            const double denom = plant.denominator() + step.gain;
            y = (step.base - history) / denom;
            u = step.output(y);
            const double clipped = saturate(config, u);
            if (clipped != u) {
                u = clipped;
                y = (u - history) / plant.denominator();
            }
            plant.push(y);
            controller.commit(step, y);
        }
        pending_u = u;
        record(trace, t, w, step.w_star, y, u);
        guard(y, u, k);
    }
    return trace;
}

PerformanceMetrics compute_metrics(const SimulationTrace& trace, double settle_band) {
    if (trace.size() == 0) throw DomainError("compute_metrics: empty trace");
    if (!(settle_band > 0.0)) throw DomainError("compute_metrics: settle band must be positive");
    const std::size_t n = trace.size();
    const std::size_t tail = std::max<std::size_t>(1, n / 20);
    const double y_final =
        std::accumulate(trace.y.end() - static_cast<std::ptrdiff_t>(tail), trace.y.end(), 0.0) /
        static_cast<double>(tail);
    const double w_final = trace.w.back();

    PerformanceMetrics m;
    m.final_value = y_final;
    if (w_final != 0.0) {
        m.static_deviation = 100.0 * std::abs(w_final - y_final) / std::abs(w_final);
    } else {
        m.static_deviation = 100.0 * std::abs(y_final);
        m.deviation_absolute = true;
    }

    if (y_final != 0.0) {
        const double peak = y_final > 0.0 ? *std::max_element(trace.y.begin(), trace.y.end())
                                          : *std::min_element(trace.y.begin(), trace.y.end());
        m.overshoot = 100.0 * std::max(0.0, (peak - y_final) / y_final);
    }

    std::size_t step_index = 0;
    for (std::size_t k = 1; k < n; ++k) {
        if (trace.w[k] != trace.w[k - 1]) step_index = k;
    }
    const double band = settle_band / 100.0 * std::abs(y_final);
    std::size_t settled = step_index;
    for (std::size_t k = n; k-- > step_index;) {
        if (std::abs(trace.y[k] - y_final) > band) {
            settled = std::min(k + 1, n - 1);
            break;
        }
    }
    m.control_time = trace.t[settled] - trace.t[step_index];
    return m;
}

}  // namespace fracctl::loop
