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

#include "fracctl/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracctl/error.hpp"
#include "fracctl/simd/kernels.hpp"

namespace fracctl::control {

void FoPidController::validate() const {
    for (double v : {gain, ti, lambda, td, delta}) {
        if (!std::isfinite(v)) throw DomainError("controller parameters must be finite");
    }
    if (lambda < 0.0) throw DomainError("controller: lambda must be >= 0");
    if (delta < 0.0) throw DomainError("controller: delta must be >= 0");
}

namespace {

bool is_nonneg_integer(double x) { return x >= 0.0 && x == std::floor(x); }

}  // namespace

ControllerState::ControllerState(const FoPidController& controller, double sample_period,
                                 double memory_length, double filter_coefficient)
    : controller_(controller),
      sample_period_(sample_period),
      memory_length_(memory_length),
      filter_coefficient_(filter_coefficient),
      memory_(0),
      q_{-controller.lambda, {1.0}},
      d_{controller.delta, {1.0}} {
    controller_.validate();
    if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
        throw DomainError("controller: sample period must be positive");
    }
    if (!(filter_coefficient > 0.0 && filter_coefficient <= 1.0)) {
        throw DomainError("controller: filter coefficient must lie in (0, 1]");
    }
    memory_ = fraccalc::memory_samples(memory_length, sample_period);

    // A zero constant switches its channel off whatever the order.
    if (controller_.ti != 0.0) integral_scale_ = controller_.ti * std::pow(sample_period, controller_.lambda);
    if (controller_.td != 0.0) derivative_scale_ = controller_.td * std::pow(sample_period, -controller_.delta);

    // Channels whose GL order is a non-negative integer have finite support;
    // q has order -lambda, so only lambda = 0 qualifies there.
    const auto channel_support = [](double scale, double order) -> std::size_t {
        if (scale == 0.0) return 1;
        return is_nonneg_integer(order) ? static_cast<std::size_t>(order) + 1 : 0;
    };
    const std::size_t qs = channel_support(integral_scale_, -controller_.lambda);
    const std::size_t ds = channel_support(derivative_scale_, controller_.delta);
    support_ = (qs == 0 || ds == 0) ? 0 : std::max(qs, ds);
    weights_.assign(1, integral_scale_ + derivative_scale_);
}

void ControllerState::ensure_weights(std::size_t count) {
    if (support_ != 0) count = std::min(count, support_);
    if (count <= weights_.size()) return;
    const std::size_t have = weights_.size();
    std::size_t target = std::max(count, 2 * have);
    if (support_ != 0) target = std::min(target, support_);
    if (memory_ != std::numeric_limits<std::size_t>::max()) target = std::min(target, memory_ + 1);
    target = std::max(target, count);
    weights_.resize(target, 0.0);
    if (integral_scale_ != 0.0) {
        q_.extend_to(target - 1);
        simd::axpy(integral_scale_, std::span<const double>(q_.values).subspan(have, target - have),
                   std::span<double>(weights_).subspan(have));
    }
    if (derivative_scale_ != 0.0) {
        d_.extend_to(target - 1);
        simd::axpy(derivative_scale_, std::span<const double>(d_.values).subspan(have, target - have),
                   std::span<double>(weights_).subspan(have));
    }
}

std::span<const double> ControllerState::error_history() const noexcept {
    return std::span<const double>(errors_).subspan(begin_);
}

double ControllerState::filter_value(double w) const noexcept {
    return w_star_ + filter_coefficient_ * (w - w_star_);
}

double ControllerState::filter_setpoint(double w) {
    w_star_ = filter_value(w);
    return w_star_;
}

PendingStep ControllerState::prepare(double w) {
    PendingStep step;
    step.w_star = filter_value(w);

    // Window of past errors used alongside e(k): j = 1 .. min(k, memory).
    const std::span<const double> past = error_history();
    const std::size_t window = std::min(steps_, memory_);
    const std::size_t used = std::min(window, past.size());
    ensure_weights(used + 1);

    const double instantaneous = controller_.gain + weights_[0];
    double history = 0.0;
    if (used > 0 && weights_.size() > 1) {
        history = simd::reversed_dot(std::span<const double>(weights_).subspan(1), past.last(used));
    }
    step.gain = instantaneous;
    step.base = instantaneous * step.w_star + history;
    return step;
}

void ControllerState::push_error(double e) {
    if (memory_ == std::numeric_limits<std::size_t>::max()) {
        errors_.push_back(e);
        return;
    }
    // Keep at most memory_ + 1 errors: e(k) and memory_ predecessors.
    const std::size_t capacity = memory_ + 1;
    if (errors_.size() - begin_ == capacity) ++begin_;
    if (errors_.size() == errors_.capacity() && begin_ > 0) {
        errors_.erase(errors_.begin(), errors_.begin() + static_cast<std::ptrdiff_t>(begin_));
        begin_ = 0;
    }
    if (errors_.capacity() < 2 * capacity) errors_.reserve(2 * capacity);
    errors_.push_back(e);
}

double ControllerState::commit(const PendingStep& pending, double y) {
    const double u = pending.output(y);
    w_star_ = pending.w_star;
    push_error(pending.w_star - y);
    ++steps_;
    return u;
}

double ControllerState::control_step(double y, double w) { return commit(prepare(w), y); }

void ControllerState::reset() noexcept {
    w_star_ = 0.0;
    steps_ = 0;
    errors_.clear();
    begin_ = 0;
}

}  // namespace fracctl::control
