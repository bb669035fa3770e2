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

#include "fracctl/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracctl/error.hpp"
#include "fracctl/simd/kernels.hpp"

namespace fracctl::fraccalc {

void DifferintegralSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("differintegral step must be positive and finite");
    }
    if (!(memory_length > 0.0)) {
        throw DomainError("memory length must be positive");
    }
    if (!std::isfinite(order)) {
        throw DomainError("differintegral order must be finite");
    }
}

std::size_t memory_samples(double memory_length, double step) {
    if (!(step > 0.0)) throw DomainError("step must be positive");
    if (!(memory_length > 0.0)) throw DomainError("memory length must be positive");
    if (std::isinf(memory_length)) return std::numeric_limits<std::size_t>::max();
    // L/h is usually meant to be an integer; absorb representation error.
    const double ratio = memory_length / step;
    const double n = std::floor(ratio * (1.0 + 1e-12));
    if (n >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
        return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(n);
}

void CoefficientTable::extend_to(std::size_t count) {
    if (values.empty()) values.push_back(1.0);
    values.reserve(count + 1);
    for (std::size_t j = values.size(); j <= count; ++j) {
        values.push_back((1.0 - (1.0 + order) / static_cast<double>(j)) * values.back());
    }
}

std::size_t CoefficientTable::support() const noexcept {
    std::size_t n = values.size();
    while (n > 1 && values[n - 1] == 0.0) --n;
    return n;
}

CoefficientTable binomial_coeffs(double order, std::size_t count) {
    CoefficientTable table{order, {}};
    table.extend_to(count);
    return table;
}

std::vector<double> gl_differint(std::span<const double> signal, const DifferintegralSpec& spec) {
    spec.validate();
    std::vector<double> out(signal.size());
    if (signal.empty()) return out;

    const std::size_t memory = memory_samples(spec.memory_length, spec.step);
    const std::size_t last_j = std::min(signal.size() - 1, memory);
    const CoefficientTable table = binomial_coeffs(spec.order, last_j);
    const std::span<const double> weights{table.values.data(), table.support()};
    const double scale = std::pow(spec.step, -spec.order);

    for (std::size_t k = 0; k < signal.size(); ++k) {
        const std::size_t n = std::min(k, memory) + 1;
        out[k] = scale * simd::reversed_dot(weights.first(std::min(n, weights.size())),
                                            signal.first(k + 1));
    }
    return out;
}

double gamma(double x) {
    if (std::isnan(x)) throw DomainError("gamma: NaN argument");
    if (x <= 0.0 && x == std::floor(x)) {
        throw DomainError("gamma: pole at non-positive integer " + std::to_string(x));
    }
    return std::tgamma(x);
}

namespace {

void check_series_args(double alpha, double beta, double tol) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("Mittag-Leffler: alpha must be > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("Mittag-Leffler: beta must be > 0");
    if (!(tol > 0.0)) throw DomainError("Mittag-Leffler: tolerance must be > 0");
}

// z^j * ratio / Gamma(arg) for arg > 0, with the power supplied in log-polar form so that
// large j never overflows an intermediate.
std::complex<double> series_term(std::complex<double> z, double log_abs_z, std::size_t j, double log_ratio,
                                 double gamma_arg) {
    const double mag = std::exp(static_cast<double>(j) * log_abs_z + log_ratio - std::lgamma(gamma_arg));
    if (z.imag() == 0.0) {
        // Keep real arguments real; polar() would leave sin(j*pi) residue.
        return (z.real() < 0.0 && j % 2 == 1) ? -mag : mag;
    }
    return std::polar(mag, static_cast<double>(j) * std::arg(z));
}

}  // namespace

SeriesSum ml_series(double alpha, double beta, std::complex<double> z, unsigned derivative,
                    double tol, std::size_t max_terms) {
    check_series_args(alpha, beta, tol);
    const double n = derivative;
    SeriesSum result;

    if (z == 0.0) {
        // Only j = 0 survives: n! / Gamma(alpha n + beta).
        const double v = std::exp(std::lgamma(n + 1.0) - std::lgamma(alpha * n + beta));
        result.value = v;
        result.terms = 1;
        result.abs_sum = std::abs(v);
        return result;
    }

    const double log_abs_z = std::log(std::abs(z));
    // log((j+n)!/j!), advanced as a rising product.
    double log_ratio = std::lgamma(n + 1.0);
    std::size_t small_run = 0;
    for (std::size_t j = 0; j < max_terms; ++j) {
        const double jd = static_cast<double>(j);
        if (j > 0) log_ratio += std::log((jd + n) / jd);
        const std::complex<double> term =
            series_term(z, log_abs_z, j, log_ratio, alpha * (jd + n) + beta);
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
            throw ConvergenceError("Mittag-Leffler series did not converge: term overflow after " +
                                       std::to_string(j) + " terms",
                                   j);
        }
        result.value += term;
        result.abs_sum += std::abs(term);
        result.terms = j + 1;
        // Terms stop growing once Gamma outpaces the power of z, so two
        // consecutive negligible terms mark the tail.
        if (std::abs(term) < tol * std::abs(result.value)) {
            if (++small_run >= 2) return result;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("Mittag-Leffler series did not converge within " + std::to_string(max_terms) +
                               " terms",
                           max_terms);
}

namespace {

constexpr double cancellation_limit = 1e-8;

std::complex<double> guarded(const SeriesSum& s) {
    const double rounding = s.abs_sum * std::numeric_limits<double>::epsilon();
    if (rounding > cancellation_limit * std::abs(s.value)) {
        throw ConvergenceError(
            "Mittag-Leffler series did not converge: cancellation leaves fewer than 8 significant digits",
            s.terms);
    }
    return s.value;
}

}  // namespace

std::complex<double> mittag_leffler(double alpha, double beta, std::complex<double> z, double tol) {
    return guarded(ml_series(alpha, beta, z, 0, tol));
}

std::complex<double> ml_derivative(double alpha, double beta, std::complex<double> z, unsigned n,
                                   double tol) {
    return guarded(ml_series(alpha, beta, z, n, tol));
}

}  // namespace fracctl::fraccalc
