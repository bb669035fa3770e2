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

// Numerical fractional calculus: Grunwald-Letnikov weights and
// differintegration, gamma, and the two-parameter Mittag-Leffler function.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace fracctl::fraccalc {

// Sentinel for an unbounded memory length (full history).
inline constexpr double unbounded = std::numeric_limits<double>::infinity();

inline constexpr double default_series_tol = 1e-15;
inline constexpr std::size_t default_series_cap = 10000;

struct DifferintegralSpec {
    double order = 0.0;           // alpha; negative orders integrate
    double step = 0.0;            // h [s]
    double memory_length = unbounded;  // L [s]

    // Throws DomainError unless step > 0 and memory_length > 0.
    void validate() const;
};

// Number of history samples N = floor(L/h) kept by the short-memory rule,
// or SIZE_MAX for unbounded memory.
std::size_t memory_samples(double memory_length, double step);

// Grunwald-Letnikov weights b_j = (-1)^j binom(order, j), built with
//   b_0 = 1,  b_j = (1 - (1 + order) / j) * b_{j-1}.
struct CoefficientTable {
    double order = 0.0;
    std::vector<double> values;

    // Appends terms of the recurrence until values.size() == count + 1.
    void extend_to(std::size_t count);

    // Length with trailing exact zeros removed. Non-negative integer orders
    // have finite support; everything else returns values.size().
    std::size_t support() const noexcept;
};

// b_0 ... b_count (count + 1 values).
CoefficientTable binomial_coeffs(double order, std::size_t count);

// out[k] = h^-order * sum_{j=0}^{N_k} b_j * signal[k - j],
// N_k = min(k, floor(L/h)); samples before t = 0 are taken as zero.
std::vector<double> gl_differint(std::span<const double> signal, const DifferintegralSpec& spec);

// Euler gamma. Throws DomainError at the poles x = 0, -1, -2, ...
double gamma(double x);

// Raw partial-sum evaluation of
//   E^{(n)}_{alpha,beta}(z) = sum_j (j+n)!/j! z^j / Gamma(alpha j + alpha n + beta).
// `abs_sum` accumulates |term| so callers can bound cancellation error.
// Throws ConvergenceError when the term cap is hit or a term overflows.
struct SeriesSum {
    std::complex<double> value;
    std::size_t terms = 0;
    double abs_sum = 0.0;
};
SeriesSum ml_series(double alpha, double beta, std::complex<double> z, unsigned derivative,
                    double tol = default_series_tol, std::size_t max_terms = default_series_cap);

// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
//
// Direct summation, stopped once |term| < tol * |partial sum|. There is no
// asymptotic branch: arguments large enough that the alternating series
// loses more than 8 significant digits to cancellation raise
// ConvergenceError rather than returning a wrong value.
std::complex<double> mittag_leffler(double alpha, double beta, std::complex<double> z,
                                    double tol = default_series_tol);

// n-th derivative of E_{alpha,beta} with respect to z; same error contract.
std::complex<double> ml_derivative(double alpha, double beta, std::complex<double> z, unsigned n,
                                   double tol = default_series_tol);

}  // namespace fracctl::fraccalc
