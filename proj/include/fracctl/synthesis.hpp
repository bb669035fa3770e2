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

// Dominant-roots design of fractional PI^lambda D^delta controllers.
//
// The closed loop of plant G_s and controller G_r has the characteristic
// function
//   F(p) = sum_k a_k p^{b_k} + K + Ti p^{-lambda} + Td p^{delta},
// whose zeros are the closed-loop poles. All non-integer powers use the
// principal branch, Arg p in (-pi, pi].

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracctl/controller.hpp"
#include "fracctl/error.hpp"
#include "fracctl/plant.hpp"

namespace fracctl::synthesis {

using complex = std::complex<double>;

// Stability measure S_t = r and damping measure T_l = r / omega of the
// required pole pair -r +- i omega.
struct DominantPoleSpec {
    double stability_measure = 0.0;
    double damping_measure = 0.0;

    complex upper_pole() const noexcept { return {-stability_measure, stability_measure / damping_measure}; }
    complex lower_pole() const noexcept { return std::conj(upper_pole()); }
};

// Throws DomainError ("unstable specification") for S_t <= 0 and for T_l <= 0.
DominantPoleSpec poles_from_measures(double stability_measure, double damping_measure);

// Smallest K meeting a static deviation of E_t percent: 100 / E_t - a_0.
double min_gain(double static_deviation, double a0);

// F(p). Throws DomainError at p = 0 when a negative power would be taken.
complex char_residual(const plant::FractionalPlant& plant, const control::FoPidController& controller, complex p);

// dF/dp, same branch.
complex char_derivative(const plant::FractionalPlant& plant, const control::FoPidController& controller,
                        complex p);

enum class SynthesisMode {
    pd_delta,          // solve Td, delta; Ti = 0
    pi_lambda,         // solve Ti, lambda; Td = 0
    pid_fixed_lambda,  // Ti, lambda fixed by the caller; solve Td, delta
};

std::string to_string(SynthesisMode mode);
SynthesisMode parse_mode(const std::string& text);  // DomainError on unknown names

struct RootRegion {
    double re_min = -10.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 10.0;

    void validate() const;
    bool contains(complex p, double slack = 0.0) const noexcept;
};

// real in [-20 S_t, 0], imag in [0, 20 S_t / T_l].
RootRegion default_region(const DominantPoleSpec& spec);

inline constexpr std::size_t default_grid_density = 40;

struct SynthesisOptions {
    double tol = 1e-10;
    std::size_t max_iterations = 100;
    double fixed_ti = 0.0;      // pid_fixed_lambda only
    double fixed_lambda = 0.0;  // pid_fixed_lambda only
    std::optional<RootRegion> region;  // dominance check; default_region() if unset
    std::size_t grid_density = default_grid_density;
};

struct SynthesisResult {
    control::FoPidController controller;
    std::array<double, 2> residual{};  // |F| at the upper and lower target poles
    std::size_t iterations = 0;
    bool dominance_verified = false;
    std::optional<complex> rightmost_root;
};

class SynthesisError : public Error {
public:
    SynthesisError(ErrorKind kind, const std::string& what, control::FoPidController last_iterate,
                   std::size_t iterations)
        : Error(kind, what), last_(last_iterate), iterations_(iterations) {}

    const control::FoPidController& last_iterate() const noexcept { return last_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    control::FoPidController last_;
    std::size_t iterations_;
};

// Solves F(p_1) = 0 for the two free parameters of `mode` by damped Newton
// iteration on (Re F, Im F); F(p_2) = conj F(p_1) follows for real
// parameters. Starts from order 1 and the constant that best satisfies the
// integer-order equation, falling back to a grid of starting points.
//
// Throws SynthesisError (convergence) when no start converges, or
// (non_physical) when the only solutions have an order outside (0, 2] or a
// non-positive constant.
SynthesisResult solve_controller_params(const plant::FractionalPlant& plant, double gain,
                                        const DominantPoleSpec& spec, SynthesisMode mode,
                                        const SynthesisOptions& options = {});

// Zeros of F in `region` (upper half-plane part) found by Newton iteration
// from a grid_density x grid_density grid of seeds. Conjugates of complex
// roots are appended; the result is deduplicated and sorted by real part,
// rightmost first.
std::vector<complex> find_dominant_roots(const plant::FractionalPlant& plant,
                                         const control::FoPidController& controller, const RootRegion& region,
                                         std::size_t grid_density = default_grid_density);

struct StabilityReport {
    bool stable = false;
    std::optional<complex> rightmost_root;
};

// Stable iff no root with Re p >= 0 is found in `region`, which has to
// reach Re p = 0.
StabilityReport verify_stability(const plant::FractionalPlant& plant, const control::FoPidController& controller,
                                 const RootRegion& region, std::size_t grid_density = default_grid_density);

}  // namespace fracctl::synthesis
