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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fracctl/synthesis.hpp"
#include "support/oracles.hpp"

namespace fracctl::synthesis {
namespace {

using control::FoPidController;
using plant::FractionalPlant;

FractionalPlant integer_plant() { return FractionalPlant({1.0, 0.2313, 0.7414}, {0.0, 1.0, 2.0}); }
FractionalPlant fractional_plant() { return FractionalPlant({1.0, 0.5, 0.8}, {0.0, 0.9, 2.2}); }
const FoPidController integer_pd{20.5, 0.0, 0.0, 2.7343, 1.0};
const FoPidController fractional_pd{20.5, 0.0, 0.0, 5.79, 0.95};

RootRegion symmetric_region(const DominantPoleSpec& spec) {
    RootRegion r = default_region(spec);
    r.re_max = -r.re_min;
    return r;
}

TEST(Poles, FromMeasures) {
    const auto unit = poles_from_measures(1.0, 1.0);
    EXPECT_EQ(unit.upper_pole(), complex(-1.0, 1.0));
    EXPECT_EQ(unit.lower_pole(), complex(-1.0, -1.0));
    const auto design = poles_from_measures(2.0, 0.4);
    EXPECT_DOUBLE_EQ(design.upper_pole().real(), -2.0);
    EXPECT_DOUBLE_EQ(design.upper_pole().imag(), 5.0);
}

TEST(Poles, RejectsBadMeasures) {
    try {
        poles_from_measures(0.0, 1.0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("unstable specification"), std::string::npos);
    }
    EXPECT_THROW(poles_from_measures(-1.0, 1.0), DomainError);
    EXPECT_THROW(poles_from_measures(1.0, 0.0), DomainError);
}

TEST(MinGain, Examples) {
    EXPECT_DOUBLE_EQ(min_gain(5.0, 1.0), 19.0);
    EXPECT_DOUBLE_EQ(min_gain(100.0, 1.0), 0.0);
    EXPECT_NEAR(min_gain(100.0 / 21.5, 1.0), 20.5, 1e-12);
    EXPECT_THROW(min_gain(0.0, 1.0), DomainError);
}

TEST(CharResidual, StaticPlantIsConstant) {
    const FractionalPlant p({3.0}, {0.0});
    for (complex z : {complex(1, 2), complex(-4, 0.5), complex(0.1, -7)}) {
        const complex f = char_residual(p, {2.0, 0, 0, 0, 0}, z);
        EXPECT_NEAR(f.real(), 5.0, 1e-15);
        EXPECT_NEAR(f.imag(), 0.0, 1e-15);
    }
}

TEST(CharResidual, IntegerPdNearTargetPole) {
    EXPECT_LT(std::abs(char_residual(integer_plant(), integer_pd, {-2.0, 5.0})), 0.1);
}

TEST(CharResidual, PoleAtOriginRejected) {
    EXPECT_THROW(char_residual(integer_plant(), {1.0, 1.0, 0.5, 0.0, 0.0}, {0.0, 0.0}), DomainError);
}

TEST(CharResidual, ConjugateClosure) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-10.0, 10.0), order(0.05, 1.9), c(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const FoPidController ctrl{c(rng), c(rng), order(rng), c(rng), order(rng)};
        complex z(coord(rng), coord(rng));
        if (z.imag() == 0.0) continue;
        const complex a = char_residual(fractional_plant(), ctrl, z);
        const complex b = char_residual(fractional_plant(), ctrl, std::conj(z));
        EXPECT_NEAR(a.real(), b.real(), 1e-12 * std::abs(a));
        EXPECT_NEAR(a.imag(), -b.imag(), 1e-12 * std::abs(a));
    }
}

TEST(CharDerivative, MatchesFiniteDifference) {
    const FoPidController ctrl{2.0, 1.3, 0.6, 0.7, 0.8};
    const complex z(-1.5, 3.0);
    const double h = 1e-6;
    const complex fd = (char_residual(fractional_plant(), ctrl, z + h) - char_residual(fractional_plant(), ctrl, z - h)) /
                       (2.0 * h);
    const complex d = char_derivative(fractional_plant(), ctrl, z);
    EXPECT_LT(std::abs(d - fd), 1e-6 * std::abs(d));
}

TEST(Modes, RoundTripNames) {
    for (auto m : {SynthesisMode::pd_delta, SynthesisMode::pi_lambda, SynthesisMode::pid_fixed_lambda}) {
        EXPECT_EQ(parse_mode(to_string(m)), m);
    }
    EXPECT_EQ(to_string(SynthesisMode::pd_delta), "PD_delta");
    EXPECT_THROW(parse_mode("PID"), DomainError);
}

TEST(Solve, IntegerPlantRecoversClassicalPd) {
    const auto r = solve_controller_params(integer_plant(), 20.5, poles_from_measures(2.0, 0.4), SynthesisMode::pd_delta);
    EXPECT_NEAR(r.controller.td, 2.7343, 2.7343 * 0.001);
    EXPECT_NEAR(r.controller.delta, 1.0, 1e-3);
    EXPECT_EQ(r.controller.gain, 20.5);
    EXPECT_EQ(r.controller.ti, 0.0);
    EXPECT_LT(r.residual[0], 1e-10);
    EXPECT_LT(r.residual[1], 1e-10);
    EXPECT_TRUE(r.dominance_verified);
}

TEST(Solve, FractionalPlantMatchesReferenceDesign) {
    const auto spec = poles_from_measures(2.0, 0.4);
    const auto r = solve_controller_params(fractional_plant(), 20.5, spec, SynthesisMode::pd_delta);
    EXPECT_NEAR(r.controller.td, 5.79, 5.79 * 0.02);
    EXPECT_NEAR(r.controller.delta, 0.95, 0.95 * 0.02);
    EXPECT_LT(std::abs(char_residual(fractional_plant(), r.controller, spec.upper_pole())), 1e-6);
    EXPECT_LT(std::abs(char_residual(fractional_plant(), r.controller, spec.lower_pole())), 1e-6);
    EXPECT_TRUE(r.dominance_verified);
}

// Grid-search oracle for the two-term example: minimize
// |2 + Td p^delta + p| over (Td, delta) in (0, 10] x (0, 2].
TEST(Solve, TwoTermAgreesWithGridSearch) {
    const FractionalPlant p({1.0, 1.0}, {0.0, 1.0});
    const auto spec = poles_from_measures(2.0, 1.0);
    const complex p1 = spec.upper_pole();
    const auto r = solve_controller_params(p, 1.0, spec, SynthesisMode::pd_delta);
    EXPECT_LT(r.residual[0], 1e-10);
    const auto best = testing::grid_minimize(
        [&](double td, double delta) {
            return std::abs(2.0 + td * std::exp(delta * std::log(p1)) + p1);
        },
        1e-3, 10.0, 1e-3, 2.0);
    EXPECT_NEAR(r.controller.td, best[0], 1e-4);
    EXPECT_NEAR(r.controller.delta, best[1], 1e-4);
    EXPECT_NEAR(r.controller.td, 0.25, 1e-8);
    EXPECT_NEAR(r.controller.delta, 2.0, 1e-8);
}

TEST(Solve, PiLambdaSatisfiesTargetPole) {
    const FractionalPlant p({1.0, 1.0}, {0.0, 1.0});
    const auto spec = poles_from_measures(1.0, 2.0);
    try {
        const auto r = solve_controller_params(p, 1.0, spec, SynthesisMode::pi_lambda);
        EXPECT_GT(r.controller.ti, 0.0);
        EXPECT_GT(r.controller.lambda, 0.0);
        EXPECT_LE(r.controller.lambda, 2.0);
        EXPECT_LT(std::abs(char_residual(p, r.controller, spec.upper_pole())), 1e-8);
    } catch (const SynthesisError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_physical);
    }
}

TEST(Solve, FixedLambdaKeepsIntegralPart) {
    SynthesisOptions options;
    options.fixed_ti = 0.5;
    options.fixed_lambda = 0.5;
    const auto spec = poles_from_measures(2.0, 0.4);
    const auto r = solve_controller_params(fractional_plant(), 20.5, spec, SynthesisMode::pid_fixed_lambda, options);
    EXPECT_EQ(r.controller.ti, 0.5);
    EXPECT_EQ(r.controller.lambda, 0.5);
    EXPECT_LT(std::abs(char_residual(fractional_plant(), r.controller, spec.upper_pole())), 1e-8);
}

// Integer consistency: pole-place a classical PD on random integer plants and
// ask the solver to find it again.
TEST(Solve, IntegerConsistencyProperty) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coef(0.2, 3.0), td(0.2, 5.0), gain(1.0, 30.0);
    int checked = 0;
    for (int i = 0; i < 40 && checked < 20; ++i) {
        const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng), k = gain(rng), d = td(rng);
        const auto roots = testing::quadratic_roots(a2, a1 + d, a0 + k);
        if (roots[0].imag() <= 1e-3) continue;  // need a complex pair
        const complex pole = roots[0].imag() > 0 ? roots[0] : roots[1];
        const DominantPoleSpec spec{-pole.real(), -pole.real() / pole.imag()};
        const auto r = solve_controller_params(FractionalPlant({a0, a1, a2}, {0.0, 1.0, 2.0}), k, spec,
                                               SynthesisMode::pd_delta);
        EXPECT_NEAR(r.controller.delta, 1.0, 1e-6) << i;
        EXPECT_NEAR(r.controller.td, d, 1e-6) << i;
        ++checked;
    }
    EXPECT_GE(checked, 10);
}

TEST(Solve, ReportsSoundResiduals) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> s(0.5, 3.0), tl(0.3, 1.5);
    for (int i = 0; i < 10; ++i) {
        const auto spec = poles_from_measures(s(rng), tl(rng));
        try {
            const auto r = solve_controller_params(fractional_plant(), 20.5, spec, SynthesisMode::pd_delta);
            EXPECT_LT(r.residual[0], 1e-10);
            EXPECT_LT(r.residual[1], 1e-10);
            EXPECT_GT(r.controller.td, 0.0);
            EXPECT_GT(r.controller.delta, 0.0);
            EXPECT_LE(r.controller.delta, 2.0);
        } catch (const SynthesisError& e) {
            EXPECT_TRUE(e.kind() == ErrorKind::non_physical || e.kind() == ErrorKind::convergence);
        }
    }
}

TEST(Roots, IntegerLoopMatchesQuadraticFormula) {
    const auto roots = find_dominant_roots(integer_plant(), integer_pd, RootRegion{});
    ASSERT_FALSE(roots.empty());
    const auto oracle = testing::quadratic_roots(0.7414, 0.2313 + 2.7343, 21.5);
    const complex upper = oracle[0].imag() > 0 ? oracle[0] : oracle[1];
    EXPECT_LT(std::abs(roots.front() - upper), 1e-8);
    EXPECT_NEAR(roots.front().real(), -2.0, 0.01);
    EXPECT_NEAR(roots.front().imag(), 5.0, 0.01);
    EXPECT_EQ(roots.size(), 2u);
}

TEST(Roots, StaticLoopHasNone) {
    EXPECT_TRUE(find_dominant_roots(FractionalPlant({1.0}, {0.0}), {3.0, 0, 0, 0, 0}, RootRegion{}).empty());
}

TEST(Roots, FractionalLoopIsSortedAndAccurate) {
    const auto roots = find_dominant_roots(fractional_plant(), fractional_pd, RootRegion{});
    ASSERT_FALSE(roots.empty());
    EXPECT_LE(roots.front().real(), -2.0 + 0.2);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        EXPECT_LT(std::abs(char_residual(fractional_plant(), fractional_pd, roots[i])), 1e-8);
        if (i > 0) EXPECT_GE(roots[i - 1].real(), roots[i].real());
    }
}

TEST(Stability, IntegerLoopStable) {
    const auto report = verify_stability(integer_plant(), integer_pd, symmetric_region(poles_from_measures(2.0, 0.4)));
    EXPECT_TRUE(report.stable);
    ASSERT_TRUE(report.rightmost_root.has_value());
    EXPECT_NEAR(report.rightmost_root->real(), -2.0, 0.01);
}

TEST(Stability, UnstableFirstOrderLoop) {
    const auto report = verify_stability(FractionalPlant({-1.0, 1.0}, {0.0, 1.0}), {0.5, 0, 0, 0, 0},
                                         RootRegion{-10.0, 10.0, 0.0, 10.0});
    EXPECT_FALSE(report.stable);
    ASSERT_TRUE(report.rightmost_root.has_value());
    EXPECT_NEAR(report.rightmost_root->real(), 0.5, 1e-9);
    EXPECT_NEAR(report.rightmost_root->imag(), 0.0, 1e-9);
}

TEST(Stability, FractionalLoopStable) {
    const auto spec = poles_from_measures(2.0, 0.4);
    EXPECT_TRUE(verify_stability(fractional_plant(), fractional_pd, symmetric_region(spec)).stable);
    EXPECT_TRUE(verify_stability(fractional_plant(), integer_pd, symmetric_region(spec)).stable);
}

TEST(Stability, RegionMustReachImaginaryAxis) {
    EXPECT_THROW(verify_stability(integer_plant(), integer_pd, RootRegion{-10.0, -1.0, 0.0, 10.0}), DomainError);
}

}  // namespace
}  // namespace fracctl::synthesis
