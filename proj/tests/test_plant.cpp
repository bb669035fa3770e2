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

#include <cmath>
#include <random>
#include <vector>

#include "fracctl/error.hpp"
#include "fracctl/plant.hpp"
#include "support/oracles.hpp"

namespace fracctl::plant {
namespace {

FractionalPlant fractional_plant() { return FractionalPlant({1.0, 0.5, 0.8}, {0.0, 0.9, 2.2}); }
FractionalPlant integer_plant() { return FractionalPlant({1.0, 0.2313, 0.7414}, {0.0, 1.0, 2.0}); }

std::vector<double> unit_step(const TimeGrid& grid) { return std::vector<double>(grid.steps() + 1, 1.0); }

TEST(ValidatePlant, AcceptsFractionalAndStaticPlants) {
    EXPECT_NO_THROW(validate_plant({1, 0.5, 0.8}, {0, 0.9, 2.2}));
    EXPECT_NO_THROW(validate_plant({1}, {0}));
}

TEST(ValidatePlant, RejectsMalformed) {
    try {
        validate_plant({1, 1}, {1, 1});
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("orders not strictly increasing"), std::string::npos);
    }
    EXPECT_THROW(validate_plant({1, 0}, {0, 1}), ValidationError);        // a_n = 0
    EXPECT_THROW(validate_plant({1, 2}, {0}), ValidationError);           // length mismatch
    EXPECT_THROW(validate_plant({}, {}), ValidationError);
    EXPECT_THROW(validate_plant({1, 2}, {-0.5, 1}), ValidationError);     // negative b_0
    EXPECT_THROW(validate_plant({1, NAN}, {0, 1}), ValidationError);
}

TEST(TimeGrid, StepCount) {
    EXPECT_EQ((TimeGrid{0.01, 10.0}).steps(), 1000u);
    EXPECT_EQ((TimeGrid{1e-3, 5.0}).steps(), 5000u);
    EXPECT_THROW((TimeGrid{0.0, 1.0}).steps(), DomainError);
    EXPECT_THROW((TimeGrid{0.1, 0.05}).steps(), DomainError);
}

TEST(SimulatePlant, StaticPlantIsAlgebraic) {
    const TimeGrid grid{0.1, 2.0};
    const auto y = simulate_plant(FractionalPlant({1.0}, {0.0}), unit_step(grid), grid);
    EXPECT_EQ(y[0], 0.0);
    for (std::size_t k = 1; k < y.size(); ++k) EXPECT_EQ(y[k], 1.0);
}

TEST(SimulatePlant, InputLengthMustMatchGrid) {
    const TimeGrid grid{0.1, 1.0};
    const std::vector<double> u(5, 1.0);
    EXPECT_THROW(simulate_plant(fractional_plant(), u, grid), ValidationError);
}

TEST(SimulatePlant, FractionalPlantSettlesToStaticGain) {
    const TimeGrid grid{0.01, 50.0};
    const auto y = simulate_plant(fractional_plant(), unit_step(grid), grid);
    EXPECT_NEAR(y.back(), 1.0, 0.05);
}

TEST(SimulatePlant, FirstOrderLagMatchesExponential) {
    const TimeGrid grid{1e-3, 5.0};
    const auto y = simulate_plant(FractionalPlant({1.0, 1.0}, {0.0, 1.0}), unit_step(grid), grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) worst = std::max(worst, std::abs(y[k] - (1.0 - std::exp(-grid.time(k)))));
    EXPECT_LT(worst, 5e-3);
}

TEST(SimulatePlant, IntegerPlantMatchesRk4) {
    const TimeGrid grid{1e-3, 10.0};
    const auto y = simulate_plant(integer_plant(), unit_step(grid), grid);
    const auto ref = testing::rk4_step_response({1.0, 0.2313, 0.7414}, grid.step, grid.steps());
    double worst = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) worst = std::max(worst, std::abs(y[k] - ref[k]));
    EXPECT_LT(worst, 0.01);
}

TEST(SimulatePlant, LinearInInput) {
    const TimeGrid grid{0.01, 5.0};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1, 1);
    std::vector<double> u(grid.steps() + 1);
    for (double& v : u) v = dist(rng);
    const auto y = simulate_plant(fractional_plant(), u, grid);
    for (double c : {-3.0, 0.5, 7.25}) {
        std::vector<double> cu(u);
        for (double& v : cu) v *= c;
        const auto yc = simulate_plant(fractional_plant(), cu, grid);
        for (std::size_t k = 0; k < y.size(); ++k) {
            EXPECT_NEAR(yc[k], c * y[k], 1e-12 * std::max(1.0, std::abs(c * y[k])));
        }
    }
}

TEST(SimulatePlant, GridRefinementConverges) {
    const double horizon = 5.0;
    std::vector<double> finals;
    for (double h : {0.02, 0.01, 0.005, 0.0025}) {
        const TimeGrid grid{h, horizon};
        finals.push_back(simulate_plant(fractional_plant(), unit_step(grid), grid).back());
    }
    for (std::size_t i = 2; i < finals.size(); ++i) {
        EXPECT_LT(std::abs(finals[i] - finals[i - 1]), std::abs(finals[i - 1] - finals[i - 2]));
    }
}

TEST(SimulateTerms, SingularDenominator) {
    const std::vector<double> a{1.0, -1.0}, b{0.0, 0.0};
    const std::vector<double> u(3, 1.0);
    EXPECT_THROW(simulate_terms(a, b, u, 0.1), DomainError);
}

TEST(PlantStepper, AdvanceMatchesBatch) {
    const TimeGrid grid{0.01, 2.0};
    const auto batch = simulate_plant(fractional_plant(), unit_step(grid), grid);
    PlantStepper stepper(fractional_plant(), grid.step);
    stepper.push(0.0);
    for (std::size_t k = 1; k < batch.size(); ++k) EXPECT_EQ(stepper.advance(1.0), batch[k]);
}

TEST(AnalyticSolution, ZeroAtOrigin) {
    EXPECT_EQ(analytic_solution(fractional_plant(), 0.0), 0.0);
    EXPECT_EQ(analytic_solution(FractionalPlant({1.0, 1.0}, {0.0, 1.0}), 0.0), 0.0);
}

TEST(AnalyticSolution, FirstOrderLag) {
    const FractionalPlant lag({1.0, 1.0}, {0.0, 1.0});
    EXPECT_NEAR(analytic_solution(lag, 1.0), 1.0 - std::exp(-1.0), 1e-12);
    for (double t : {0.1, 0.5, 2.0, 5.0}) EXPECT_NEAR(analytic_solution(lag, t), 1.0 - std::exp(-t), 1e-10);
}

TEST(AnalyticSolution, SingleTermPlant) {
    // 2 D^0.5 y = 1  =>  y = t^0.5 / (2 Gamma(1.5))
    EXPECT_NEAR(analytic_solution(FractionalPlant({2.0}, {0.5}), 4.0), 2.0 / (2.0 * std::tgamma(1.5)), 1e-14);
}

TEST(AnalyticSolution, IntegerSecondOrderMatchesRk4) {
    const double h = 1e-3;
    const auto ref = testing::rk4_step_response({1.0, 0.2313, 0.7414}, h, 3000);
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
        EXPECT_NEAR(analytic_solution(integer_plant(), t), ref[static_cast<std::size_t>(std::lround(t / h))], 1e-6) << t;
    }
}

TEST(AnalyticSolution, FractionalPlantMatchesNumericalSolver) {
    const TimeGrid grid{0.005, 5.0};
    const auto y = simulate_plant(fractional_plant(), unit_step(grid), grid);
    for (double t : {1.0, 2.0, 5.0}) {
        EXPECT_NEAR(analytic_solution(fractional_plant(), t), y[static_cast<std::size_t>(std::lround(t / grid.step))], 0.02)
            << t;
    }
}

TEST(AnalyticSolution, Errors) {
    EXPECT_THROW(analytic_solution(FractionalPlant({1, 1, 1, 1}, {0, 1, 2, 3}), 1.0), UnsupportedError);
    EXPECT_THROW(analytic_solution(fractional_plant(), -1.0), DomainError);
    EXPECT_THROW(analytic_solution(fractional_plant(), 60.0), ConvergenceError);
}

}  // namespace
}  // namespace fracctl::plant
