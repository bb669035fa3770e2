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

// Experiment configuration: an INI-style document with the sections
// [plant], [controller], [sim], [synthesis], [identify], [mleval] and
// [differint]. The grammar and every key are listed in docs/config.md.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracctl/controller.hpp"
#include "fracctl/error.hpp"
#include "fracctl/fraccalc.hpp"
#include "fracctl/plant.hpp"
#include "fracctl/synthesis.hpp"

namespace fracctl::cli {

struct ConfigIssue {
    std::string key;  // "section.key", or the section name alone
    std::string reason;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    ConfigError(std::string key, std::string reason);

    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct SimSection {
    double step = 0.01;
    double horizon = 10.0;
    double memory_length = fraccalc::unbounded;
    double amplitude = 1.0;
    double step_time = 0.0;
    double filter = 0.5;
    double settle_band = 2.0;
    double divergence_bound = 1e6;
    bool one_step_delay = false;
    std::optional<double> u_min;
    std::optional<double> u_max;
};

struct SynthesisSection {
    double stability_measure = 0.0;  // S_t
    double damping_measure = 0.0;    // T_l
    std::optional<double> static_deviation;  // E_t [%], gives K = 100/E_t - a0
    std::optional<double> gain;              // explicit K, wins over E_t
    synthesis::SynthesisMode mode = synthesis::SynthesisMode::pd_delta;
    double tol = 1e-10;
    std::size_t max_iterations = 100;
    double ti = 0.0;      // PID_fixed_lambda only
    double lambda = 0.0;  // PID_fixed_lambda only
    std::size_t grid_density = synthesis::default_grid_density;
};

struct IdentifySection {
    std::filesystem::path data;       // CSV with columns t,y
    std::vector<std::string> free;    // parameter names, e.g. a1, beta2
    std::vector<double> coeff_lower, coeff_upper;  // per term, optional
    std::vector<double> order_lower, order_upper;  // per term, optional
    std::size_t max_evaluations = 2000;
    double simplex_tolerance = 1e-6;
};

struct MlevalSection {
    double alpha = 1.0;
    double beta = 1.0;
    double z = 0.0;
    double z_imag = 0.0;
    unsigned derivative = 0;
};

struct DifferintSection {
    double order = 0.0;
    double step = 0.001;
    double horizon = 1.0;
    double memory_length = fraccalc::unbounded;
    std::string function = "power";  // power | exp | sin | cos | step
    double exponent = 1.0;           // power only
    std::filesystem::path data;      // CSV with columns t,f; replaces function
};

struct ExperimentConfig {
    std::optional<plant::FractionalPlant> plant;
    std::optional<control::FoPidController> controller;
    std::optional<SimSection> sim;
    std::optional<SynthesisSection> synthesis;
    std::optional<IdentifySection> identify;
    std::optional<MlevalSection> mleval;
    std::optional<DifferintSection> differint;
};

// "section.key=value" from the command line; applied over the file.
struct Override {
    std::string section;
    std::string key;
    std::string value;
};

// ConfigError when the text does not have the form "section.key=value".
Override parse_override(std::string_view text);

// Parses and validates. Relative paths inside the document are resolved
// against base_dir. Throws ConfigError listing every problem found.
ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {},
                              const std::filesystem::path& base_dir = {});

// Position of "a<i>" or "beta<i>" in the [a_0..a_n, b_0..b_n] layout.
std::optional<std::size_t> parameter_index(std::string_view name, std::size_t terms);

// Reads a file and parses it; an unreadable file is an io Error.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

// ConfigError naming each section `command` needs but `config` lacks.
void require_sections(const ExperimentConfig& config, std::string_view command);

}  // namespace fracctl::cli
