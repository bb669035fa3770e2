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

// Command dispatch for the fracctl tool. Each command maps onto one library
// operation and writes its results into an output directory.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracctl/cli/config.hpp"
#include "fracctl/cli/io.hpp"
#include "fracctl/error.hpp"

namespace fracctl::cli {

// Process exit status of the tool, one per failure class.
enum class ExitCode : int {
    ok = 0,
    internal = 1,
    usage = 2,
    config = 3,
    io = 4,
    domain = 5,
    validation = 6,
    not_converged = 7,
    diverged = 8,
    non_physical = 9,
    unsupported = 10,
};

ExitCode exit_code_for(ErrorKind kind) noexcept;

// Table of codes and meanings for the help text.
std::string exit_code_help();

inline constexpr std::string_view command_names[] = {"simulate", "synthesize", "identify", "mleval", "differint"};

struct RunRequest {
    std::string command;
    ExperimentConfig config;
    std::optional<std::filesystem::path> out_dir;    // created when missing
    std::optional<ExperimentConfig> reference;       // simulate only
};

struct RunReport {
    std::vector<std::filesystem::path> written;
    Summary summary;
    std::string console;  // text meant for stdout
};

// Throws fracctl::Error subclasses; ConfigError for a missing section.
RunReport run_command(const RunRequest& request);

}  // namespace fracctl::cli
