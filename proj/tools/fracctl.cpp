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

// fracctl: command-line front end for the fractional-order control toolkit.
//
//   fracctl <simulate|synthesize|identify|mleval|differint> --config <path>
//           --out <dir> [--set section.key=value ...] [--reference <path>]

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fracctl/cli/commands.hpp"

namespace {

using fracctl::cli::ExitCode;

void configure_logging() {
    auto logger = spdlog::stderr_logger_st("fracctl");
    logger->set_pattern("fracctl: %^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);

    const char* env = std::getenv("FRACCTL_LOG");
    if (env == nullptr) return;
    const std::string level = env;
    if (level == "silent") {
        spdlog::set_level(spdlog::level::off);
    } else if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level != "info") {
        spdlog::warn("FRACCTL_LOG='{}' not recognized (silent|info|debug); using info", level);
    }
}

int fail(ExitCode code, const std::string& message) {
    spdlog::error("{}", message);
    return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Fractional-order control toolkit: loop simulation, dominant-root synthesis,\n"
                 "plant identification and fractional-calculus evaluators."};
    app.footer("\nConfig files are INI-style; see docs/config.md for every section and key.\n"
               "Environment: FRACCTL_LOG=silent|info|debug sets log verbosity (default info).\n\n" +
               fracctl::cli::exit_code_help());

    std::string command;
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
    std::string reference_path;
    app.add_option("command", command, "simulate | synthesize | identify | mleval | differint")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(fracctl::cli::command_names),
                                                       std::end(fracctl::cli::command_names))));
    app.add_option("--config,-c", config_path, "experiment config file");
    app.add_option("--out,-o", out_dir, "output directory (created when missing)");
    app.add_option("--set,-s", sets, "override a config value, section.key=value (repeatable)");
    app.add_option("--reference", reference_path, "second config simulated for comparison (simulate only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::usage);
    }

    try {
        std::vector<fracctl::cli::Override> overrides;
        for (const auto& s : sets) overrides.push_back(fracctl::cli::parse_override(s));

        fracctl::cli::RunRequest request;
        request.command = command;
        request.config = config_path.empty() ? fracctl::cli::parse_config("", overrides)
                                             : fracctl::cli::load_config(config_path, overrides);
        if (!out_dir.empty()) request.out_dir = out_dir;
        if (!reference_path.empty()) request.reference = fracctl::cli::load_config(reference_path);

        const auto report = fracctl::cli::run_command(request);
        std::cout << report.console << std::flush;
        for (const auto& path : report.written) spdlog::info("wrote {}", path.string());
        return 0;
    } catch (const fracctl::Error& e) {
        return fail(fracctl::cli::exit_code_for(e.kind()),
                    std::string(fracctl::to_string(e.kind())) + ": " + e.what());
    } catch (const std::exception& e) {
        return fail(ExitCode::internal, std::string("internal error: ") + e.what());
    }
}
