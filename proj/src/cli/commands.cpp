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

#include "fracctl/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <spdlog/spdlog.h>
#include <system_error>

#include "fracctl/fraccalc.hpp"
#include "fracctl/identify.hpp"
#include "fracctl/loopsim.hpp"
#include "fracctl/synthesis.hpp"

namespace fracctl::cli {

namespace fs = std::filesystem;

namespace {

struct ExitCodeInfo {
    ExitCode code;
    const char* meaning;
};

constexpr ExitCodeInfo exit_codes[] = {
    {ExitCode::ok, "success"},
    {ExitCode::internal, "internal error"},
    {ExitCode::usage, "bad command-line usage"},
    {ExitCode::config, "invalid or incomplete configuration"},
    {ExitCode::io, "file could not be read or written"},
    {ExitCode::domain, "argument outside the mathematical domain"},
    {ExitCode::validation, "malformed input data"},
    {ExitCode::not_converged, "not converged"},
    {ExitCode::diverged, "loop diverged"},
    {ExitCode::non_physical, "non-physical synthesis solution"},
    {ExitCode::unsupported, "unsupported request"},
};

class OutputDir {
public:
    OutputDir(const std::optional<fs::path>& dir, RunReport& report) : dir_(dir), report_(report) {
        if (!dir_) return;
        std::error_code ec;
        fs::create_directories(*dir_, ec);
        if (ec || !fs::is_directory(*dir_)) {
            throw Error(ErrorKind::io, "cannot create output directory " + dir_->string());
        }
    }

    void write(const std::string& name, std::string_view content) {
        if (!dir_) return;
        const fs::path path = *dir_ / name;
        write_file_atomic(path, content);
        report_.written.push_back(path);
        spdlog::debug("wrote {}", path.string());
    }

private:
    std::optional<fs::path> dir_;
    RunReport& report_;
};

loop::LoopConfig loop_config(const ExperimentConfig& c) {
    const SimSection sim = c.sim.value_or(SimSection{});
    return loop::LoopConfig{.plant = *c.plant,
                            .controller = *c.controller,
                            .grid = {sim.step, sim.horizon},
                            .memory_length = sim.memory_length,
                            .setpoint = {.amplitude = sim.amplitude, .step_time = sim.step_time, .samples = {}},
                            .filter_coefficient = sim.filter,
                            .one_step_delay = sim.one_step_delay,
                            .divergence_bound = sim.divergence_bound,
                            .u_min = sim.u_min,
                            .u_max = sim.u_max};
}

void add_metrics(Summary& s, const loop::PerformanceMetrics& m, const loop::SimulationTrace& trace) {
    s.add("E_t", m.static_deviation);
    if (m.deviation_absolute) s.add("E_t_kind", std::string("absolute"));
    s.add("T_r", m.control_time);
    s.add("P_r", m.overshoot);
    s.add("y_final", m.final_value);
    s.add("samples", static_cast<double>(trace.size()));
}

// Simulates one config; on divergence the partial trace is kept on disk.
loop::SimulationTrace simulate_one(const ExperimentConfig& c, OutputDir& out, const std::string& prefix) {
    const auto config = loop_config(c);
    spdlog::info("simulating {} ({} steps at h = {})", prefix.empty() ? "config" : prefix, config.grid.steps(),
                 config.grid.step);
    try {
        return loop::simulate_closed_loop(config);
    } catch (const loop::LoopDivergedError& e) {
        out.write(prefix + (prefix.empty() ? "" : "_") + "partial_trace.csv", trace_to_csv(e.partial_trace()));
        throw;
    }
}

RunReport run_simulate(const RunRequest& req) {
    RunReport report;
    OutputDir out(req.out_dir, report);
    const double band = req.config.sim.value_or(SimSection{}).settle_band;

    const auto trace = simulate_one(req.config, out, "");
    const auto metrics = loop::compute_metrics(trace, band);
    add_metrics(report.summary, metrics, trace);
    out.write("trace.csv", trace_to_csv(trace));
    out.write("metrics.txt", report.summary.str());

    if (req.reference) {
        require_sections(*req.reference, "simulate");
        const auto ref_trace = simulate_one(*req.reference, out, "reference");
        const double ref_band = req.reference->sim.value_or(SimSection{}).settle_band;
        const auto ref = loop::compute_metrics(ref_trace, ref_band);
        Summary ref_summary;
        add_metrics(ref_summary, ref, ref_trace);
        out.write("reference_trace.csv", trace_to_csv(ref_trace));
        out.write("reference_metrics.txt", ref_summary.str());

        std::string table = "run,E_t,T_r,P_r,y_final\n";
        for (const auto& [name, m] : {std::pair{"config", metrics}, std::pair{"reference", ref}}) {
            table += std::string(name) + "," + format_number(m.static_deviation) + "," +
                     format_number(m.control_time) + "," + format_number(m.overshoot) + "," +
                     format_number(m.final_value) + "\n";
        }
        out.write("comparison.csv", table);
        for (const auto& [key, value] : ref_summary.entries()) report.summary.add("reference." + key, value);
    }
    report.console = report.summary.str();
    return report;
}

RunReport run_synthesize(const RunRequest& req) {
    RunReport report;
    OutputDir out(req.out_dir, report);
    const auto& plant = *req.config.plant;
    const auto& s = *req.config.synthesis;

    const double gain = s.gain ? *s.gain : synthesis::min_gain(*s.static_deviation, plant.coeffs().front());
    const auto spec = synthesis::poles_from_measures(s.stability_measure, s.damping_measure);
    synthesis::SynthesisOptions options;
    options.tol = s.tol;
    options.max_iterations = s.max_iterations;
    options.fixed_ti = s.ti;
    options.fixed_lambda = s.lambda;
    options.grid_density = s.grid_density;

    spdlog::info("synthesizing {} for K = {}, poles {} +- {}i", synthesis::to_string(s.mode), gain,
                 spec.upper_pole().real(), spec.upper_pole().imag());
    synthesis::SynthesisResult result;
    try {
        result = synthesis::solve_controller_params(plant, gain, spec, s.mode, options);
    } catch (const synthesis::SynthesisError& e) {
        const auto& c = e.last_iterate();
        spdlog::warn("last iterate after {} iterations: Ti = {}, lambda = {}, Td = {}, delta = {}", e.iterations(),
                     c.ti, c.lambda, c.td, c.delta);
        throw;
    }

    // Extend the default search box to the right half-plane so unstable
    // roots can be found.
    auto region = synthesis::default_region(spec);
    region.re_max = -region.re_min;
    const auto stability = synthesis::verify_stability(plant, result.controller, region, s.grid_density);
    const auto roots = synthesis::find_dominant_roots(plant, result.controller, region, s.grid_density);

    auto& sum = report.summary;
    sum.add("mode", synthesis::to_string(s.mode));
    sum.add("K", result.controller.gain);
    sum.add("Ti", result.controller.ti);
    sum.add("lambda", result.controller.lambda);
    sum.add("Td", result.controller.td);
    sum.add("delta", result.controller.delta);
    sum.add("pole_re", spec.upper_pole().real());
    sum.add("pole_im", spec.upper_pole().imag());
    sum.add("residual", std::max(result.residual[0], result.residual[1]));
    sum.add("iterations", static_cast<double>(result.iterations));
    sum.add("dominance_verified", std::string(result.dominance_verified ? "true" : "false"));
    sum.add("stable", std::string(stability.stable ? "true" : "false"));
    if (stability.rightmost_root) {
        sum.add("dominant_root_re", stability.rightmost_root->real());
        sum.add("dominant_root_im", stability.rightmost_root->imag());
    }
    out.write("synthesis.txt", sum.str());

    std::string csv = "re,im\n";
    for (const auto& r : roots) csv += format_number(r.real()) + "," + format_number(r.imag()) + "\n";
    out.write("roots.csv", csv);
    if (!result.dominance_verified) spdlog::warn("target poles are not the dominant roots of the designed loop");
    report.console = sum.str();
    return report;
}

identify::IdentProblem ident_problem(const plant::FractionalPlant& plant, const IdentifySection& s) {
    const std::size_t n = plant.term_count();
    identify::IdentProblem problem;
    problem.term_count = n;
    problem.free_mask.assign(2 * n, false);
    problem.initial_guess = plant.coeffs();
    problem.initial_guess.insert(problem.initial_guess.end(), plant.orders().begin(), plant.orders().end());
    for (const auto& name : s.free) problem.free_mask[*parameter_index(name, n)] = true;

    problem.bounds.resize(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        const double g = problem.initial_guess[i];
        const bool is_order = i >= n;
        const std::size_t term = is_order ? i - n : i;
        const auto& lower = is_order ? s.order_lower : s.coeff_lower;
        const auto& upper = is_order ? s.order_upper : s.coeff_upper;
        identify::ParameterBound b;
        if (!problem.free_mask[i]) {
            b = {g, g};
        } else if (is_order) {
            b = {std::max(0.0, g - 0.5), g + 0.5};
        } else if (g != 0.0) {
            b = {std::min(g / 10.0, g * 10.0), std::max(g / 10.0, g * 10.0)};
        } else {
            b = {-1.0, 1.0};
        }
        if (problem.free_mask[i] && !lower.empty()) b.lower = lower[term];
        if (problem.free_mask[i] && !upper.empty()) b.upper = upper[term];
        problem.bounds[i] = b;
    }
    return problem;
}

RunReport run_identify(const RunRequest& req) {
    RunReport report;
    OutputDir out(req.out_dir, report);
    const auto& plant = *req.config.plant;
    const auto& s = *req.config.identify;

    const auto columns = read_columns(read_text_file(s.data), {"t", "y"});
    identify::MeasuredResponse data{columns[0], columns[1]};
    data.validate();

    const auto problem = ident_problem(plant, s);
    problem.validate();
    identify::IdentOptions options;
    options.max_evaluations = s.max_evaluations;
    options.simplex_tolerance = s.simplex_tolerance;

    spdlog::info("identifying {} parameters from {} samples", s.free.size(), data.values.size());
    const auto result = identify::identify(data, problem, options);

    auto& sum = report.summary;
    for (std::size_t i = 0; i < problem.parameter_count(); ++i) {
        sum.add(problem.parameter_name(i), result.parameters[i]);
    }
    sum.add("Q", result.q);
    sum.add("evaluations", static_cast<double>(result.evaluations));
    sum.add("converged", std::string(result.converged ? "true" : "false"));
    out.write("identify.txt", sum.str());

    const plant::TimeGrid grid{data.step(), data.times.back()};
    const auto fitted = plant::simulate_plant(result.plant, std::vector<double>(data.values.size(), 1.0), grid);
    std::string csv = "t,y_measured,y_fitted\n";
    for (std::size_t k = 0; k < data.values.size(); ++k) {
        csv += format_number(data.times[k]) + "," + format_number(data.values[k]) + "," + format_number(fitted[k]) +
               "\n";
    }
    out.write("fit.csv", csv);
    report.console = sum.str();
    if (!result.converged) {
        throw ConvergenceError("identification not converged within " + std::to_string(options.max_evaluations) +
                                   " evaluations; best point written",
                               result.evaluations);
    }
    return report;
}

RunReport run_mleval(const RunRequest& req) {
    RunReport report;
    OutputDir out(req.out_dir, report);
    const auto& s = *req.config.mleval;
    const std::complex<double> z(s.z, s.z_imag);
    const auto value = s.derivative == 0 ? fraccalc::mittag_leffler(s.alpha, s.beta, z)
                                         : fraccalc::ml_derivative(s.alpha, s.beta, z, s.derivative);
    auto& sum = report.summary;
    sum.add("value", value.real());
    if (s.z_imag != 0.0) sum.add("value_imag", value.imag());
    out.write("mleval.txt", sum.str());
    report.console = format_number(value.real());
    if (s.z_imag != 0.0) report.console += " " + format_number(value.imag());
    report.console += "\n";
    return report;
}

double test_function(const DifferintSection& s, double t) {
    if (s.function == "exp") return std::exp(t);
    if (s.function == "sin") return std::sin(t);
    if (s.function == "cos") return std::cos(t);
    if (s.function == "step") return 1.0;
    return s.exponent == 0.0 ? 1.0 : std::pow(t, s.exponent);
}

RunReport run_differint(const RunRequest& req) {
    RunReport report;
    OutputDir out(req.out_dir, report);
    const auto& s = *req.config.differint;

    std::vector<double> t, f;
    double step = s.step;
    if (!s.data.empty()) {
        auto columns = read_columns(read_text_file(s.data), {"t", "f"});
        identify::MeasuredResponse grid{columns[0], columns[1]};  // same uniform-grid rules
        grid.validate();
        step = grid.step();
        t = std::move(columns[0]);
        f = std::move(columns[1]);
    } else {
        const plant::TimeGrid grid{s.step, s.horizon};
        for (std::size_t k = 0; k <= grid.steps(); ++k) {
            t.push_back(grid.time(k));
            f.push_back(test_function(s, t.back()));
        }
    }
    const auto d = fraccalc::gl_differint(f, {s.order, step, s.memory_length});

    std::string csv = "t,f,d\n";
    for (std::size_t k = 0; k < t.size(); ++k) {
        csv += format_number(t[k]) + "," + format_number(f[k]) + "," + format_number(d[k]) + "\n";
    }
    out.write("differint.csv", csv);

    auto& sum = report.summary;
    sum.add("order", s.order);
    sum.add("h", step);
    sum.add("samples", static_cast<double>(t.size()));
    sum.add("t_final", t.back());
    sum.add("value_final", d.back());
    // D^a t^p = Gamma(p+1) / Gamma(p+1-a) t^(p-a) for the power test function.
    if (s.data.empty() && s.function == "power" && std::isinf(s.memory_length)) {
        const double shifted = s.exponent + 1.0 - s.order;
        const bool pole = shifted <= 0.0 && shifted == std::floor(shifted);
        const double exact =
            pole ? 0.0 : fraccalc::gamma(s.exponent + 1.0) / fraccalc::gamma(shifted) * std::pow(t.back(), shifted - 1.0);
        sum.add("exact_final", exact);
    }
    out.write("differint.txt", sum.str());
    report.console = sum.str();
    return report;
}

}  // namespace

ExitCode exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return ExitCode::domain;
        case ErrorKind::validation: return ExitCode::validation;
        case ErrorKind::convergence: return ExitCode::not_converged;
        case ErrorKind::divergence: return ExitCode::diverged;
        case ErrorKind::non_physical: return ExitCode::non_physical;
        case ErrorKind::unsupported: return ExitCode::unsupported;
        case ErrorKind::io: return ExitCode::io;
        case ErrorKind::config: return ExitCode::config;
    }
    return ExitCode::internal;
}

std::string exit_code_help() {
    std::string text = "Exit codes:\n";
    for (const auto& [code, meaning] : exit_codes) {
        const auto number = std::to_string(static_cast<int>(code));
        text += "  " + std::string(number.size() < 2 ? " " : "") + number + "  " + meaning + "\n";
    }
    return text;
}

RunReport run_command(const RunRequest& req) {
    require_sections(req.config, req.command);
    if (req.command != "mleval" && !req.out_dir) {
        throw ConfigError("--out", "an output directory is required for '" + req.command + "'");
    }
    if (req.reference && req.command != "simulate") {
        throw ConfigError("--reference", "only valid with 'simulate'");
    }
    if (req.command == "simulate") return run_simulate(req);
    if (req.command == "synthesize") return run_synthesize(req);
    if (req.command == "identify") return run_identify(req);
    if (req.command == "mleval") return run_mleval(req);
    return run_differint(req);
}

}  // namespace fracctl::cli
