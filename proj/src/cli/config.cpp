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

#include "fracctl/cli/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fracctl::cli {

namespace pt = boost::property_tree;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::string text = "invalid configuration";
    for (const auto& issue : issues) {
        text += "\n  ";
        if (!issue.key.empty()) text += issue.key + ": ";
        text += issue.reason;
    }
    return text;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

// Reads one section, remembers which keys were consumed and reports the rest.
class SectionReader {
public:
    SectionReader(const pt::ptree& node, std::string section, std::vector<ConfigIssue>& issues)
        : node_(node), section_(std::move(section)), issues_(issues) {}

    bool has(const std::string& key) const { return node_.find(key) != node_.not_found(); }

    void number(const std::string& key, double& out) {
        if (auto v = optional_number(key)) out = *v;
    }

    std::optional<double> optional_number(const std::string& key) {
        const auto raw = text(key);
        if (!raw) return std::nullopt;
        const auto value = to_number(*raw);
        if (!value) {
            issue(key, "expected a number, got '" + *raw + "'");
        } else if (!std::isfinite(*value)) {
            issue(key, "must be finite");
        } else {
            return value;
        }
        return std::nullopt;
    }

    std::optional<double> required_number(const std::string& key) {
        if (!has(key)) {
            issue(key, "required key is missing");
            return std::nullopt;
        }
        return optional_number(key);
    }

    void count(const std::string& key, std::size_t& out) {
        const auto raw = text(key);
        if (!raw) return;
        const std::string_view digits = trim(*raw);
        unsigned long long value = 0;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty()) {
            issue(key, "expected a non-negative integer, got '" + *raw + "'");
            return;
        }
        out = static_cast<std::size_t>(value);
    }

    void flag(const std::string& key, bool& out) {
        const auto raw = text(key);
        if (!raw) return;
        std::string v(trim(*raw));
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
        if (v == "true" || v == "yes" || v == "1" || v == "on") {
            out = true;
        } else if (v == "false" || v == "no" || v == "0" || v == "off") {
            out = false;
        } else {
            issue(key, "expected true or false, got '" + *raw + "'");
        }
    }

    std::vector<double> list(const std::string& key) {
        std::vector<double> values;
        const auto raw = text(key);
        if (!raw) return values;
        std::string_view rest = *raw;
        while (true) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            const auto value = to_number(item);
            if (!value) {
                issue(key, "expected a comma-separated list of numbers, got '" + *raw + "'");
                return {};
            }
            if (!std::isfinite(*value)) {
                issue(key, "all entries must be finite");
                return {};
            }
            values.push_back(*value);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return values;
    }

    std::vector<std::string> words(const std::string& key) {
        std::vector<std::string> out;
        const auto raw = text(key);
        if (!raw) return out;
        std::string_view rest = *raw;
        while (true) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            if (!item.empty()) out.emplace_back(item);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    std::optional<std::string> text(const std::string& key) {
        seen_.insert(key);
        const auto it = node_.find(key);
        if (it == node_.not_found()) return std::nullopt;
        return std::string(trim(it->second.data()));
    }

    void issue(const std::string& key, std::string reason) {
        issues_.push_back({section_ + "." + key, std::move(reason)});
    }

    void section_issue(std::string reason) { issues_.push_back({section_, std::move(reason)}); }

    // Every key that was never asked for is unknown.
    void finish() {
        for (const auto& [key, child] : node_) {
            if (!child.empty()) {
                issue(key, "nested keys are not allowed");
            } else if (!seen_.count(key)) {
                issue(key, "unknown key");
            }
        }
    }

private:
    const pt::ptree& node_;
    std::string section_;
    std::vector<ConfigIssue>& issues_;
    std::set<std::string> seen_;
};

std::optional<plant::FractionalPlant> read_plant(SectionReader& r) {
    if (!r.has("coeffs")) r.issue("coeffs", "required key is missing");
    if (!r.has("orders")) r.issue("orders", "required key is missing");
    auto coeffs = r.list("coeffs");
    auto orders = r.list("orders");
    r.finish();
    if (coeffs.empty() || orders.empty()) return std::nullopt;
    try {
        return plant::FractionalPlant(std::move(coeffs), std::move(orders));
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        if (what.find("order") != std::string::npos) {
            r.issue("orders", what);
        } else if (what.find("coeff") != std::string::npos || what.find("a_n") != std::string::npos) {
            r.issue("coeffs", what);
        } else {
            r.section_issue(what);
        }
    }
    return std::nullopt;
}

std::optional<control::FoPidController> read_controller(SectionReader& r) {
    control::FoPidController c;
    r.number("K", c.gain);
    r.number("Ti", c.ti);
    r.number("lambda", c.lambda);
    r.number("Td", c.td);
    r.number("delta", c.delta);
    r.finish();
    if (c.lambda < 0.0) r.issue("lambda", "must be >= 0");
    if (c.delta < 0.0) r.issue("delta", "must be >= 0");
    return c;
}

SimSection read_sim(SectionReader& r) {
    SimSection s;
    r.number("h", s.step);
    r.number("T_final", s.horizon);
    if (auto l = r.optional_number("L")) s.memory_length = *l;
    r.number("amplitude", s.amplitude);
    r.number("step_time", s.step_time);
    r.number("filter", s.filter);
    r.number("settle_band", s.settle_band);
    r.number("divergence_bound", s.divergence_bound);
    r.flag("delay", s.one_step_delay);
    s.u_min = r.optional_number("u_min");
    s.u_max = r.optional_number("u_max");
    r.finish();

    if (!(s.step > 0.0)) r.issue("h", "must be positive");
    if (!(s.horizon >= s.step)) r.issue("T_final", "must be at least h");
    if (!(s.memory_length > 0.0)) r.issue("L", "must be positive (omit the key for unlimited memory)");
    if (!(s.filter > 0.0 && s.filter <= 1.0)) r.issue("filter", "must lie in (0, 1]");
    if (!(s.settle_band > 0.0)) r.issue("settle_band", "must be positive");
    if (!(s.divergence_bound > 0.0)) r.issue("divergence_bound", "must be positive");
    if (s.u_min && s.u_max && *s.u_min > *s.u_max) r.issue("u_min", "exceeds u_max");
    return s;
}

SynthesisSection read_synthesis(SectionReader& r) {
    SynthesisSection s;
    const auto st = r.required_number("S_t");
    const auto tl = r.required_number("T_l");
    s.static_deviation = r.optional_number("E_t");
    s.gain = r.optional_number("K");
    if (const auto mode = r.text("mode")) {
        try {
            s.mode = synthesis::parse_mode(*mode);
        } catch (const DomainError&) {
            r.issue("mode", "expected PD_delta, PI_lambda or PID_fixed_lambda, got '" + *mode + "'");
        }
    }
    r.number("tol", s.tol);
    r.count("max_iterations", s.max_iterations);
    r.number("Ti", s.ti);
    r.number("lambda", s.lambda);
    r.count("grid_density", s.grid_density);
    r.finish();

    if (st) {
        s.stability_measure = *st;
        if (!(*st > 0.0)) r.issue("S_t", "unstable specification (must be positive)");
    }
    if (tl) {
        s.damping_measure = *tl;
        if (!(*tl > 0.0)) r.issue("T_l", "must be positive");
    }
    if (s.static_deviation && !(*s.static_deviation > 0.0)) r.issue("E_t", "must be positive");
    if (!s.gain && !s.static_deviation) r.issue("K", "either K or E_t is required");
    if (!(s.tol > 0.0)) r.issue("tol", "must be positive");
    if (s.max_iterations == 0) r.issue("max_iterations", "must be positive");
    if (s.grid_density == 0) r.issue("grid_density", "must be positive");
    if (s.lambda < 0.0) r.issue("lambda", "must be >= 0");
    return s;
}

IdentifySection read_identify(SectionReader& r, const std::filesystem::path& base_dir,
                              const std::optional<plant::FractionalPlant>& plant) {
    IdentifySection s;
    if (const auto data = r.text("data")) {
        s.data = base_dir.empty() ? std::filesystem::path(*data) : base_dir / *data;
    } else {
        r.issue("data", "required key is missing");
    }
    s.free = r.words("free");
    s.coeff_lower = r.list("coeff_lower");
    s.coeff_upper = r.list("coeff_upper");
    s.order_lower = r.list("order_lower");
    s.order_upper = r.list("order_upper");
    r.count("max_evaluations", s.max_evaluations);
    r.number("simplex_tolerance", s.simplex_tolerance);
    r.finish();

    if (s.free.empty()) r.issue("free", "name at least one parameter to fit");
    if (s.max_evaluations == 0) r.issue("max_evaluations", "must be positive");
    if (!(s.simplex_tolerance > 0.0)) r.issue("simplex_tolerance", "must be positive");
    if (plant) {
        const std::size_t terms = plant->term_count();
        for (const auto& name : s.free) {
            if (!parameter_index(name, terms)) r.issue("free", "unknown parameter '" + name + "'");
        }
        const std::pair<const char*, const std::vector<double>*> bound_lists[] = {
            {"coeff_lower", &s.coeff_lower},
            {"coeff_upper", &s.coeff_upper},
            {"order_lower", &s.order_lower},
            {"order_upper", &s.order_upper},
        };
        for (const auto& [key, values] : bound_lists) {
            if (!values->empty() && values->size() != terms) {
                r.issue(key, "needs one entry per plant term (" + std::to_string(terms) + ")");
            }
        }
    }
    return s;
}

MlevalSection read_mleval(SectionReader& r) {
    MlevalSection s;
    r.number("alpha", s.alpha);
    r.number("beta", s.beta);
    r.number("z", s.z);
    r.number("z_imag", s.z_imag);
    std::size_t derivative = 0;
    r.count("derivative", derivative);
    r.finish();
    s.derivative = static_cast<unsigned>(derivative);
    if (!(s.alpha > 0.0)) r.issue("alpha", "must be positive");
    if (!(s.beta > 0.0)) r.issue("beta", "must be positive");
    return s;
}

DifferintSection read_differint(SectionReader& r, const std::filesystem::path& base_dir) {
    DifferintSection s;
    if (!r.has("order")) r.issue("order", "required key is missing");
    r.number("order", s.order);
    r.number("h", s.step);
    r.number("T_final", s.horizon);
    if (auto l = r.optional_number("L")) s.memory_length = *l;
    if (auto f = r.text("function")) s.function = *f;
    r.number("exponent", s.exponent);
    if (auto d = r.text("data")) s.data = base_dir.empty() ? std::filesystem::path(*d) : base_dir / *d;
    r.finish();

    static const std::set<std::string> functions{"power", "exp", "sin", "cos", "step"};
    if (!functions.count(s.function)) r.issue("function", "expected power, exp, sin, cos or step");
    if (!(s.step > 0.0)) r.issue("h", "must be positive");
    if (!(s.horizon >= s.step)) r.issue("T_final", "must be at least h");
    if (!(s.memory_length > 0.0)) r.issue("L", "must be positive (omit the key for unlimited memory)");
    if (s.function == "power" && s.exponent < 0.0) r.issue("exponent", "must be >= 0");
    return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(ErrorKind::config, join_issues(issues)), issues_(std::move(issues)) {}

std::optional<std::size_t> parameter_index(std::string_view name, std::size_t terms) {
    std::size_t offset = 0;
    std::string_view digits;
    if (name.starts_with("beta")) {
        offset = terms;
        digits = name.substr(4);
    } else if (name.starts_with("a")) {
        digits = name.substr(1);
    } else {
        return std::nullopt;
    }
    std::size_t i = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty() || i >= terms) {
        return std::nullopt;
    }
    return offset + i;
}

ConfigError::ConfigError(std::string key, std::string reason)
    : ConfigError(std::vector<ConfigIssue>{{std::move(key), std::move(reason)}}) {}

Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    const auto dot = text.substr(0, eq).find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos) {
        throw ConfigError(std::string(text), "expected section.key=value");
    }
    Override o{std::string(trim(text.substr(0, dot))), std::string(trim(text.substr(dot + 1, eq - dot - 1))),
               std::string(trim(text.substr(eq + 1)))};
    if (o.section.empty() || o.key.empty() || o.key.find('.') != std::string::npos) {
        throw ConfigError(std::string(text), "expected section.key=value");
    }
    return o;
}

ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides,
                              const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()), e.message());
    }
    for (const auto& o : overrides) {
        auto section = tree.find(o.section);
        if (section == tree.not_found()) {
            tree.push_back({o.section, pt::ptree{}});
            section = tree.find(o.section);
        }
        section->second.put(pt::ptree::path_type(o.key, '\0'), o.value);
    }

    std::vector<ConfigIssue> issues;
    ExperimentConfig config;
    if (tree.empty()) issues.push_back({"", "configuration is empty"});

    static const std::set<std::string> known{"plant", "controller", "sim", "synthesis", "identify", "mleval",
                                             "differint"};
    for (const auto& [name, node] : tree) {
        if (!known.count(name)) {
            issues.push_back({name, node.empty() ? "key outside any section" : "unknown section"});
        }
    }

    const auto section = [&](const char* name) -> const pt::ptree* {
        const auto it = tree.find(name);
        return it == tree.not_found() ? nullptr : &it->second;
    };

    if (const auto* node = section("plant")) {
        SectionReader r(*node, "plant", issues);
        config.plant = read_plant(r);
    }
    if (const auto* node = section("controller")) {
        SectionReader r(*node, "controller", issues);
        config.controller = read_controller(r);
    }
    if (const auto* node = section("sim")) {
        SectionReader r(*node, "sim", issues);
        config.sim = read_sim(r);
    }
    if (const auto* node = section("synthesis")) {
        SectionReader r(*node, "synthesis", issues);
        config.synthesis = read_synthesis(r);
    }
    if (const auto* node = section("identify")) {
        SectionReader r(*node, "identify", issues);
        config.identify = read_identify(r, base_dir, config.plant);
    }
    if (const auto* node = section("mleval")) {
        SectionReader r(*node, "mleval", issues);
        config.mleval = read_mleval(r);
    }
    if (const auto* node = section("differint")) {
        SectionReader r(*node, "differint", issues);
        config.differint = read_differint(r, base_dir);
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides, path.parent_path());
}

void require_sections(const ExperimentConfig& config, std::string_view command) {
    std::vector<ConfigIssue> issues;
    const auto need = [&](bool present, const char* name) {
        if (!present) issues.push_back({name, "section required by '" + std::string(command) + "' is missing"});
    };
    if (command == "simulate") {
        need(config.plant.has_value(), "plant");
        need(config.controller.has_value(), "controller");
    } else if (command == "synthesize") {
        need(config.plant.has_value(), "plant");
        need(config.synthesis.has_value(), "synthesis");
    } else if (command == "identify") {
        need(config.plant.has_value(), "plant");
        need(config.identify.has_value(), "identify");
    } else if (command == "mleval") {
        need(config.mleval.has_value(), "mleval");
    } else if (command == "differint") {
        need(config.differint.has_value(), "differint");
    } else {
        issues.push_back({"", "unknown command '" + std::string(command) + "'"});
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace fracctl::cli
