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

#include "fracctl/cli/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "fracctl/error.hpp"

namespace fracctl::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> cells;
    while (true) {
        const auto pos = line.find(sep);
        cells.push_back(trim(line.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return cells;
}

// Non-blank lines together with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto end = text.find('\n');
        const std::string_view line = trim(text.substr(0, end));
        ++number;
        if (!line.empty()) lines.emplace_back(number, line);
        if (end == std::string_view::npos) break;
        text.remove_prefix(end + 1);
    }
    return lines;
}

double parse_cell(std::string_view cell, std::size_t line) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || end != cell.data() + cell.size() || cell.empty()) {
        throw ValidationError("line " + std::to_string(line) + ": '" + std::string(cell) + "' is not a number");
    }
    return value;
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0 as well
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ec == std::errc{} ? end : buffer.data());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp =
        path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw Error(ErrorKind::io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw Error(ErrorKind::io, "cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string trace_to_csv(const loop::SimulationTrace& trace) {
    std::string out(trace_header);
    out += '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        for (double v : {trace.t[k], trace.w[k], trace.w_star[k], trace.e[k], trace.u[k]}) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(trace.y[k]);
        out += '\n';
    }
    return out;
}

loop::SimulationTrace trace_from_csv(std::string_view text) {
    const auto columns = read_columns(text, {"t", "w", "w_star", "e", "u", "y"});
    return {columns[0], columns[1], columns[2], columns[3], columns[4], columns[5]};
}

std::vector<std::vector<double>> read_columns(std::string_view text, const std::vector<std::string>& columns) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw ValidationError("data file is empty");
    const auto header = split(lines.front().second, ',');
    bool header_ok = header.size() == columns.size();
    for (std::size_t i = 0; header_ok && i < columns.size(); ++i) header_ok = header[i] == columns[i];
    if (!header_ok) {
        std::string expected;
        for (const auto& c : columns) expected += (expected.empty() ? "" : ",") + c;
        throw ValidationError("expected header '" + expected + "', got '" + std::string(lines.front().second) + "'");
    }
    std::vector<std::vector<double>> out(columns.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto cells = split(line, ',');
        if (cells.size() != columns.size()) {
            throw ValidationError("line " + std::to_string(number) + ": expected " + std::to_string(columns.size()) +
                                  " fields, got " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) out[c].push_back(parse_cell(cells[c], number));
    }
    return out;
}

void Summary::add(std::string key, double value) { entries_.emplace_back(std::move(key), format_number(value)); }

void Summary::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

std::string Summary::str() const {
    std::string out;
    for (const auto& [key, value] : entries_) out += key + "=" + value + "\n";
    return out;
}

}  // namespace fracctl::cli
