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

// File plumbing for the command-line tool: atomic writes, trace CSV files,
// two-column data files and key=value summaries.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracctl/loopsim.hpp"

namespace fracctl::cli {

inline constexpr std::string_view trace_header = "t,w,w_star,e,u,y";

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

// Writes to a temporary file in the same directory, then renames it over
// `path`. Throws an io Error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

std::string trace_to_csv(const loop::SimulationTrace& trace);
loop::SimulationTrace trace_from_csv(std::string_view text);

// Numeric CSV with a header row naming exactly `columns`. Blank lines are
// skipped. Returns one vector per column.
std::vector<std::vector<double>> read_columns(std::string_view text, const std::vector<std::string>& columns);

// Plain-text "key=value" lines in insertion order.
class Summary {
public:
    void add(std::string key, double value);
    void add(std::string key, std::string value);

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace fracctl::cli
