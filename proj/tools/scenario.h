// Copyright 2026 The swapsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPSIM_TOOLS_SCENARIO_H
#define SWAPSIM_TOOLS_SCENARIO_H

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "swapsim/analytic.h"

namespace swapsim::scenario {

/// Bad or incomplete configuration. Maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A scenario ran but produced a result it refuses to report, such as a
/// nonzero truncation loss. Maps to exit code 1.
struct ScenarioFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { kCsv, kJson, kTable };

Format parse_format(std::string_view name);
std::string_view format_name(Format format);

struct RunConfig {
    std::string scenario;
    /// Scenario parameters in file order. Output keys are kept separately.
    std::vector<std::pair<std::string, std::string>> parameters;
    Format format = Format::kCsv;
    /// Empty means standard output.
    std::string path;

    /// `scenario=` line followed by the parameters, one per line. Parsing this
    /// text yields the same scenario and parameters.
    std::string canonical_text() const;
};

/// Flat key=value lines; '#' starts a comment. Duplicate keys and malformed
/// lines throw ConfigError naming the line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string &path);

using Cell = std::variant<double, long long, std::string>;

struct Report {
    std::string scenario;
    std::string config_text;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> notes;
};

std::string to_csv(const Report &report);
std::string to_json(const Report &report);
std::string to_table(const Report &report);
std::string render(const Report &report, Format format);

/// A CSV report read back: the embedded config plus the raw cells.
struct ParsedCsv {
    RunConfig config;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};
ParsedCsv parse_csv(std::string_view text);

struct ScenarioInfo {
    std::string_view name;
    std::string_view summary;
};
std::span<const ScenarioInfo> scenarios();

/// Runs one scenario. Throws ConfigError or ScenarioFailure (or anything the
/// library throws while computing).
Report run_scenario(const RunConfig &config);

struct RunResult {
    int exit_code = 0;
    std::optional<Report> report;
    std::string message;
};

/// run_scenario with errors mapped to exit codes. When `config.path` is set
/// the rendered report is written there atomically.
RunResult run(const RunConfig &config);

/// Constant efficiency line against photons per mode with the measured value
/// as an annotation column.
Report emit_fig4_theory(const analytic::DeviceSpec &device, std::span<const double> photons_per_mode);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomically(const std::string &path, std::string_view contents);

/// The built-in device catalog as printable text.
std::string catalog_text();

}  // namespace swapsim::scenario

#endif
