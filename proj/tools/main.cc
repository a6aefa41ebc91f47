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

#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scenario.h"

namespace sc = swapsim::scenario;

namespace {

int run_command(const std::string &config_path, const std::string &out, const std::string &format) {
    sc::RunConfig config;
    try {
        config = sc::load_config(config_path);
        if (!out.empty()) {
            config.path = out;
        }
        if (!format.empty()) {
            config.format = sc::parse_format(format);
        }
    } catch (const sc::ConfigError &e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return 2;
    }
    sc::RunResult result = sc::run(config);
    if (result.exit_code != 0) {
        fmt::print(stderr, "{}\n", result.message);
        return result.exit_code;
    }
    if (config.path.empty()) {
        fmt::print("{}", sc::render(*result.report, config.format));
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Entanglement-swapping scenario runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::string format;
    CLI::App *run = app.add_subcommand("run", "Run the scenario described by a config file");
    run->add_option("--config", config_path, "key=value scenario file")->required();
    run->add_option("--out", out, "Write the report here instead of standard output");
    run->add_option("--format", format, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));

    CLI::App *list = app.add_subcommand("list-scenarios", "Print the scenario names");
    CLI::App *catalog = app.add_subcommand("catalog", "Print the built-in waveguide devices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*run) {
        return run_command(config_path, out, format);
    }
    if (*list) {
        for (const auto &info : sc::scenarios()) {
            fmt::print("{:<20} {}\n", info.name, info.summary);
        }
        return 0;
    }
    if (*catalog) {
        fmt::print("{}", sc::catalog_text());
        return 0;
    }
    return 2;
}
