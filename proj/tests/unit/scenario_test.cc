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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "scenario.h"

namespace swapsim::scenario {
namespace {

namespace fs = std::filesystem;

RunResult run_text(std::string_view text) {
    return run(parse_config(text));
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / fmt::format("swapsim_test_{}", ::getpid());
    fs::create_directories(dir);
    return dir;
}

std::size_t column(const Report &report, std::string_view name) {
    for (std::size_t i = 0; i < report.columns.size(); i++) {
        if (report.columns[i] == name) {
            return i;
        }
    }
    ADD_FAILURE() << "no column " << name;
    return 0;
}

double number(const Report &report, std::size_t row, std::string_view name) {
    return std::get<double>(report.rows.at(row).at(column(report, name)));
}

TEST(ParseConfig, KeyValueLinesWithComments) {
    RunConfig c = parse_config("# header\nscenario = swap-linear  # trailing\n\np_ab=0.01\np_cd=0.02,0.03\nformat=json\npath=/tmp/x\n");
    EXPECT_EQ(c.scenario, "swap-linear");
    ASSERT_EQ(c.parameters.size(), 2u);
    EXPECT_EQ(c.parameters[1].second, "0.02,0.03");
    EXPECT_EQ(c.format, Format::kJson);
    EXPECT_EQ(c.path, "/tmp/x");
    EXPECT_EQ(parse_config(c.canonical_text()).parameters, c.parameters);
}

TEST(ParseConfig, Errors) {
    EXPECT_THROW(parse_config("p=0.1\n"), ConfigError);
    EXPECT_THROW(parse_config("scenario=swap-linear\nnot a pair\n"), ConfigError);
    EXPECT_THROW(parse_config("scenario=swap-linear\np=1\np=2\n"), ConfigError);
    EXPECT_THROW(parse_config("scenario=swap-linear\nbad-key=1\n"), ConfigError);
    EXPECT_THROW(parse_config("scenario=swap-linear\np=\n"), ConfigError);
    EXPECT_THROW(parse_config("scenario=swap-linear\nformat=xml\n"), ConfigError);
}

TEST(Run, UnknownScenarioIsConfigError) {
    RunResult r = run_text("scenario=unknown-name\n");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.message.find("unknown-name"), std::string::npos);
}

TEST(Run, UnknownKeyIsNamed) {
    RunResult r = run_text("scenario=swap-linear\np=0.01\ncoupling=0.1\n");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.message.find("'coupling'"), std::string::npos);
}

TEST(Run, MissingRequiredKeyIsNamed) {
    RunResult r = run_text("scenario=swap-sfg\np=0.01\n");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.message.find("eta_sfg"), std::string::npos);
}

TEST(Run, OutOfRangeValueIsConfigError) {
    EXPECT_EQ(run_text("scenario=swap-linear\np=0.5\n").exit_code, 2);
    EXPECT_EQ(run_text("scenario=swap-linear\np=abc\n").exit_code, 2);
    EXPECT_EQ(run_text("scenario=optimize-sixphoton\neta=1.5\n").exit_code, 2);
}

TEST(Run, TruncationIsRuntimeError) {
    RunResult r = run_text("scenario=swap-linear\np=0.01\ntotal_cutoff=4\n");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.message.find("truncation"), std::string::npos);
    EXPECT_EQ(run_text("scenario=swap-linear\np=0.01\ntotal_cutoff=4\nallow_truncation=true\n").exit_code, 0);
}

TEST(Run, SwapLinearReportsHalfFidelity) {
    RunResult r = run_text("scenario=swap-linear\np_ab=0.01\np_cd=0.01\n");
    ASSERT_EQ(r.exit_code, 0) << r.message;
    EXPECT_NEAR(number(*r.report, 0, "F"), 0.5, 3 * 0.01);
    EXPECT_EQ(std::get<long long>(r.report->rows[0][column(*r.report, "truncation_events")]), 0);
}

TEST(Run, SweepRowsAreSorted) {
    RunResult r = run_text("scenario=swap-linear\np_ab=0.02,0.005\np_cd=0.01,0.005\n");
    ASSERT_EQ(r.exit_code, 0) << r.message;
    ASSERT_EQ(r.report->rows.size(), 4u);
    EXPECT_EQ(number(*r.report, 0, "p_ab"), 0.005);
    EXPECT_EQ(number(*r.report, 0, "p_cd"), 0.005);
    EXPECT_EQ(number(*r.report, 1, "p_cd"), 0.01);
    EXPECT_EQ(number(*r.report, 3, "p_ab"), 0.02);
}

TEST(Run, SfgEfficiencyHasRatioColumn) {
    RunResult r = run_text("scenario=sfg-efficiency\ndevice=measured\n");
    ASSERT_EQ(r.exit_code, 0) << r.message;
    const double eta = number(*r.report, 0, "eta_sfg_th");
    EXPECT_NEAR(eta, 2.26e-8, 0.01e-8);
    EXPECT_NEAR(number(*r.report, 0, "ratio_to_quoted"), eta / 1e-8, 1e-12);
}

TEST(Run, CustomDeviceNeedsEveryParameter) {
    EXPECT_EQ(run_text("scenario=sfg-efficiency\neta_hat_pct_per_W_cm2=15\n").exit_code, 2);
    RunResult r = run_text("scenario=sfg-efficiency\neta_hat_pct_per_W_cm2=15\ndelta_nu_hat_GHz_cm=300\nlength_cm=2.6\nwavelength_nm=1557\ntbp=0.66\n");
    ASSERT_EQ(r.exit_code, 0) << r.message;
    EXPECT_NEAR(number(*r.report, 0, "eta_sfg_th"), 2.26e-8, 0.01e-8);
}

TEST(Run, DiqkdBitsOnlyWithModel) {
    RunResult heralds = run_text("scenario=diqkd-rate\n");
    ASSERT_EQ(heralds.exit_code, 0) << heralds.message;
    EXPECT_EQ(heralds.report->columns.size(), 4u);
    EXPECT_NEAR(number(*heralds.report, 0, "heralds_per_min"), 91, 0.2 * 91);

    RunResult bits = run_text("scenario=diqkd-rate\nkey_fraction_model=constant\nbits_per_herald=0.077\n");
    ASSERT_EQ(bits.exit_code, 0) << bits.message;
    EXPECT_NEAR(number(*bits.report, 0, "bits_per_min"), 0.077 * number(*bits.report, 0, "heralds_per_min"), 1e-12);
    EXPECT_EQ(run_text("scenario=diqkd-rate\nkey_fraction_model=constant\n").exit_code, 2);
}

TEST(Run, RequiredSfgFromOptimizer) {
    RunResult r = run_text("scenario=required-sfg\n");
    ASSERT_EQ(r.exit_code, 0) << r.message;
    EXPECT_NEAR(number(*r.report, 0, "P_target"), 2.56e-12, 0.01e-12);
}

TEST(Run, EveryScenarioRunsWithDefaults) {
    const std::map<std::string, std::string> extra{{"swap-linear", "p=0.01\n"}, {"swap-sfg", "p=0.01\neta_sfg=1e-4\n"}};
    for (const auto &info : scenarios()) {
        std::string text = fmt::format("scenario={}\n", info.name);
        if (auto it = extra.find(std::string(info.name)); it != extra.end()) {
            text += it->second;
        }
        RunResult r = run_text(text);
        EXPECT_EQ(r.exit_code, 0) << info.name << ": " << r.message;
        ASSERT_TRUE(r.report.has_value());
        EXPECT_FALSE(r.report->rows.empty()) << info.name;
        for (Format f : {Format::kCsv, Format::kJson, Format::kTable}) {
            EXPECT_FALSE(render(*r.report, f).empty());
        }
    }
}

TEST(Csv, RoundTripReproducesValues) {
    for (std::string text : {"scenario=swap-linear\np=0.005,0.01\n", "scenario=swap-sfg\np=0.01\neta_sfg=1e-4\n", "scenario=sfg-efficiency\n",
                             "scenario=optimize-sixphoton\neta=0.6\n", "scenario=diqkd-rate\ndistance_km=0,10\n", "scenario=fig4-theory\nphotons_points=4\n"}) {
        RunResult first = run_text(text);
        ASSERT_EQ(first.exit_code, 0) << first.message;
        const std::string csv = to_csv(*first.report);
        ParsedCsv parsed = parse_csv(csv);
        EXPECT_EQ(parsed.columns, first.report->columns);
        RunResult again = run(parsed.config);
        ASSERT_EQ(again.exit_code, 0) << again.message;
        EXPECT_EQ(to_csv(*again.report), csv) << text;
        for (std::size_t r = 0; r < parsed.rows.size(); r++) {
            for (std::size_t c = 0; c < parsed.columns.size(); c++) {
                if (const double *d = std::get_if<double>(&first.report->rows[r][c]); d && !std::isnan(*d)) {
                    EXPECT_EQ(std::stod(parsed.rows[r][c]), *d);
                }
            }
        }
    }
}

TEST(Csv, ScientificNotationWithEnoughDigits) {
    RunResult r = run_text("scenario=sfg-efficiency\ndevice=measured\n");
    const std::string csv = to_csv(*r.report);
    EXPECT_NE(csv.find("2.2616"), std::string::npos);
    EXPECT_NE(csv.find("e-08"), std::string::npos);
}

TEST(Json, Structure) {
    RunResult r = run_text("scenario=swap-linear\np=0.01\n");
    auto doc = nlohmann::json::parse(to_json(*r.report));
    EXPECT_EQ(doc["scenario"], "swap-linear");
    EXPECT_EQ(doc["config"]["p"], "0.01");
    EXPECT_NEAR(doc["rows"][0]["F"].get<double>(), 0.5, 0.03);
}

TEST(Fig4, ConstantTheoryLineAndAnnotation) {
    const auto &device = analytic::catalog_entry("measured").device;
    std::vector<double> photons{0.5, 0.01, 0.1};
    Report report = emit_fig4_theory(device, photons);
    ASSERT_EQ(report.rows.size(), 3u);
    EXPECT_EQ(number(report, 0, "photons_per_mode"), 0.01);
    for (std::size_t i = 0; i < report.rows.size(); i++) {
        EXPECT_EQ(number(report, i, "eta_sfg_th"), number(report, 0, "eta_sfg_th"));
        EXPECT_EQ(number(report, i, "eta_sfg_meas"), 1.2e-8);
    }
}

TEST(Fig4, EmptyRangeIsHeaderOnly) {
    Report report = emit_fig4_theory(analytic::catalog_entry("measured").device, {});
    ParsedCsv parsed = parse_csv(to_csv(report));
    EXPECT_EQ(parsed.columns.size(), 3u);
    EXPECT_TRUE(parsed.rows.empty());
    RunResult viaConfig = run_text("scenario=fig4-theory\nphotons_points=0\n");
    ASSERT_EQ(viaConfig.exit_code, 0) << viaConfig.message;
    EXPECT_TRUE(viaConfig.report->rows.empty());
}

TEST(Output, WrittenAtomically) {
    fs::path dir = scratch_dir();
    fs::path out = dir / "report.csv";
    RunConfig config = parse_config("scenario=sfg-efficiency\n");
    config.path = out.string();
    RunResult r = run(config);
    ASSERT_EQ(r.exit_code, 0) << r.message;
    EXPECT_EQ(read_file(out), to_csv(*r.report));
    EXPECT_FALSE(fs::exists(dir / "report.csv.tmp"));

    RunConfig broken = config;
    broken.path = (dir / "missing" / "report.csv").string();
    EXPECT_EQ(run(broken).exit_code, 1);
    fs::remove_all(dir);
}

int run_cli(const std::string &args) {
    const int status = std::system(fmt::format("{} {} > /dev/null 2>&1", SWAPSIM_CLI_PATH, args).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodesAndOutput) {
    fs::path dir = scratch_dir();
    auto write = [&](const std::string &name, const std::string &text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    EXPECT_EQ(run_cli(fmt::format("run --config {}", write("ok.cfg", "scenario=swap-linear\np=0.01\n"))), 0);
    EXPECT_EQ(run_cli(fmt::format("run --config {}", write("bad.cfg", "scenario=unknown-name\n"))), 2);
    EXPECT_EQ(run_cli(fmt::format("run --config {}", write("trunc.cfg", "scenario=swap-linear\np=0.01\ntotal_cutoff=4\n"))), 1);
    EXPECT_EQ(run_cli(fmt::format("run --config {}", (dir / "absent.cfg").string())), 2);
    EXPECT_EQ(run_cli("list-scenarios"), 0);
    EXPECT_EQ(run_cli("catalog"), 0);
    EXPECT_EQ(run_cli("bogus"), 2);

    const fs::path out = dir / "out.json";
    EXPECT_EQ(run_cli(fmt::format("run --config {} --out {} --format json", (dir / "ok.cfg").string(), out.string())), 0);
    auto doc = nlohmann::json::parse(read_file(out));
    EXPECT_EQ(doc["scenario"], "swap-linear");
    fs::remove_all(dir);
}

}  // namespace
}  // namespace swapsim::scenario
