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

#include "scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "swapsim/optimizer.h"
#include "swapsim/swap.h"

namespace swapsim::scenario {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

struct Bounds {
    double low;
    double high;
    bool low_open = false;
};

constexpr Bounds kPairProbability{0, kMaxPairProbability, true};
constexpr Bounds kEfficiency{0, 1, true};
constexpr Bounds kFidelity{0, 1, false};
constexpr Bounds kPositive{0, 1e300, true};
constexpr Bounds kNonNegative{0, 1e300, false};

/// Typed access to the parameter block. Every key a scenario reads is marked;
/// `finish` rejects whatever was never read.
class Params {
   public:
    explicit Params(const RunConfig &config) : scenario_(config.scenario) {
        for (const auto &[key, value] : config.parameters) {
            values_.emplace(key, value);
        }
    }

    bool has(const std::string &key) const {
        return values_.contains(key);
    }

    std::vector<double> numbers(const std::string &key, std::optional<std::vector<double>> fallback, Bounds bounds) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (!fallback) {
                throw ConfigError(fmt::format("scenario '{}' requires key '{}'", scenario_, key));
            }
            return *fallback;
        }
        used_.insert(key);
        std::vector<double> out;
        for (auto part : split(it->second, ',')) {
            auto value = parse_number(part);
            if (!value) {
                throw ConfigError(fmt::format("key '{}': '{}' is not a number", key, trim(part)));
            }
            const bool low_ok = bounds.low_open ? *value > bounds.low : *value >= bounds.low;
            if (!low_ok || *value > bounds.high) {
                throw ConfigError(fmt::format("key '{}': {} is outside {}{}, {}]", key, *value, bounds.low_open ? "(" : "[", bounds.low, bounds.high));
            }
            out.push_back(*value);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    double number(const std::string &key, std::optional<double> fallback, Bounds bounds) {
        auto list = numbers(key, fallback ? std::optional<std::vector<double>>(std::vector<double>{*fallback}) : std::nullopt, bounds);
        if (list.size() != 1) {
            throw ConfigError(fmt::format("key '{}' takes a single value", key));
        }
        return list.front();
    }

    int integer(const std::string &key, int fallback, int low, int high) {
        if (!has(key)) {
            return fallback;
        }
        const double value = number(key, std::nullopt, Bounds{static_cast<double>(low), static_cast<double>(high)});
        if (value != std::floor(value)) {
            throw ConfigError(fmt::format("key '{}' must be an integer", key));
        }
        return static_cast<int>(value);
    }

    bool flag(const std::string &key, bool fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        used_.insert(key);
        const std::string_view v = it->second;
        if (v == "true" || v == "yes" || v == "1") {
            return true;
        }
        if (v == "false" || v == "no" || v == "0") {
            return false;
        }
        throw ConfigError(fmt::format("key '{}': expected true or false, got '{}'", key, v));
    }

    std::vector<std::string> words(const std::string &key, std::optional<std::vector<std::string>> fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            if (!fallback) {
                throw ConfigError(fmt::format("scenario '{}' requires key '{}'", scenario_, key));
            }
            return *fallback;
        }
        used_.insert(key);
        std::vector<std::string> out;
        for (auto part : split(it->second, ',')) {
            if (trim(part).empty()) {
                throw ConfigError(fmt::format("key '{}' has an empty list entry", key));
            }
            out.emplace_back(trim(part));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::string word(const std::string &key, std::optional<std::string> fallback) {
        auto list = words(key, fallback ? std::optional<std::vector<std::string>>(std::vector<std::string>{*fallback}) : std::nullopt);
        if (list.size() != 1) {
            throw ConfigError(fmt::format("key '{}' takes a single value", key));
        }
        return list.front();
    }

    void finish() const {
        for (const auto &[key, value] : values_) {
            if (!used_.contains(key)) {
                throw ConfigError(fmt::format("unknown key '{}' for scenario '{}'", key, scenario_));
            }
        }
    }

   private:
    std::string scenario_;
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

std::vector<std::pair<double, double>> pair_probabilities(Params &params) {
    std::vector<std::pair<double, double>> out;
    if (params.has("p")) {
        if (params.has("p_ab") || params.has("p_cd")) {
            throw ConfigError("key 'p' sets p_ab and p_cd together; give either 'p' or both 'p_ab' and 'p_cd'");
        }
        for (double p : params.numbers("p", std::nullopt, kPairProbability)) {
            out.emplace_back(p, p);
        }
        return out;
    }
    auto ab = params.numbers("p_ab", std::nullopt, kPairProbability);
    auto cd = params.numbers("p_cd", std::nullopt, kPairProbability);
    for (double x : ab) {
        for (double y : cd) {
            out.emplace_back(x, y);
        }
    }
    return out;
}

SwapSetup swap_setup(Params &params) {
    SwapSetup setup;
    setup.max_pairs = params.integer("max_pairs", 2, 1, 7);
    setup.per_mode_cutoff = params.integer("per_mode_cutoff", 0, 0, ModeSet::kMaxPerModeCutoff);
    setup.total_cutoff = params.integer("total_cutoff", 0, 0, 64);
    setup.coherent_pair_number = params.flag("coherent_pair_number", false);
    return setup;
}

void check_truncation(const Truncation &t, bool allowed, double p_ab, double p_cd) {
    if (!t.is_zero() && !allowed) {
        throw ScenarioFailure(fmt::format(
            "truncation dropped {} components (weight {:.3e}) at p_ab={}, p_cd={}; raise total_cutoff/per_mode_cutoff or set allow_truncation=true",
            t.events,
            t.lost_weight,
            p_ab,
            p_cd));
    }
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Report make_report(const RunConfig &config, std::vector<std::string> columns) {
    Report report;
    report.scenario = config.scenario;
    report.config_text = config.canonical_text();
    report.columns = std::move(columns);
    return report;
}

Report run_swap_linear(const RunConfig &config) {
    Params params(config);
    auto probabilities = pair_probabilities(params);
    SwapSetup setup = swap_setup(params);
    const double eta_d = params.number("eta_d", 1.0, kEfficiency);
    const bool allow_truncation = params.flag("allow_truncation", false);
    params.finish();

    Report report = make_report(config, {"p_ab", "p_cd", "P", "F", "w_aa", "w_dd", "w_signal", "P_leading", "F_leading", "truncation_events"});
    for (auto [p_ab, p_cd] : probabilities) {
        setup.p_ab = p_ab;
        setup.p_cd = p_cd;
        LinearSwapResult r = simulate_linear_swap(setup, DetectorModel::threshold(eta_d));
        check_truncation(r.truncation, allow_truncation, p_ab, p_cd);
        auto leading = analytic::linear_swap_state_weights(p_ab, p_cd);
        report.rows.push_back({p_ab,
                               p_cd,
                               r.probability,
                               r.fidelity,
                               r.weight_aa,
                               r.weight_dd,
                               r.weight_signal,
                               leading.probability(),
                               leading.fidelity(),
                               static_cast<long long>(r.truncation.events)});
    }
    return report;
}

Report run_swap_sfg(const RunConfig &config) {
    Params params(config);
    auto probabilities = pair_probabilities(params);
    SwapSetup setup = swap_setup(params);
    std::vector<double> couplings;
    if (params.has("coupling")) {
        if (params.has("eta_sfg")) {
            throw ConfigError("give either 'eta_sfg' or 'coupling', not both");
        }
        couplings = params.numbers("coupling", std::nullopt, Bounds{0, std::numbers::pi / 2, true});
    } else {
        for (double e : params.numbers("eta_sfg", std::nullopt, kEfficiency)) {
            couplings.push_back(std::sqrt(e));
        }
    }
    SfgLosses losses;
    losses.eta_c = params.number("eta_c", 1.0, kEfficiency);
    const double eta_d = params.number("eta_d", 1.0, kEfficiency);
    losses.eta_k = losses.eta_c * eta_d;
    const bool allow_truncation = params.flag("allow_truncation", false);
    params.finish();

    Report report = make_report(config, {"p_ab", "p_cd", "eta_sfg", "P", "P_plus", "P_minus", "F", "P_leading", "F_leading", "truncation_events"});
    std::map<double, std::vector<std::pair<double, double>>> symmetric_points;
    for (auto [p_ab, p_cd] : probabilities) {
        for (double g : couplings) {
            setup.p_ab = p_ab;
            setup.p_cd = p_cd;
            SfgParams sfg;
            sfg.coupling = g;
            SfgSwapResult r = simulate_sfg_swap(setup, sfg, losses);
            check_truncation(r.truncation, allow_truncation, p_ab, p_cd);
            const double eta_sfg = g * g;
            double p_leading = kNaN;
            double f_leading = kNaN;
            if (p_ab == p_cd) {
                auto figures = analytic::sfg_swap_figures(p_ab, losses.eta_c, losses.eta_k, eta_sfg);
                p_leading = figures.probability;
                f_leading = figures.fidelity.value;
                symmetric_points[eta_sfg].emplace_back(p_ab, r.fidelity);
            }
            report.rows.push_back({p_ab, p_cd, eta_sfg, r.probability, r.probability_plus, r.probability_minus, r.fidelity, p_leading, f_leading, static_cast<long long>(r.truncation.events)});
        }
    }
    for (const auto &[eta_sfg, points] : symmetric_points) {
        if (points.size() >= 2) {
            report.notes.emplace_back(fmt::format("c_fit[eta_sfg={:.6e}]", eta_sfg), fmt::format("{:.16e}", fit_infidelity_slope(points)));
        }
    }
    return report;
}

OptimizationResult optimize(double eta, double f_min, const SixPhotonSearch &search) {
    OptimizationResult r = optimize_sixphoton(eta, f_min, search);
    if (!r.feasible) {
        throw ScenarioFailure(fmt::format("no six-photon operating point reaches F_min={} at eta={}", f_min, eta));
    }
    return r;
}

SixPhotonSearch search_settings(Params &params) {
    SixPhotonSearch search;
    search.p_min = params.number("p_min", search.p_min, kPositive);
    search.p_max = params.number("p_max", search.p_max, Bounds{0, analytic::kSixPhotonMaxP, true});
    search.p_points = params.integer("p_points", search.p_points, 2, 100000);
    search.s_points = params.integer("s_points", search.s_points, 1, 100000);
    if (search.p_min >= search.p_max) {
        throw ConfigError("key 'p_min' must be below 'p_max'");
    }
    return search;
}

Report run_optimize_sixphoton(const RunConfig &config) {
    Params params(config);
    auto etas = params.numbers("eta", std::vector<double>{0.6}, kEfficiency);
    auto f_mins = params.numbers("F_min", std::vector<double>{0.9}, kFidelity);
    SixPhotonSearch search = search_settings(params);
    params.finish();

    Report report = make_report(config, {"eta", "F_min", "p", "theta", "cos2_theta", "F", "P", "boundary_active", "refinement_steps", "evaluations"});
    for (double eta : etas) {
        for (double f_min : f_mins) {
            OptimizationResult r = optimize(eta, f_min, search);
            report.rows.push_back({eta,
                                   f_min,
                                   r.p,
                                   r.theta,
                                   r.cos2_theta,
                                   r.fidelity,
                                   r.success,
                                   std::string(r.boundary_active ? "true" : "false"),
                                   static_cast<long long>(r.refinement_steps),
                                   static_cast<long long>(r.evaluations)});
        }
    }
    return report;
}

Report run_required_sfg(const RunConfig &config) {
    Params params(config);
    const double eta_c = params.number("eta_c", std::sqrt(0.6), kEfficiency);
    const double eta_d = params.number("eta_d", std::sqrt(0.6), kEfficiency);
    const double f_min = params.number("F_min", 0.9, Bounds{0, 1, true});
    std::vector<double> targets;
    bool from_optimizer = false;
    if (params.has("P_target")) {
        targets = params.numbers("P_target", std::nullopt, kPositive);
    } else {
        from_optimizer = true;
    }
    SixPhotonSearch search = search_settings(params);
    params.finish();

    if (from_optimizer) {
        targets.push_back(optimize(eta_c * eta_d, f_min, search).success);
        std::sort(targets.begin(), targets.end());
    }
    Report report = make_report(config, {"eta_c", "eta_d", "F_min", "P_target", "p", "eta_sfg"});
    for (double target : targets) {
        RequiredEfficiency r = required_sfg_efficiency(target, f_min, eta_c, eta_d);
        report.rows.push_back({eta_c, eta_d, f_min, target, r.p, r.eta_sfg_min});
    }
    report.notes.emplace_back("P_target_source", from_optimizer ? "six-photon optimum at eta=eta_c*eta_d" : "config");
    return report;
}

Report run_heralded_compare(const RunConfig &config) {
    Params params(config);
    const double eta_c = params.number("eta_c", std::sqrt(0.6), kEfficiency);
    const double eta_d = params.number("eta_d", std::sqrt(0.6), kEfficiency);
    const double f_min = params.number("F_min", 0.9, Bounds{0, 1, true});
    std::optional<double> eta_sfg;
    if (params.has("eta_sfg")) {
        eta_sfg = params.number("eta_sfg", std::nullopt, kEfficiency);
    }
    SixPhotonSearch search = search_settings(params);
    params.finish();

    const double eta = eta_c * eta_d;
    OptimizationResult six = optimize(eta, f_min, search);
    RequiredEfficiency needed = required_sfg_efficiency(six.success, f_min, eta_c, eta_d);

    Report report = make_report(config, {"scheme", "eta", "p", "cos2_theta", "F", "P", "eta_sfg"});
    report.rows.push_back({std::string("sfg-break-even"), eta, needed.p, kNaN, 1 - 3 * needed.p, six.success, needed.eta_sfg_min});
    if (eta_sfg) {
        auto figures = analytic::sfg_swap_figures(needed.p, eta_c, eta, *eta_sfg);
        report.rows.push_back({std::string("sfg-configured"), eta, needed.p, kNaN, figures.fidelity.value, figures.probability, *eta_sfg});
    }
    report.rows.push_back({std::string("six-photon"), eta, six.p, six.cos2_theta, six.fidelity, six.success, kNaN});
    return report;
}

std::vector<analytic::DeviceSpec> devices(Params &params, std::vector<std::string> default_names) {
    const std::vector<std::string> custom_keys{"eta_hat_pct_per_W_cm2", "delta_nu_hat_GHz_cm", "length_cm", "tbp"};
    const bool custom = std::any_of(custom_keys.begin(), custom_keys.end(), [&](const std::string &k) {
        return params.has(k);
    });
    std::vector<analytic::DeviceSpec> out;
    if (custom) {
        if (params.has("device")) {
            throw ConfigError("key 'device' cannot be combined with explicit device parameters");
        }
        analytic::DeviceSpec d;
        d.name = "custom";
        d.eta_hat = {params.number("eta_hat_pct_per_W_cm2", std::nullopt, kPositive)};
        d.delta_nu_hat = {params.number("delta_nu_hat_GHz_cm", std::nullopt, kPositive)};
        d.length = {params.number("length_cm", std::nullopt, kPositive)};
        d.wavelength = {params.number("wavelength_nm", std::nullopt, kPositive)};
        d.tbp = params.number("tbp", std::nullopt, Bounds{0.3, 1.5});
        out.push_back(d);
        return out;
    }
    for (const auto &name : params.words("device", default_names)) {
        try {
            out.push_back(analytic::catalog_entry(name).device);
        } catch (const std::invalid_argument &) {
            throw ConfigError(fmt::format("key 'device': unknown device '{}'", name));
        }
    }
    if (params.has("wavelength_nm")) {
        const double nm = params.number("wavelength_nm", std::nullopt, kPositive);
        for (auto &d : out) {
            d.wavelength = {nm};
        }
    }
    return out;
}

double quoted_efficiency(const std::string &name) {
    for (const auto &entry : analytic::device_catalog()) {
        if (entry.device.name == name) {
            return entry.quoted_efficiency;
        }
    }
    return kNaN;
}

Report run_sfg_efficiency(const RunConfig &config) {
    Params params(config);
    std::vector<std::string> names;
    for (const auto &entry : analytic::device_catalog()) {
        names.push_back(entry.device.name);
    }
    auto list = devices(params, names);
    params.finish();

    Report report = make_report(config,
                                {"device",
                                 "eta_hat_pct_per_W_cm2",
                                 "delta_nu_hat_GHz_cm",
                                 "length_cm",
                                 "wavelength_nm",
                                 "tbp",
                                 "delta_nu_Hz",
                                 "P_pump_W",
                                 "eta_sfg_th",
                                 "quoted_eta_sfg",
                                 "ratio_to_quoted"});
    for (const auto &d : list) {
        d.validate();
        auto r = analytic::sfg_efficiency_theory(d);
        const double quoted = quoted_efficiency(d.name);
        report.rows.push_back({d.name, d.eta_hat.value, d.delta_nu_hat.value, d.length.value, d.wavelength.value, d.tbp, r.bandwidth_hz, r.pump_power_w, r.efficiency, quoted, r.efficiency / quoted});
    }
    return report;
}

Report run_fig4_theory(const RunConfig &config) {
    Params params(config);
    auto list = devices(params, {"measured"});
    if (list.size() != 1) {
        throw ConfigError("key 'device' takes a single device for fig4-theory");
    }
    std::vector<double> photons;
    if (params.has("photons_per_mode")) {
        photons = params.numbers("photons_per_mode", std::nullopt, kPositive);
    } else {
        const double low = params.number("photons_min", 1e-3, kPositive);
        const double high = params.number("photons_max", 1.0, kPositive);
        const int points = params.integer("photons_points", 31, 0, 100000);
        if (low > high) {
            throw ConfigError("key 'photons_min' must not exceed 'photons_max'");
        }
        for (int i = 0; i < points; i++) {
            const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            photons.push_back(low * std::pow(high / low, t));
        }
    }
    params.finish();

    Report report = emit_fig4_theory(list.front(), photons);
    report.config_text = config.canonical_text();
    return report;
}

Report run_diqkd_rate(const RunConfig &config) {
    Params params(config);
    LinkScenario base;
    auto distances = params.numbers("distance_km", std::vector<double>{base.distance_km}, kNonNegative);
    base.attenuation_db_per_km = params.number("atten_dB_per_km", base.attenuation_db_per_km, kNonNegative);
    base.repetition_rate_hz = params.number("rep_rate", base.repetition_rate_hz, kNonNegative);
    base.eta_c = params.number("eta_c", base.eta_c, kEfficiency);
    base.eta_d = params.number("eta_d", base.eta_d, kEfficiency);
    base.eta_sfg = params.number("eta_sfg", base.eta_sfg, kEfficiency);
    base.p_ab = params.number("p_ab", base.p_ab, kPairProbability);
    base.p_cd = params.number("p_cd", base.p_cd, kPairProbability);
    base.include_alice_detection = params.flag("include_alice_detection", false);
    const std::string model = params.word("key_fraction_model", std::string("none"));
    if (model == "constant") {
        base.key_fraction = constant_key_fraction(params.number("bits_per_herald", std::nullopt, kNonNegative));
    } else if (model == "chsh-werner") {
        base.key_fraction = chsh_werner_key_fraction();
    } else if (model != "none") {
        throw ConfigError(fmt::format("key 'key_fraction_model': unknown model '{}' (none, constant, chsh-werner)", model));
    }
    if (base.key_fraction) {
        base.key_fraction_name = model;
    }
    params.finish();

    std::vector<std::string> columns{"distance_km", "T", "heralds_per_pulse", "heralds_per_min"};
    if (base.key_fraction) {
        columns.insert(columns.end(), {"key_fraction", "bits_per_min"});
    }
    Report report = make_report(config, columns);
    for (double distance : distances) {
        LinkScenario link = base;
        link.distance_km = distance;
        DiqkdRate r = diqkd_rate(link);
        std::vector<Cell> row{distance, r.transmission, r.heralds_per_pulse, r.heralds_per_min};
        if (r.bits_per_min) {
            row.push_back(*r.key_fraction);
            row.push_back(*r.bits_per_min);
        }
        report.rows.push_back(std::move(row));
    }
    report.notes.emplace_back("loss_model",
                              base.include_alice_detection ? "fiber on B, eta_c^2 into the crystal, eta_c*eta_d on K and on Alice's photon"
                                                           : "fiber on B, eta_c^2 into the crystal, eta_c*eta_d on K");
    if (base.key_fraction) {
        report.notes.emplace_back("bits_per_min", fmt::format("model-dependent ({})", model));
    }
    return report;
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") {
        return Format::kCsv;
    }
    if (name == "json") {
        return Format::kJson;
    }
    if (name == "table") {
        return Format::kTable;
    }
    throw ConfigError(fmt::format("unknown output format '{}' (csv, json, table)", name));
}

std::string_view format_name(Format format) {
    switch (format) {
        case Format::kCsv:
            return "csv";
        case Format::kJson:
            return "json";
        case Format::kTable:
            return "table";
    }
    return "csv";
}

std::string RunConfig::canonical_text() const {
    std::string out = fmt::format("scenario={}\n", scenario);
    for (const auto &[key, value] : parameters) {
        out += fmt::format("{}={}\n", key, value);
    }
    return out;
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::set<std::string> seen;
    int line_number = 0;
    for (auto raw : split(text, '\n')) {
        line_number++;
        const auto hash = raw.find('#');
        std::string_view line = trim(raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("line {}: expected key=value, got '{}'", line_number, line));
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        const bool valid_key = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        });
        if (!valid_key) {
            throw ConfigError(fmt::format("line {}: invalid key '{}'", line_number, key));
        }
        if (value.empty()) {
            throw ConfigError(fmt::format("line {}: key '{}' has no value", line_number, key));
        }
        if (!seen.insert(key).second) {
            throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_number, key));
        }
        if (key == "scenario") {
            config.scenario = value;
        } else if (key == "format") {
            config.format = parse_format(value);
        } else if (key == "path") {
            config.path = value;
        } else {
            config.parameters.emplace_back(std::move(key), std::move(value));
        }
    }
    if (config.scenario.empty()) {
        throw ConfigError("missing key 'scenario'");
    }
    return config;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(fmt::format("cannot read config file '{}'", path));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

std::string csv_cell(const Cell &cell) {
    if (const double *d = std::get_if<double>(&cell)) {
        return std::isnan(*d) ? std::string("nan") : fmt::format("{:.16e}", *d);
    }
    if (const long long *i = std::get_if<long long>(&cell)) {
        return fmt::format("{}", *i);
    }
    return std::get<std::string>(cell);
}

std::string table_cell(const Cell &cell) {
    if (const double *d = std::get_if<double>(&cell)) {
        return std::isnan(*d) ? std::string("-") : fmt::format("{:.6g}", *d);
    }
    return csv_cell(cell);
}

}  // namespace

std::string to_csv(const Report &report) {
    std::string out = "# swapsim report\n";
    for (auto line : split(report.config_text, '\n')) {
        if (!line.empty()) {
            out += fmt::format("# config: {}\n", line);
        }
    }
    for (const auto &[key, value] : report.notes) {
        out += fmt::format("# note: {}={}\n", key, value);
    }
    out += fmt::format("{}\n", fmt::join(report.columns, ","));
    for (const auto &row : report.rows) {
        std::vector<std::string> cells;
        for (const auto &cell : row) {
            cells.push_back(csv_cell(cell));
        }
        out += fmt::format("{}\n", fmt::join(cells, ","));
    }
    return out;
}

std::string to_json(const Report &report) {
    nlohmann::ordered_json doc;
    doc["scenario"] = report.scenario;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto &[key, value] : parse_config(report.config_text).parameters) {
        config[key] = value;
    }
    doc["config"] = config;
    doc["columns"] = report.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : report.rows) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); i++) {
            std::visit(
                [&](const auto &v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        entry[report.columns[i]] = std::isnan(v) ? nlohmann::ordered_json() : nlohmann::ordered_json(v);
                    } else {
                        entry[report.columns[i]] = v;
                    }
                },
                row[i]);
        }
        rows.push_back(std::move(entry));
    }
    doc["rows"] = std::move(rows);
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (const auto &[key, value] : report.notes) {
        notes[key] = value;
    }
    doc["notes"] = std::move(notes);
    return doc.dump(2) + "\n";
}

std::string to_table(const Report &report) {
    std::vector<std::vector<std::string>> grid{report.columns};
    for (const auto &row : report.rows) {
        std::vector<std::string> cells;
        for (const auto &cell : row) {
            cells.push_back(table_cell(cell));
        }
        grid.push_back(std::move(cells));
    }
    std::vector<std::size_t> widths(report.columns.size(), 0);
    for (const auto &line : grid) {
        for (std::size_t i = 0; i < line.size(); i++) {
            widths[i] = std::max(widths[i], line[i].size());
        }
    }
    std::string out = fmt::format("scenario: {}\n", report.scenario);
    for (std::size_t r = 0; r < grid.size(); r++) {
        for (std::size_t i = 0; i < grid[r].size(); i++) {
            out += fmt::format("{}{:>{}}", i == 0 ? "" : "  ", grid[r][i], widths[i]);
        }
        out += '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : widths) {
                total += w + 2;
            }
            out += std::string(total > 2 ? total - 2 : 0, '-') + '\n';
        }
    }
    for (const auto &[key, value] : report.notes) {
        out += fmt::format("{}: {}\n", key, value);
    }
    return out;
}

std::string render(const Report &report, Format format) {
    switch (format) {
        case Format::kCsv:
            return to_csv(report);
        case Format::kJson:
            return to_json(report);
        case Format::kTable:
            return to_table(report);
    }
    return to_csv(report);
}

ParsedCsv parse_csv(std::string_view text) {
    constexpr std::string_view kConfigPrefix = "# config: ";
    std::string config_text;
    ParsedCsv parsed;
    bool header_seen = false;
    for (auto line : split(text, '\n')) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.starts_with('#')) {
            if (line.starts_with(kConfigPrefix)) {
                config_text += std::string(line.substr(kConfigPrefix.size())) + "\n";
            }
            continue;
        }
        std::vector<std::string> cells;
        for (auto cell : split(line, ',')) {
            cells.emplace_back(cell);
        }
        if (!header_seen) {
            parsed.columns = std::move(cells);
            header_seen = true;
        } else {
            if (cells.size() != parsed.columns.size()) {
                throw ConfigError(fmt::format("CSV row has {} cells, header has {}", cells.size(), parsed.columns.size()));
            }
            parsed.rows.push_back(std::move(cells));
        }
    }
    parsed.config = parse_config(config_text);
    return parsed;
}

namespace {

struct ScenarioEntry {
    ScenarioInfo info;
    std::function<Report(const RunConfig &)> run;
};

const std::vector<ScenarioEntry> &registry() {
    static const std::vector<ScenarioEntry> entries{
        {{"diqkd-rate", "heralds (and optionally bits) per minute of the SFG-heralded DI-QKD link"}, run_diqkd_rate},
        {{"fig4-theory", "theoretical SFG efficiency against photons per mode, with the measured value"}, run_fig4_theory},
        {{"heralded-compare", "six-photon heralded source against the SFG swap at its break-even efficiency"}, run_heralded_compare},
        {{"optimize-sixphoton", "six-photon operating point maximizing success at a fidelity floor"}, run_optimize_sixphoton},
        {{"required-sfg", "SFG efficiency needed to reach a target heralding probability"}, run_required_sfg},
        {{"sfg-efficiency", "waveguide SFG efficiency from device parameters"}, run_sfg_efficiency},
        {{"swap-linear", "exact simulation of the linear-optics Bell measurement swap"}, run_swap_linear},
        {{"swap-sfg", "exact simulation of the SFG Bell measurement swap"}, run_swap_sfg},
    };
    return entries;
}

}  // namespace

std::span<const ScenarioInfo> scenarios() {
    static const std::vector<ScenarioInfo> infos = [] {
        std::vector<ScenarioInfo> out;
        for (const auto &entry : registry()) {
            out.push_back(entry.info);
        }
        return out;
    }();
    return infos;
}

Report run_scenario(const RunConfig &config) {
    for (const auto &entry : registry()) {
        if (entry.info.name == config.scenario) {
            return entry.run(config);
        }
    }
    throw ConfigError(fmt::format("key 'scenario': unknown scenario '{}'", config.scenario));
}

RunResult run(const RunConfig &config) {
    RunResult result;
    try {
        result.report = run_scenario(config);
        if (!config.path.empty()) {
            write_atomically(config.path, render(*result.report, config.format));
        }
    } catch (const ConfigError &e) {
        result.report.reset();
        result.exit_code = 2;
        result.message = fmt::format("config error: {}", e.what());
    } catch (const std::exception &e) {
        result.report.reset();
        result.exit_code = 1;
        result.message = fmt::format("error: {}", e.what());
    }
    return result;
}

Report emit_fig4_theory(const analytic::DeviceSpec &device, std::span<const double> photons_per_mode) {
    device.validate();
    const double theory = analytic::sfg_efficiency_theory(device).efficiency;
    Report report;
    report.scenario = "fig4-theory";
    report.config_text = fmt::format("scenario=fig4-theory\neta_hat_pct_per_W_cm2={}\ndelta_nu_hat_GHz_cm={}\nlength_cm={}\nwavelength_nm={}\ntbp={}\n",
                                     device.eta_hat.value,
                                     device.delta_nu_hat.value,
                                     device.length.value,
                                     device.wavelength.value,
                                     device.tbp);
    report.columns = {"photons_per_mode", "eta_sfg_th", "eta_sfg_meas"};
    std::vector<double> sorted(photons_per_mode.begin(), photons_per_mode.end());
    std::sort(sorted.begin(), sorted.end());
    for (double n : sorted) {
        report.rows.push_back({n, theory, analytic::kMeasuredSfgEfficiency});
    }
    report.notes.emplace_back("device", device.name);
    return report;
}

void write_atomically(const std::string &path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path temporary = target;
    temporary += ".tmp";
    {
        std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(fmt::format("cannot write '{}'", temporary.string()));
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error(fmt::format("failed writing '{}'", temporary.string()));
        }
    }
    std::error_code ec;
    fs::rename(temporary, target, ec);
    if (ec) {
        fs::remove(temporary);
        throw std::runtime_error(fmt::format("cannot move report into '{}': {}", path, ec.message()));
    }
}

std::string catalog_text() {
    std::string out = fmt::format("{:<11} {:>14} {:>14} {:>8} {:>13} {:>5} {:>12}\n", "device", "eta_hat[%/Wcm2]", "dnu_hat[GHzcm]", "L[cm]", "lambda[nm]", "tbp", "quoted");
    for (const auto &entry : analytic::device_catalog()) {
        const auto &d = entry.device;
        out += fmt::format("{:<11} {:>15g} {:>14g} {:>8g} {:>13g} {:>5g} {:>12.2e}\n", d.name, d.eta_hat.value, d.delta_nu_hat.value, d.length.value, d.wavelength.value, d.tbp, entry.quoted_efficiency);
    }
    return out;
}

}  // namespace swapsim::scenario
