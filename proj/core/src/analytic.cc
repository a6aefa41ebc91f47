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

#include "swapsim/analytic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace swapsim::analytic {

namespace {

void require_probability(double value, const char *name) {
    if (!(value >= 0 && value < 1)) {
        throw std::invalid_argument(fmt::format("{} must be in [0, 1), got {}", name, value));
    }
}

void require_efficiency(double value, const char *name) {
    if (!(value >= 0 && value <= 1)) {
        throw std::invalid_argument(fmt::format("{} must be in [0, 1], got {}", name, value));
    }
}

void require_angle(double theta) {
    if (!(theta >= 0 && theta <= std::numbers::pi / 2)) {
        throw std::invalid_argument(fmt::format("theta must be in [0, pi/2], got {}", theta));
    }
}

BoundedValue bounded(double raw, bool outside_regime) {
    BoundedValue v;
    v.value = std::clamp(raw, 0.0, 1.0);
    v.clamped = v.value != raw;
    v.outside_regime = outside_regime;
    return v;
}

}  // namespace

LinearSwapWeights linear_swap_state_weights(double p_ab, double p_cd) {
    require_probability(p_ab, "p_ab");
    require_probability(p_cd, "p_cd");
    return {p_ab * p_ab / 16, p_cd * p_cd / 16, p_ab * p_cd / 8};
}

BoundedValue sixphoton_fidelity(double p, double theta, double eta) {
    require_probability(p, "p");
    require_angle(theta);
    require_efficiency(eta, "eta");
    const double c = std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double q = 1 - eta * s2;
    const double raw = c * c * c * c / (q * q) * (1 - 13.0 / 4.0 * p * q * q);
    return bounded(raw, p > kSixPhotonMaxP);
}

double sixphoton_success(double p, double theta, double eta) {
    require_probability(p, "p");
    require_angle(theta);
    require_efficiency(eta, "eta");
    const double s2 = std::sin(theta) * std::sin(theta);
    const double q = 1 - eta * s2;
    return 0.25 * p * p * p * std::pow(eta, 4) * std::pow(s2, 4) * q * q * (1 + 13.0 / 4.0 * p * q * q);
}

SfgSwapFigures sfg_swap_figures(double p, double eta_c, double eta, double eta_sfg) {
    require_probability(p, "p");
    require_efficiency(eta_c, "eta_c");
    require_efficiency(eta, "eta");
    require_efficiency(eta_sfg, "eta_sfg");
    SfgSwapFigures figures;
    figures.fidelity = bounded(1 - 3 * p, p > kSixPhotonMaxP);
    figures.probability = 0.5 * eta_c * eta_c * eta * eta_sfg * p * p * (1 + 3 * p);
    return figures;
}

void DeviceSpec::validate() const {
    auto positive = [&](double v, const char *what) {
        if (!(v > 0) || !std::isfinite(v)) {
            throw std::invalid_argument(fmt::format("device '{}': {} must be positive, got {}", name, what, v));
        }
    };
    positive(eta_hat.value, "eta_hat");
    positive(delta_nu_hat.value, "delta_nu_hat");
    positive(length.value, "length");
    positive(wavelength.value, "wavelength");
    if (!(tbp >= 0.3 && tbp <= 1.5)) {
        throw std::invalid_argument(fmt::format("device '{}': tbp must be in [0.3, 1.5], got {}", name, tbp));
    }
}

const std::vector<CatalogEntry> &device_catalog() {
    static const std::vector<CatalogEntry> catalog{
        {{"measured", {15}, {300}, {2.6}, {1557}, 0.66}, 1e-8},
        {{"commercial", {100}, {300}, {5}, {1557}, 0.66}, 1.5e-7},
        {{"research", {150}, {300}, {10}, {1557}, 0.66}, 5e-7},
    };
    return catalog;
}

const CatalogEntry &catalog_entry(std::string_view name) {
    for (const auto &entry : device_catalog()) {
        if (entry.device.name == name) {
            return entry;
        }
    }
    throw std::invalid_argument(fmt::format("unknown device '{}' (expected measured, commercial or research)", name));
}

SfgEfficiencyReport sfg_efficiency_theory(const DeviceSpec &device) {
    device.validate();
    // SI: 1/(W m^2), Hz m, m, m.
    const double eta_hat = device.eta_hat.value / 100.0 * 1e4;
    const double acceptance = device.delta_nu_hat.value * 1e9 * 1e-2;
    const double length = device.length.value * 1e-2;
    const double wavelength = device.wavelength.value * 1e-9;

    SfgEfficiencyReport report;
    report.photon_energy_j = kPlanck * kSpeedOfLight / wavelength;
    report.bandwidth_hz = acceptance / length;
    report.pump_power_w = report.photon_energy_j * report.bandwidth_hz / device.tbp;
    report.efficiency = eta_hat * acceptance * report.photon_energy_j * length / device.tbp;
    return report;
}

double fiber_transmission(double distance_km, double attenuation_db_per_km) {
    if (!(distance_km >= 0) || !(attenuation_db_per_km >= 0)) {
        throw std::invalid_argument("distance and attenuation must be non-negative");
    }
    return std::pow(10.0, -attenuation_db_per_km * distance_km / 10.0);
}

double chsh_detection_threshold() {
    return 2.0 / (1.0 + std::numbers::sqrt2);
}

}  // namespace swapsim::analytic
