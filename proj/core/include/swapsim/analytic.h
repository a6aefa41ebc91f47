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

#ifndef SWAPSIM_ANALYTIC_H
#define SWAPSIM_ANALYTIC_H

#include <string>
#include <string_view>
#include <vector>

namespace swapsim {

/// Leading-order perturbative figures for the linear-optics and SFG swap, the
/// six-photon heralded source, and the waveguide efficiency model.
namespace analytic {

/// A perturbative figure that may have been pushed back into [0, 1].
struct BoundedValue {
    double value = 0;
    /// The raw expression left [0, 1] and was clamped.
    bool clamped = false;
    /// Inputs lie outside the small-p regime the expression is derived for.
    bool outside_regime = false;
};

/// Unnormalized weights of the three components of the state heralded by the
/// linear-optics coincidence.
struct LinearSwapWeights {
    double aa = 0;
    double dd = 0;
    double signal = 0;

    double fidelity() const {
        return signal / (aa + dd + signal);
    }
    double probability() const {
        return aa + dd + signal;
    }
};

LinearSwapWeights linear_swap_state_weights(double p_ab, double p_cd);

/// Largest p for which the six-photon expressions are trusted.
inline constexpr double kSixPhotonMaxP = 0.1;

/// Fidelity of the pair heralded by the six-photon fourfold coincidence;
/// `theta` is the pick-off angle (transmission cos^2 theta), `eta` the
/// ancilla detection efficiency.
BoundedValue sixphoton_fidelity(double p, double theta, double eta);
/// Fourfold-coincidence probability of the six-photon source.
double sixphoton_success(double p, double theta, double eta);

struct SfgSwapFigures {
    BoundedValue fidelity;
    double probability = 0;
};

/// F = 1 - 3p, P = eta_c^2 * eta * eta_sfg * p^2 (1 + 3p) / 2 with
/// p = p_ab = p_cd.
SfgSwapFigures sfg_swap_figures(double p, double eta_c, double eta, double eta_sfg);

inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kSpeedOfLight = 299792458.0;

struct PercentPerWattSquareCm {
    double value;
};
struct GigahertzCm {
    double value;
};
struct Centimeters {
    double value;
};
struct Nanometers {
    double value;
};

/// Nonlinear waveguide used for single-photon SFG.
struct DeviceSpec {
    std::string name;
    PercentPerWattSquareCm eta_hat;
    /// Spectral acceptance; the usable bandwidth is delta_nu_hat / length.
    GigahertzCm delta_nu_hat;
    Centimeters length;
    /// Wavelength whose photon energy enters h*nu.
    Nanometers wavelength;
    double tbp;

    void validate() const;
};

struct CatalogEntry {
    DeviceSpec device;
    /// Efficiency quoted for this device in the literature the catalog is taken from.
    double quoted_efficiency;
};

/// The measured waveguide and the two projected devices.
const std::vector<CatalogEntry> &device_catalog();
/// Throws std::invalid_argument for unknown names.
const CatalogEntry &catalog_entry(std::string_view name);

/// Measured single-photon SFG efficiency of the 2.6 cm waveguide.
inline constexpr double kMeasuredSfgEfficiency = 1.2e-8;
inline constexpr double kMeasuredSfgEfficiencyError = 0.2e-8;

struct SfgEfficiencyReport {
    /// eta_hat * delta_nu_hat * h nu * L / tbp.
    double efficiency = 0;
    /// delta_nu_hat / L, in Hz.
    double bandwidth_hz = 0;
    /// Power of one photon per coherence time, h nu * bandwidth / tbp, in W.
    double pump_power_w = 0;
    double photon_energy_j = 0;
};

SfgEfficiencyReport sfg_efficiency_theory(const DeviceSpec &device);

/// 10^(-attenuation * distance / 10).
double fiber_transmission(double distance_km, double attenuation_db_per_km);

/// Detection efficiency needed to close the detection loophole for CHSH,
/// 2 / (1 + sqrt 2).
double chsh_detection_threshold();

}  // namespace analytic
}  // namespace swapsim

#endif
