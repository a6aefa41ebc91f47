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

#ifndef SWAPSIM_OPTIMIZER_H
#define SWAPSIM_OPTIMIZER_H

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace swapsim {

/// Grid-then-refine search settings for the six-photon operating point.
struct SixPhotonSearch {
    double p_min = 1e-4;
    double p_max = 0.1;
    /// Log-spaced in p.
    int p_points = 201;
    /// Linearly spaced in sin^2(theta), excluding both ends.
    int s_points = 201;
    /// Points per axis in each refinement round.
    int refine_points = 11;
    double relative_tolerance = 1e-3;
    int max_refinements = 100;
    /// 0 reads SWAPSIM_THREADS, falling back to the hardware concurrency.
    unsigned threads = 0;
};

struct OptimizationResult {
    bool feasible = false;
    double p = 0;
    double theta = 0;
    double sin2_theta = 0;
    double cos2_theta = 0;
    /// Fourfold-coincidence probability at the optimum.
    double success = 0;
    /// Heralded fidelity at the optimum.
    double fidelity = 0;
    /// The optimum sits on the edge of the search domain.
    bool boundary_active = false;
    double p_min = 0;
    double p_max = 0;
    int refinement_steps = 0;
    std::size_t evaluations = 0;
};

/// Maximizes the six-photon success probability subject to fidelity >= f_min.
OptimizationResult optimize_sixphoton(double eta, double f_min, const SixPhotonSearch &search = {});

struct RequiredEfficiency {
    /// Largest p with 1 - 3p >= f_min.
    double p = 0;
    double eta_sfg_min = 0;
};

/// SFG efficiency needed for the SFG swap to herald pairs with probability
/// `p_target` at fidelity `f_min`.
RequiredEfficiency required_sfg_efficiency(double p_target, double f_min, double eta_c, double eta_d);

struct LinkScenario;

/// What a key-fraction model gets to see about a herald.
struct HeraldQuality {
    /// Leading-order fidelity of the heralded pair, 1 - 3(p_ab + p_cd)/2.
    double fidelity = 0;
    double heralds_per_pulse = 0;
};

/// Maps herald quality to secret bits per herald.
using KeyFractionModel = std::function<double(const HeraldQuality &)>;

/// Heralded DI-QKD link: Alice's source sends photon B over fiber to Bob, whose
/// local source supplies C and D and whose crystal converts B and C.
struct LinkScenario {
    double distance_km = 10;
    double attenuation_db_per_km = 0.2;
    double repetition_rate_hz = 10e9;
    double eta_c = 0.9;
    double eta_d = 0.8;
    double eta_sfg = 6e-7;
    double p_ab = 3.7e-2;
    double p_cd = 3.7e-2;
    /// Also require Alice's photon to be coupled and detected.
    bool include_alice_detection = false;
    KeyFractionModel key_fraction;
    std::string key_fraction_name;

    void validate() const;
};

struct DiqkdRate {
    double transmission = 0;
    double heralds_per_pulse = 0;
    double heralds_per_min = 0;
    std::optional<double> key_fraction;
    /// Present only when the scenario supplies a key-fraction model.
    std::optional<double> bits_per_min;
};

DiqkdRate diqkd_rate(const LinkScenario &scenario);

KeyFractionModel constant_key_fraction(double bits_per_herald);
/// Werner-state CHSH bound, 1 - h(Q) - h((1 + sqrt(S^2/4 - 1))/2), with
/// visibility from the herald fidelity; 0 without a Bell violation.
KeyFractionModel chsh_werner_key_fraction();

/// Thread count for parallel sweeps: SWAPSIM_THREADS or hardware concurrency.
unsigned default_thread_count();

}  // namespace swapsim

#endif
