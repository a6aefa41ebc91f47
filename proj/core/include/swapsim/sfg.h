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

#ifndef SWAPSIM_SFG_H
#define SWAPSIM_SFG_H

#include <limits>
#include <string>

#include "swapsim/fock.h"
#include "swapsim/optics.h"

namespace swapsim {

/// Sum-frequency conversion of time-coincident b and c photons into k photons.
///
/// The interaction Hamiltonian is
///   H = i alpha (k_e^dag b_e c_e - k_l^dag b_l c_l) + h.c.
/// and `coupling` is the dimensionless product alpha * tau, so a single
/// coincident pair converts with probability sin^2(coupling) and the
/// small-coupling efficiency is coupling^2.
struct SfgParams {
    double coupling = 0;
    std::string b_early = "b_e";
    std::string b_late = "b_l";
    std::string c_early = "c_e";
    std::string c_late = "c_l";
    std::string k_early = "k_e";
    std::string k_late = "k_l";
    /// Output labels of the which-time eraser.
    std::string k_plus = "k_p";
    std::string k_minus = "k_m";
    /// Kind of the k-photon detectors. Their efficiency is multiplied into
    /// `SfgLosses::eta_k`.
    DetectorModel detector = DetectorModel::threshold(1.0);
    /// Mode receiving the pi phase correction after a k_minus herald.
    std::string feed_forward_mode = "d_l";

    static SfgParams from_efficiency(double eta_sfg);
    double efficiency() const {
        return coupling * coupling;
    }
    void validate() const;
};

struct SfgLosses {
    /// Coupling of modes b and c into the crystal.
    double eta_c = 1.0;
    /// Overall detection efficiency of the k photon (eta_c * eta_d).
    double eta_k = 1.0;
};

/// exp(-iH tau) evaluated exactly inside the invariant subspaces of H.
/// Every one of the six interaction modes must be present.
PureState sfg_evolve(const PureState &state, const SfgParams &params);

/// Taylor series of exp(-iH tau) applied term by term. Stops once a term's norm
/// drops below `term_tolerance` or after `max_order` terms; max_order = 1 gives
/// first-order perturbation theory.
PureState sfg_evolve_series(
    const PureState &state,
    const SfgParams &params,
    double term_tolerance = 1e-14,
    int max_order = std::numeric_limits<int>::max());

/// Lossless 50/50 mixing of k_e and k_l into k_plus = (k_e + k_l)/sqrt2 and
/// k_minus = (k_e - k_l)/sqrt2.
PureState eraser(const PureState &state, const SfgParams &params);

struct SfgBellResult {
    /// Both accepted heralds combined, after the k_minus phase correction.
    HeraldedOutcome heralded;
    HeraldedOutcome plus;
    /// Already phase corrected.
    HeraldedOutcome minus;
    Truncation truncation;
};

/// Coupling loss on b and c, SFG, eraser, and detection of exactly one click
/// across k_plus/k_minus. The unconverted b and c light is traced out. Missing
/// k modes are appended in vacuum.
SfgBellResult bell_measure_sfg(const MixedEnsemble &rho, const SfgParams &params, const SfgLosses &losses);

}  // namespace swapsim

#endif
