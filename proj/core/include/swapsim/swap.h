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

#ifndef SWAPSIM_SWAP_H
#define SWAPSIM_SWAP_H

#include <span>
#include <utility>

#include "swapsim/fock.h"
#include "swapsim/optics.h"
#include "swapsim/sfg.h"
#include "swapsim/spdc.h"

namespace swapsim {

/// Two time-bin sources, A-B and C-D, feeding a Bell measurement on B and C.
struct SwapSetup {
    double p_ab = 0.01;
    double p_cd = 0.01;
    int max_pairs = 2;
    bool coherent_pair_number = false;
    /// 0 picks 2 * max_pairs, enough for both sources to pile into one mode.
    int per_mode_cutoff = 0;
    /// 0 picks 4 * max_pairs, the largest photon number the sources emit.
    int total_cutoff = 0;

    int resolved_per_mode_cutoff() const;
    int resolved_total_cutoff() const;
};

/// rho_ab (x) rho_cd on modes a_e, a_l, b_e, b_l, c_e, c_l, d_e, d_l.
MixedEnsemble swap_input(const SwapSetup &setup);

/// (a_e^dag d_l^dag - a_l^dag d_e^dag)/sqrt2 |0>, heralded by the linear Bell
/// measurement.
PureState linear_swap_target(const ModeSet &ad_modes);
/// (a_e^dag d_e^dag - a_l^dag d_l^dag)/sqrt2 |0>, heralded by the SFG Bell
/// measurement.
PureState sfg_swap_target(const ModeSet &ad_modes);

struct LinearSwapResult {
    /// Probability of clicks in delta_e and deltabar_l with the other two
    /// outputs silent, relative to the vacuum weight of the sources.
    double probability = 0;
    double fidelity = 0;
    /// Unnormalized weights of a_e^dag a_l^dag|0>, d_e^dag d_l^dag|0> and the
    /// target in the conditional state.
    double weight_aa = 0;
    double weight_dd = 0;
    double weight_signal = 0;
    Truncation truncation;
};

/// 50/50 beamsplitter on (b_e, c_e) and (b_l, c_l) followed by the
/// delta_e / deltabar_l coincidence.
LinearSwapResult simulate_linear_swap(const SwapSetup &setup, const DetectorModel &detector = DetectorModel::threshold(1.0));

struct SfgSwapResult {
    double probability = 0;
    double probability_plus = 0;
    double probability_minus = 0;
    double fidelity = 0;
    Truncation truncation;
};

SfgSwapResult simulate_sfg_swap(const SwapSetup &setup, const SfgParams &params, const SfgLosses &losses = {});

/// Least-squares slope c of infidelity = c * p through the origin.
double fit_infidelity_slope(std::span<const std::pair<double, double>> p_and_fidelity);

}  // namespace swapsim

#endif
