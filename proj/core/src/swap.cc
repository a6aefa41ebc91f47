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

#include "swapsim/swap.h"

#include <array>
#include <cmath>
#include <numbers>

namespace swapsim {

int SwapSetup::resolved_per_mode_cutoff() const {
    return per_mode_cutoff > 0 ? per_mode_cutoff : std::min(2 * max_pairs, ModeSet::kMaxPerModeCutoff);
}

int SwapSetup::resolved_total_cutoff() const {
    return total_cutoff > 0 ? total_cutoff : 4 * max_pairs;
}

MixedEnsemble swap_input(const SwapSetup &setup) {
    const int per_mode = setup.resolved_per_mode_cutoff();
    const int total = setup.resolved_total_cutoff();
    SourceSpec ab{setup.p_ab, "a", "b", setup.max_pairs, setup.coherent_pair_number};
    SourceSpec cd{setup.p_cd, "c", "d", setup.max_pairs, setup.coherent_pair_number};
    // c before d keeps the canonical a, b, c, d ordering.
    ModeSet ab_modes(ab.labels(), per_mode, total);
    ModeSet cd_modes({"c_e", "c_l", "d_e", "d_l"}, per_mode, total);
    return tensor(source_ensemble(ab, ab_modes), source_ensemble(cd, cd_modes));
}

namespace {

const std::array<std::string, 4> kAdLabels{"a_e", "a_l", "d_e", "d_l"};

PureState pair_state(const ModeSet &modes, std::string_view x1, std::string_view y1, std::string_view x2, std::string_view y2) {
    PureState first = PureState::basis(modes, {{x1, 1}, {y1, 1}});
    PureState second = PureState::basis(modes, {{x2, 1}, {y2, 1}});
    return (first - second).scaled(std::numbers::sqrt2 / 2);
}

}  // namespace

PureState linear_swap_target(const ModeSet &ad_modes) {
    return pair_state(ad_modes, "a_e", "d_l", "a_l", "d_e");
}

PureState sfg_swap_target(const ModeSet &ad_modes) {
    return pair_state(ad_modes, "a_e", "d_e", "a_l", "d_l");
}

LinearSwapResult simulate_linear_swap(const SwapSetup &setup, const DetectorModel &detector) {
    MixedEnsemble rho = swap_input(setup);
    rho = balanced_beamsplitter(rho, "b_e", "c_e");
    rho = balanced_beamsplitter(rho, "b_l", "c_l");
    rho = relabel(relabel(rho, "b_e", "delta_e"), "c_e", "deltabar_e");
    rho = relabel(relabel(rho, "b_l", "delta_l"), "c_l", "deltabar_l");

    const std::array<DetectionSpec, 4> bell{
        DetectionSpec{"delta_e", detector, DetectionOutcome::click()},
        DetectionSpec{"deltabar_l", detector, DetectionOutcome::click()},
        DetectionSpec{"delta_l", detector, DetectionOutcome::no_click()},
        DetectionSpec{"deltabar_e", detector, DetectionOutcome::no_click()}};
    HeraldedOutcome herald = condition_joint(rho, bell);

    LinearSwapResult result;
    result.truncation = rho.truncation();
    result.probability = herald.probability;
    if (herald.probability <= 0) {
        return result;
    }
    const ModeSet &ad = herald.state.modes();
    result.fidelity = fidelity(herald.state, linear_swap_target(ad));
    result.weight_signal = herald.probability * result.fidelity;
    result.weight_aa = herald.probability * fidelity(herald.state, PureState::basis(ad, {{"a_e", 1}, {"a_l", 1}}));
    result.weight_dd = herald.probability * fidelity(herald.state, PureState::basis(ad, {{"d_e", 1}, {"d_l", 1}}));
    return result;
}

SfgSwapResult simulate_sfg_swap(const SwapSetup &setup, const SfgParams &params, const SfgLosses &losses) {
    MixedEnsemble rho = swap_input(setup);
    SfgBellResult bell = bell_measure_sfg(rho, params, losses);

    SfgSwapResult result;
    result.truncation = rho.truncation();
    result.truncation += bell.truncation;
    result.probability = bell.heralded.probability;
    result.probability_plus = bell.plus.probability;
    result.probability_minus = bell.minus.probability;
    if (result.probability > 0) {
        result.fidelity = fidelity(bell.heralded.state, sfg_swap_target(bell.heralded.state.modes()));
    }
    return result;
}

double fit_infidelity_slope(std::span<const std::pair<double, double>> p_and_fidelity) {
    double num = 0;
    double den = 0;
    for (const auto &[p, f] : p_and_fidelity) {
        num += p * (1 - f);
        den += p * p;
    }
    if (den <= 0) {
        throw std::invalid_argument("slope fit needs at least one nonzero p");
    }
    return num / den;
}

}  // namespace swapsim
