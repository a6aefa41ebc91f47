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

#include "swapsim/sfg.h"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace swapsim {

SfgParams SfgParams::from_efficiency(double eta_sfg) {
    if (!(eta_sfg >= 0 && eta_sfg <= 1)) {
        throw std::invalid_argument(fmt::format("SFG efficiency must be in [0, 1], got {}", eta_sfg));
    }
    SfgParams params;
    params.coupling = std::sqrt(eta_sfg);
    return params;
}

void SfgParams::validate() const {
    // Beyond pi/2 the conversion probability sin^2(g) starts to fall again.
    if (!(coupling >= 0 && coupling <= std::numbers::pi / 2)) {
        throw std::invalid_argument(fmt::format("SFG coupling must be in [0, pi/2], got {}", coupling));
    }
    detector.validate();
}

namespace {

struct Triple {
    std::size_t b;
    std::size_t c;
    std::size_t k;
};

// Propagator restricted to the subspace {|A-j, B-j, j>} of one (b, c, k)
// triple, where A = n_b + n_k and B = n_c + n_k are conserved. In that basis
// -iH tau = sign * coupling * M with M real antisymmetric,
// M[j+1][j] = sqrt((A-j)(B-j)(j+1)).
class SubspacePropagator {
   public:
    SubspacePropagator(double coupling, double sign) : coupling_(coupling), sign_(sign) {
    }

    const Eigen::MatrixXcd &get(int a, int b, int dim) {
        auto key = std::make_tuple(a, b, dim);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(dim, dim);
        for (int j = 0; j + 1 < dim; j++) {
            double s = std::sqrt(static_cast<double>(a - j) * (b - j) * (j + 1));
            generator(j + 1, j) = sign_ * s;
            generator(j, j + 1) = -sign_ * s;
        }
        // i * generator is Hermitian; exp(c * generator) = V exp(-i c lambda) V^dag.
        Eigen::MatrixXcd hermitian = std::complex<double>(0, 1) * generator.cast<std::complex<double>>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
        Eigen::VectorXcd phases(dim);
        for (int j = 0; j < dim; j++) {
            phases(j) = std::polar(1.0, -coupling_ * solver.eigenvalues()(j));
        }
        Eigen::MatrixXcd u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
        return cache_.emplace(key, std::move(u)).first->second;
    }

   private:
    double coupling_;
    double sign_;
    std::map<std::tuple<int, int, int>, Eigen::MatrixXcd> cache_;
};

PureState evolve_triple(const PureState &state, const Triple &t, double coupling, double sign) {
    const ModeSet &modes = state.modes();
    SubspacePropagator propagator(coupling, sign);
    PureState result(modes);
    result.record_truncation(state.truncation());
    for (const auto &[occ, amp] : state.amplitudes()) {
        const int nb = occ[t.b];
        const int nc = occ[t.c];
        const int nk = occ[t.k];
        const int a = nb + nk;
        const int b = nc + nk;
        int dim = std::min(a, b) + 1;
        if (dim - 1 > modes.per_mode_cutoff()) {
            // The k occupation cannot reach the top of the subspace.
            dim = modes.per_mode_cutoff() + 1;
            result.record_truncation(Truncation{1, 0.0});
        }
        if (dim == 1) {
            result.add(occ, amp);
            continue;
        }
        const Eigen::MatrixXcd &u = propagator.get(a, b, dim);
        for (int j = 0; j < dim; j++) {
            Amplitude value = u(j, nk) * amp;
            if (value == Amplitude{}) {
                continue;
            }
            result.add_or_truncate(occ.with(t.b, a - j).with(t.c, b - j).with(t.k, j), value);
        }
    }
    return result;
}

Triple early_triple(const ModeSet &modes, const SfgParams &p) {
    return {modes.index_of(p.b_early), modes.index_of(p.c_early), modes.index_of(p.k_early)};
}

Triple late_triple(const ModeSet &modes, const SfgParams &p) {
    return {modes.index_of(p.b_late), modes.index_of(p.c_late), modes.index_of(p.k_late)};
}

// H / alpha applied to a state.
PureState apply_generator(const PureState &state, const SfgParams &p) {
    const Amplitude i(0, 1);
    PureState early_up = create(annihilate(annihilate(state, p.c_early), p.b_early), p.k_early);
    PureState late_up = create(annihilate(annihilate(state, p.c_late), p.b_late), p.k_late);
    PureState early_down = create(create(annihilate(state, p.k_early), p.b_early), p.c_early);
    PureState late_down = create(create(annihilate(state, p.k_late), p.b_late), p.c_late);
    return i * (early_up - late_up) - i * (early_down - late_down);
}

}  // namespace

PureState sfg_evolve(const PureState &state, const SfgParams &params) {
    params.validate();
    const ModeSet &modes = state.modes();
    PureState after_early = evolve_triple(state, early_triple(modes, params), params.coupling, +1.0);
    return evolve_triple(after_early, late_triple(modes, params), params.coupling, -1.0).pruned();
}

PureState sfg_evolve_series(const PureState &state, const SfgParams &params, double term_tolerance, int max_order) {
    params.validate();
    early_triple(state.modes(), params);
    late_triple(state.modes(), params);
    PureState result = state;
    PureState term = state;
    const Amplitude minus_i_g(0, -params.coupling);
    for (int order = 1; order <= max_order; order++) {
        term = apply_generator(term, params).scaled(minus_i_g / static_cast<double>(order));
        result += term;
        if (term.norm_squared() < term_tolerance * term_tolerance) {
            break;
        }
    }
    return result.pruned();
}

PureState eraser(const PureState &state, const SfgParams &params) {
    PureState mixed = balanced_beamsplitter(state, params.k_early, params.k_late);
    return relabel(relabel(mixed, params.k_early, params.k_plus), params.k_late, params.k_minus);
}

namespace {

MixedEnsemble with_k_modes(const MixedEnsemble &rho, const SfgParams &params) {
    std::vector<std::string> missing;
    for (const auto &label : {params.k_early, params.k_late}) {
        if (!rho.modes().contains(label)) {
            missing.push_back(label);
        }
    }
    if (missing.empty()) {
        return rho;
    }
    ModeSet k_modes(missing, rho.modes().per_mode_cutoff(), rho.modes().total_cutoff());
    return tensor(rho, MixedEnsemble::pure(PureState::vacuum(k_modes)));
}

HeraldedOutcome to_outcome(const MixedEnsemble &kept, std::string pattern) {
    double probability = kept.trace();
    if (probability <= 0) {
        return {0.0, MixedEnsemble(kept.modes()), std::move(pattern)};
    }
    return {probability, kept.normalized(), std::move(pattern)};
}

}  // namespace

SfgBellResult bell_measure_sfg(const MixedEnsemble &rho, const SfgParams &params, const SfgLosses &losses) {
    params.validate();
    MixedEnsemble state = with_k_modes(rho, params);
    for (const auto &mode : {params.b_early, params.b_late, params.c_early, params.c_late}) {
        state = loss(state, mode, losses.eta_c);
    }

    MixedEnsemble converted(state.modes().relabeled(params.k_early, params.k_plus).relabeled(params.k_late, params.k_minus), state.unnormalized());
    converted.record_truncation(state.dropped_truncation());
    for (const auto &branch : state.branches()) {
        converted.add_state(branch.weight, eraser(sfg_evolve(branch.state, params), params));
    }

    DetectorModel detector = params.detector;
    detector.efficiency *= losses.eta_k;
    detector.validate();
    const std::array<DetectionSpec, 2> plus_records{
        DetectionSpec{params.k_plus, detector, DetectionOutcome::click()},
        DetectionSpec{params.k_minus, detector, DetectionOutcome::no_click()}};
    const std::array<DetectionSpec, 2> minus_records{
        DetectionSpec{params.k_plus, detector, DetectionOutcome::no_click()},
        DetectionSpec{params.k_minus, detector, DetectionOutcome::click()}};
    const std::vector<std::string> unconverted{params.b_early, params.b_late, params.c_early, params.c_late};

    MixedEnsemble plus = branch_trace(postselect(converted, plus_records), unconverted);
    MixedEnsemble minus_raw = branch_trace(postselect(converted, minus_records), unconverted);

    MixedEnsemble minus(minus_raw.modes(), minus_raw.unnormalized());
    minus.record_truncation(minus_raw.dropped_truncation());
    for (const auto &branch : minus_raw.branches()) {
        minus.add_branch(branch.weight, phase_shift(branch.state, params.feed_forward_mode, std::numbers::pi));
    }

    MixedEnsemble both(plus.modes(), true);
    both.add_ensemble(plus);
    both.add_ensemble(minus);

    SfgBellResult result{
        to_outcome(both, fmt::format("{}:click {}:no-click | {}:no-click {}:click", params.k_plus, params.k_minus, params.k_plus, params.k_minus)),
        to_outcome(plus, fmt::format("{}:click {}:no-click", params.k_plus, params.k_minus)),
        to_outcome(minus, fmt::format("{}:no-click {}:click (phase corrected on {})", params.k_plus, params.k_minus, params.feed_forward_mode)),
        converted.truncation()};
    return result;
}

}  // namespace swapsim
