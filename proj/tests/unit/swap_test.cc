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

#include <cmath>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "swapsim/swap.h"

namespace swapsim {
namespace {

SwapSetup symmetric(double p, int max_pairs = 2) {
    SwapSetup setup;
    setup.p_ab = p;
    setup.p_cd = p;
    setup.max_pairs = max_pairs;
    return setup;
}

SfgParams coupling(double g) {
    SfgParams params;
    params.coupling = g;
    return params;
}

TEST(SwapInput, ModeOrderAndNoTruncation) {
    MixedEnsemble rho = swap_input(symmetric(0.01));
    EXPECT_EQ(rho.modes().labels(), (std::vector<std::string>{"a_e", "a_l", "b_e", "b_l", "c_e", "c_l", "d_e", "d_l"}));
    EXPECT_TRUE(rho.truncation().is_zero());
    EXPECT_NEAR(rho.trace(), std::pow(1 + 0.01 + 3e-4 / 4, 2), 1e-15);
}

TEST(LinearSwap, BranchWeightsAndFidelity) {
    for (double p : {0.005, 0.01, 0.02}) {
        LinearSwapResult r = simulate_linear_swap(symmetric(p));
        EXPECT_TRUE(r.truncation.is_zero());
        EXPECT_NEAR(r.weight_aa / oracle::linear_weight_aa(p), 1.0, 0.05);
        EXPECT_NEAR(r.weight_dd / oracle::linear_weight_dd(p), 1.0, 0.05);
        EXPECT_NEAR(r.weight_signal / oracle::linear_weight_signal(p, p), 1.0, 0.05);
        EXPECT_LE(r.fidelity, 0.5);
        EXPECT_LT(std::abs(r.fidelity - 0.5), 3 * p);
        EXPECT_NEAR(r.probability / (p * p / 4), 1.0, 4 * p);
    }
}

TEST(LinearSwap, AsymmetricSourcesLowerTheFidelity) {
    SwapSetup setup;
    setup.p_ab = 0.01;
    setup.p_cd = 0.04;
    LinearSwapResult r = simulate_linear_swap(setup);
    const double aa = oracle::linear_weight_aa(0.01);
    const double dd = oracle::linear_weight_dd(0.04);
    const double signal = oracle::linear_weight_signal(0.01, 0.04);
    EXPECT_NEAR(r.fidelity, signal / (aa + dd + signal), 0.02);
    EXPECT_LT(r.fidelity, 0.34);
}

TEST(SfgSwap, SinglePairSourcesHeraldTheTarget) {
    const double p = 0.01;
    const double g = 0.01;
    SfgSwapResult r = simulate_sfg_swap(symmetric(p, 1), coupling(g));
    EXPECT_TRUE(r.truncation.is_zero());
    EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(r.probability / oracle::sfg_success_leading(g * g, p, p), 1.0, 0.01);
    EXPECT_NEAR(r.probability_plus, r.probability_minus, 1e-12 * r.probability);
    EXPECT_NEAR(r.probability_plus + r.probability_minus, r.probability, 1e-15);
}

TEST(SfgSwap, ZeroCouplingNeverHeralds) {
    SfgSwapResult r = simulate_sfg_swap(symmetric(0.01), coupling(0.0));
    EXPECT_EQ(r.probability, 0.0);
}

TEST(SfgSwap, FidelitySlopeNearThree) {
    std::vector<std::pair<double, double>> points;
    for (int i = 1; i <= 10; i++) {
        const double p = 0.002 * i;
        SfgSwapResult r = simulate_sfg_swap(symmetric(p), coupling(0.01));
        ASSERT_TRUE(r.truncation.is_zero());
        points.emplace_back(p, r.fidelity);
    }
    EXPECT_NEAR(fit_infidelity_slope(points), 3.0, 0.45);
}

TEST(SfgSwap, LossyAncillaSlope) {
    SfgLosses losses{std::sqrt(0.6), 0.6};
    std::vector<std::pair<double, double>> points;
    for (int i = 1; i <= 10; i++) {
        const double p = 0.002 * i;
        points.emplace_back(p, simulate_sfg_swap(symmetric(p), coupling(0.01), losses).fidelity);
    }
    const double c = fit_infidelity_slope(points);
    // Losing B or C photons before the crystal cannot create a herald, so the
    // double-pair contamination shrinks relative to the ideal case.
    EXPECT_GT(c, 1.0);
    EXPECT_LT(c, 3.5);
}

TEST(SfgSwap, ProbabilityScalesWithLosses) {
    const double p = 0.01;
    SfgSwapResult ideal = simulate_sfg_swap(symmetric(p, 1), coupling(0.01));
    SfgLosses losses{0.8, 0.5};
    SfgSwapResult lossy = simulate_sfg_swap(symmetric(p, 1), coupling(0.01), losses);
    EXPECT_NEAR(lossy.probability / ideal.probability, 0.8 * 0.8 * 0.5, 1e-3);
}

TEST(SfgSwap, MixtureAndCoherentSourcesAgree) {
    for (double p : {0.005, 0.02}) {
        SwapSetup mixed = symmetric(p);
        SwapSetup coherent = symmetric(p);
        coherent.coherent_pair_number = true;
        SfgSwapResult a = simulate_sfg_swap(mixed, coupling(0.05));
        SfgSwapResult b = simulate_sfg_swap(coherent, coupling(0.05));
        EXPECT_NEAR(a.probability, b.probability, 1e-12 * a.probability);
        EXPECT_NEAR(a.fidelity, b.fidelity, 1e-12);
        LinearSwapResult la = simulate_linear_swap(mixed);
        LinearSwapResult lb = simulate_linear_swap(coherent);
        EXPECT_NEAR(la.probability, lb.probability, 1e-12 * la.probability);
        EXPECT_NEAR(la.fidelity, lb.fidelity, 1e-12);
    }
}

TEST(SfgSwap, ThreePairConvergence) {
    // The unnormalized weights move at third order in p. The conditional
    // fidelity divides by an O(p^2) probability, so it moves at O(p^2).
    const double g = 0.01;
    for (double p : {0.005, 0.01, 0.02}) {
        SfgSwapResult two = simulate_sfg_swap(symmetric(p, 2), coupling(g));
        SfgSwapResult three = simulate_sfg_swap(symmetric(p, 3), coupling(g));
        const double scale = g * g * p * p * p;
        EXPECT_LT(std::abs(two.probability - three.probability), scale);
        EXPECT_LT(std::abs(two.probability * two.fidelity - three.probability * three.fidelity), scale);
        EXPECT_LT(std::abs(two.fidelity - three.fidelity), 5 * p * p);
    }
}

TEST(FitSlope, ExactLine) {
    std::vector<std::pair<double, double>> points{{0.1, 0.7}, {0.2, 0.4}};
    EXPECT_NEAR(fit_infidelity_slope(points), 3.0, 1e-12);
}

TEST(BellMeasureSfg, AppendsMissingKModes) {
    MixedEnsemble rho = swap_input(symmetric(0.01, 1));
    SfgBellResult r = bell_measure_sfg(rho, coupling(0.1), SfgLosses{});
    EXPECT_EQ(r.heralded.state.modes().labels(), (std::vector<std::string>{"a_e", "a_l", "d_e", "d_l"}));
    EXPECT_NEAR(r.heralded.state.trace(), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(r.plus.state, sfg_swap_target(r.plus.state.modes())), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(r.minus.state, sfg_swap_target(r.minus.state.modes())), 1.0, 1e-12);
}

}  // namespace
}  // namespace swapsim
