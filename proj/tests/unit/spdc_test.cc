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

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "swapsim/optics.h"
#include "swapsim/spdc.h"

namespace swapsim {
namespace {

ModeSet source_modes(int max_pairs) {
    return ModeSet({"a_e", "a_l", "b_e", "b_l"}, max_pairs, 2 * max_pairs);
}

// Sum of branch weights inside the k-pair sector.
double sector_weight(const MixedEnsemble &rho, int k) {
    double total = 0;
    for (const auto &branch : rho.branches()) {
        for (const auto &[occ, amp] : branch.state.amplitudes()) {
            if (occ.total() == 2 * k) {
                total += branch.weight * std::norm(amp);
            }
        }
    }
    return total;
}

TEST(TimebinPair, BranchWeightsForTwoPairs) {
    for (double p : {1e-3, 0.01, 0.1, 0.2}) {
        SourceSpec spec{p};
        MixedEnsemble rho = timebin_pair(spec, source_modes(2));
        EXPECT_TRUE(rho.unnormalized());
        ASSERT_EQ(rho.branches().size(), 3u);
        EXPECT_NEAR(rho.branches()[0].weight, 1.0, 1e-15);
        EXPECT_NEAR(rho.branches()[1].weight, p, 1e-15 * p);
        EXPECT_NEAR(rho.branches()[2].weight, 3 * p * p / 4, 1e-12 * p * p);
    }
}

TEST(TimebinPair, SectorWeightsMatchExpansion) {
    const double p = 0.15;
    for (int n = 1; n <= 4; n++) {
        SourceSpec spec{p, "a", "b", n};
        MixedEnsemble rho = timebin_pair(spec, source_modes(n));
        for (int k = 0; k <= n; k++) {
            EXPECT_NEAR(sector_weight(rho, k), oracle::pair_sector_weight(p, k), 1e-14);
        }
    }
}

TEST(TimebinPair, BranchStatesAreTheBellStates) {
    ModeSet m = source_modes(2);
    MixedEnsemble rho = timebin_pair(SourceSpec{0.05}, m);
    const PureState &one = rho.branches()[1].state;
    const double h = std::numbers::sqrt2 / 2;
    EXPECT_NEAR(one.amplitude({{"a_e", 1}, {"b_e", 1}}).real(), h, 1e-15);
    EXPECT_NEAR(one.amplitude({{"a_l", 1}, {"b_l", 1}}).real(), -h, 1e-15);

    PureState squared = pair_creation_power(SourceSpec{0.05}, m, 2);
    EXPECT_NEAR(std::sqrt(squared.norm_squared()), oracle::two_pair_norm(), 1e-14);
    EXPECT_NEAR(squared.amplitude({{"a_e", 2}, {"b_e", 2}}).real(), 2.0, 1e-14);
    EXPECT_NEAR(squared.amplitude({{"a_e", 1}, {"a_l", 1}, {"b_e", 1}, {"b_l", 1}}).real(), -2.0, 1e-14);
    EXPECT_NEAR(squared.amplitude({{"a_l", 2}, {"b_l", 2}}).real(), 2.0, 1e-14);
}

TEST(TimebinPair, WeightsDecrease) {
    for (double p : {0.01, 0.1, 0.2}) {
        MixedEnsemble rho = timebin_pair(SourceSpec{p, "a", "b", 4}, source_modes(4));
        for (std::size_t k = 1; k < rho.branches().size(); k++) {
            EXPECT_LT(rho.branches()[k].weight, rho.branches()[k - 1].weight);
        }
    }
}

TEST(TimebinPair, SmallPIsNearlyVacuum) {
    MixedEnsemble rho = timebin_pair(SourceSpec{1e-12}, source_modes(2));
    EXPECT_NEAR(fidelity(rho, PureState::vacuum(rho.modes())), 1.0, 1e-11);
}

TEST(TimebinPair, Validation) {
    EXPECT_THROW(timebin_pair(SourceSpec{0.0}, source_modes(2)), std::invalid_argument);
    EXPECT_THROW(timebin_pair(SourceSpec{0.25}, source_modes(2)), std::invalid_argument);
    EXPECT_THROW(timebin_pair(SourceSpec{0.1, "a", "b", 3}, source_modes(2)), std::invalid_argument);
    EXPECT_THROW(timebin_pair(SourceSpec{0.1, "a", "c"}, source_modes(2)), std::invalid_argument);
}

TEST(TimebinPairPure, ExpansionRatiosAndSectors) {
    const double p = 0.08;
    ModeSet m = source_modes(3);
    PureState psi = timebin_pair_pure(SourceSpec{p, "a", "b", 3}, m);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-14);
    MixedEnsemble as_mixture = MixedEnsemble::pure(psi);
    const double vacuum = sector_weight(as_mixture, 0);
    EXPECT_NEAR(sector_weight(as_mixture, 1) / vacuum, p, 1e-14);
    for (int k = 0; k <= 3; k++) {
        EXPECT_NEAR(sector_weight(as_mixture, k) / vacuum, oracle::pair_sector_weight(p, k), 1e-14);
    }
}

TEST(TimebinPairPure, SectorsAreOrthogonal) {
    ModeSet m = source_modes(3);
    SourceSpec spec{0.1, "a", "b", 3};
    for (int j = 0; j <= 3; j++) {
        for (int k = j + 1; k <= 3; k++) {
            EXPECT_EQ(inner(pair_creation_power(spec, m, j), pair_creation_power(spec, m, k)), Amplitude(0, 0));
        }
    }
}

TEST(SourceEnsemble, MixtureAndCoherentGiveSameCountStatistics) {
    ModeSet m = source_modes(2);
    for (double p : {0.01, 0.1}) {
        MixedEnsemble mixed = source_ensemble(SourceSpec{p}, m);
        SourceSpec coherent_spec{p};
        coherent_spec.coherent_pair_number = true;
        MixedEnsemble coherent = source_ensemble(coherent_spec, m);
        EXPECT_NEAR(coherent.trace(), mixed.trace(), 1e-12);
        DetectorModel pnr = DetectorModel::number_resolving(0.7);
        for (int ae = 0; ae <= 2; ae++) {
            for (int al = 0; al <= 2; al++) {
                for (int be = 0; be <= 2; be++) {
                    for (int bl = 0; bl <= 2; bl++) {
                        std::array<DetectionSpec, 4> pattern{DetectionSpec{"a_e", pnr, DetectionOutcome::exactly(ae)},
                                                             DetectionSpec{"a_l", pnr, DetectionOutcome::exactly(al)},
                                                             DetectionSpec{"b_e", pnr, DetectionOutcome::exactly(be)},
                                                             DetectionSpec{"b_l", pnr, DetectionOutcome::exactly(bl)}};
                        EXPECT_NEAR(condition_joint(mixed, pattern).probability, condition_joint(coherent, pattern).probability, 1e-12);
                    }
                }
            }
        }
    }
}

}  // namespace
}  // namespace swapsim
