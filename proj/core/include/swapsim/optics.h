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

#ifndef SWAPSIM_OPTICS_H
#define SWAPSIM_OPTICS_H

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swapsim/fock.h"

namespace swapsim {

enum class DetectorKind { kThreshold, kNumberResolving };

/// Dark-count-free detector. Efficiency is applied as a loss channel in front
/// of an ideal detector.
struct DetectorModel {
    double efficiency = 1.0;
    DetectorKind kind = DetectorKind::kThreshold;

    static DetectorModel threshold(double efficiency = 1.0);
    static DetectorModel number_resolving(double efficiency = 1.0);
    void validate() const;
};

/// What a detector reported.
struct DetectionOutcome {
    enum class Kind { kClick, kNoClick, kCount };
    Kind kind;
    int count = 0;

    static DetectionOutcome click() {
        return {Kind::kClick, 0};
    }
    static DetectionOutcome no_click() {
        return {Kind::kNoClick, 0};
    }
    static DetectionOutcome exactly(int n) {
        return {Kind::kCount, n};
    }
    /// Whether `detected` registered photons produce this outcome.
    bool accepts(int detected) const;
    std::string describe() const;
};

struct DetectionSpec {
    std::string mode;
    DetectorModel model;
    DetectionOutcome outcome;
};

/// Conditional state after a measurement record.
struct HeraldedOutcome {
    /// Trace of the matching branch. For an input with unit trace this is the
    /// outcome probability; for the unnormalized source ensembles it is the
    /// probability in units of the vacuum weight.
    double probability = 0;
    /// Normalized post-measurement state on the unmeasured modes (empty when
    /// probability is 0).
    MixedEnsemble state;
    std::string pattern;
};

/// Maps input creation operators to outputs: m1^dag -> U00 m1^dag + U01 m2^dag,
/// m2^dag -> U10 m1^dag + U11 m2^dag. `transform` must be unitary.
using ModeTransform = std::array<std::array<Amplitude, 2>, 2>;

PureState two_mode_transform(const PureState &state, std::string_view m1, std::string_view m2, const ModeTransform &transform);

/// Lossless beamsplitter with transmittance T and phase phi:
///   m1^dag -> sqrt(T) m1^dag - e^{i phi} sqrt(1-T) m2^dag
///   m2^dag -> sqrt(1-T) m1^dag + e^{i phi} sqrt(T) m2^dag
/// T = 1 with phi = 0 is the identity. T = 1/2 with phi = pi gives the
/// symmetric convention of `balanced_beamsplitter`.
PureState beamsplitter(const PureState &state, std::string_view m1, std::string_view m2, double transmittance, double phase);

/// 50/50 mixer whose output modes are (m1 + m2)/sqrt2 (stored in m1) and
/// (m1 - m2)/sqrt2 (stored in m2).
PureState balanced_beamsplitter(const PureState &state, std::string_view m1, std::string_view m2);
MixedEnsemble balanced_beamsplitter(const MixedEnsemble &rho, std::string_view m1, std::string_view m2);

/// Each photon in `mode` independently survives with probability `eta`.
MixedEnsemble loss(const MixedEnsemble &rho, std::string_view mode, double eta);

/// Keeps only the part of `rho` consistent with the measurement records and
/// removes the measured modes. The result is not renormalized; its trace is the
/// joint outcome weight. Repeated records on one mode must share a detector
/// model and are intersected.
MixedEnsemble postselect(const MixedEnsemble &rho, std::span<const DetectionSpec> records);

HeraldedOutcome detect(const MixedEnsemble &rho, std::string_view mode, const DetectorModel &model, DetectionOutcome outcome);
HeraldedOutcome condition_joint(const MixedEnsemble &rho, std::span<const DetectionSpec> records);

/// All outcomes a detector of the given kind can report on a mode holding at
/// most `max_photons`.
std::vector<DetectionOutcome> possible_outcomes(DetectorKind kind, int max_photons);

}  // namespace swapsim

#endif
