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

#include "swapsim/spdc.h"

#include <cmath>

#include <fmt/format.h>

#include "combinatorics.h"

namespace swapsim {

std::vector<std::string> SourceSpec::labels() const {
    return {early(mode_a), late(mode_a), early(mode_b), late(mode_b)};
}

void SourceSpec::validate(const ModeSet &modes) const {
    if (!(p > 0 && p <= kMaxPairProbability)) {
        throw std::invalid_argument(fmt::format("pair probability p must be in (0, {}], got {}", kMaxPairProbability, p));
    }
    if (max_pairs < 1) {
        throw std::invalid_argument(fmt::format("max_pairs must be >= 1, got {}", max_pairs));
    }
    for (const auto &label : labels()) {
        if (!modes.contains(label)) {
            throw std::invalid_argument(fmt::format("source mode '{}' missing from the mode set", label));
        }
    }
    if (2 * max_pairs > modes.total_cutoff() || max_pairs > modes.per_mode_cutoff()) {
        throw std::invalid_argument(fmt::format(
            "max_pairs={} does not fit the cutoffs (per mode {}, total {})",
            max_pairs,
            modes.per_mode_cutoff(),
            modes.total_cutoff()));
    }
}

PureState pair_creation_power(const SourceSpec &spec, const ModeSet &modes, int k) {
    PureState state = PureState::vacuum(modes);
    for (int j = 0; j < k; j++) {
        PureState early = create(create(state, spec.early(spec.mode_a)), spec.early(spec.mode_b));
        PureState late = create(create(state, spec.late(spec.mode_a)), spec.late(spec.mode_b));
        state = early - late;
    }
    return state;
}

namespace {

// k-th term of exp(sqrt(p/2) X)|0>.
PureState expansion_term(const SourceSpec &spec, const ModeSet &modes, int k) {
    const double scale = std::pow(spec.p / 2, 0.5 * k) / factorial(k);
    return pair_creation_power(spec, modes, k).scaled(scale);
}

}  // namespace

MixedEnsemble timebin_pair(const SourceSpec &spec, const ModeSet &modes) {
    spec.validate(modes);
    MixedEnsemble result(modes, true);
    for (int k = 0; k <= spec.max_pairs; k++) {
        result.add_state(1.0, expansion_term(spec, modes, k));
    }
    return result;
}

PureState timebin_pair_pure(const SourceSpec &spec, const ModeSet &modes) {
    spec.validate(modes);
    PureState state(modes);
    for (int k = 0; k <= spec.max_pairs; k++) {
        state += expansion_term(spec, modes, k);
    }
    return state.normalized();
}

MixedEnsemble source_ensemble(const SourceSpec &spec, const ModeSet &modes) {
    if (!spec.coherent_pair_number) {
        return timebin_pair(spec, modes);
    }
    PureState state = timebin_pair_pure(spec, modes);
    const double vacuum_weight = std::norm(state.amplitude(OccupationVector{}));
    MixedEnsemble result(modes, true);
    result.add_branch(1.0 / vacuum_weight, state);
    return result;
}

}  // namespace swapsim
