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

#ifndef SWAPSIM_SPDC_H
#define SWAPSIM_SPDC_H

#include <string>
#include <vector>

#include "swapsim/fock.h"

namespace swapsim {

/// Largest pair-emission probability accepted by the truncated expansion.
inline constexpr double kMaxPairProbability = 0.2;

/// A time-bin entangled pair source emitting into modes
/// `<mode_a>_e, <mode_a>_l, <mode_b>_e, <mode_b>_l`.
struct SourceSpec {
    double p = 0;
    std::string mode_a = "a";
    std::string mode_b = "b";
    int max_pairs = 2;
    /// Build the coherent superposition over pair numbers instead of the
    /// pair-number mixture.
    bool coherent_pair_number = false;

    std::string early(const std::string &prefix) const {
        return prefix + "_e";
    }
    std::string late(const std::string &prefix) const {
        return prefix + "_l";
    }
    /// The four mode labels in a_e, a_l, b_e, b_l order.
    std::vector<std::string> labels() const;
    /// Throws std::invalid_argument when p or max_pairs are out of range for `modes`.
    void validate(const ModeSet &modes) const;
};

/// (a_e^dag b_e^dag - a_l^dag b_l^dag)^k |0>, unnormalized.
PureState pair_creation_power(const SourceSpec &spec, const ModeSet &modes, int k);

/// Pair-number mixture: vacuum with weight 1 and the normalized k-pair state
/// with the weight of the k-th term of exp(sqrt(p/2) X)|0>, X the pair
/// creation operator. Two pairs carry weight 3p^2/4. Flagged unnormalized.
MixedEnsemble timebin_pair(const SourceSpec &spec, const ModeSet &modes);

/// Normalized truncation of exp(sqrt(p/2) X)|0> at `max_pairs` pairs.
PureState timebin_pair_pure(const SourceSpec &spec, const ModeSet &modes);

/// Either of the above depending on `coherent_pair_number`, as an ensemble.
/// The coherent variant is scaled so its vacuum weight is 1, matching the
/// mixture's convention.
MixedEnsemble source_ensemble(const SourceSpec &spec, const ModeSet &modes);

}  // namespace swapsim

#endif
