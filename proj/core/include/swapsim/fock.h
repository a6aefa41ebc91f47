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

#ifndef SWAPSIM_FOCK_H
#define SWAPSIM_FOCK_H

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swapsim {

using Amplitude = std::complex<double>;

/// Tolerance on state norms and ensemble traces.
inline constexpr double kNormTolerance = 1e-9;
/// Amplitudes smaller than this (in magnitude) are dropped by `pruned`.
inline constexpr double kDefaultPruneThreshold = 1e-15;

/// Thrown when an operation is asked to act on modes in a way the
/// representation cannot express (e.g. restricting away entangled modes).
struct FockError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bookkeeping for components discarded because they exceeded a cutoff.
struct Truncation {
    std::size_t events = 0;
    /// Sum of squared magnitudes of the discarded amplitudes.
    double lost_weight = 0;

    bool is_zero() const {
        return events == 0;
    }
    Truncation &operator+=(const Truncation &other) {
        events += other.events;
        lost_weight += other.lost_weight;
        return *this;
    }
};

/// Ordered set of labelled bosonic modes with occupation cutoffs.
///
/// The label order fixes the canonical basis ordering. Every public operation
/// addresses modes by label; indices are an internal detail.
class ModeSet {
   public:
    static constexpr std::size_t kMaxModes = 16;
    static constexpr int kMaxPerModeCutoff = 15;

    ModeSet(std::vector<std::string> labels, int per_mode_cutoff, int total_cutoff);

    std::size_t size() const {
        return labels_.size();
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    int per_mode_cutoff() const {
        return per_mode_cutoff_;
    }
    int total_cutoff() const {
        return total_cutoff_;
    }

    bool contains(std::string_view label) const;
    /// Throws FockError for unknown labels.
    std::size_t index_of(std::string_view label) const;

    /// Same cutoffs, with `drop` removed. Every dropped label must exist.
    ModeSet without(std::span<const std::string> drop) const;
    /// Concatenation of two disjoint mode sets; each cutoff is the larger of the two.
    ModeSet joined(const ModeSet &other) const;
    ModeSet relabeled(std::string_view from, std::string_view to) const;
    ModeSet with_cutoffs(int per_mode_cutoff, int total_cutoff) const;

    bool same_labels(const ModeSet &other) const {
        return labels_ == other.labels_;
    }
    bool operator==(const ModeSet &other) const = default;

   private:
    std::vector<std::string> labels_;
    int per_mode_cutoff_;
    int total_cutoff_;
};

/// Occupation numbers of up to 16 modes packed four bits per mode.
class OccupationVector {
   public:
    constexpr OccupationVector() = default;
    constexpr explicit OccupationVector(uint64_t packed) : packed_(packed) {
    }
    static OccupationVector from_counts(std::span<const int> counts);

    int operator[](std::size_t mode) const {
        return static_cast<int>((packed_ >> (4 * mode)) & 0xF);
    }
    OccupationVector with(std::size_t mode, int count) const {
        uint64_t mask = uint64_t{0xF} << (4 * mode);
        return OccupationVector((packed_ & ~mask) | (static_cast<uint64_t>(count) << (4 * mode)));
    }
    int total() const;
    uint64_t packed() const {
        return packed_;
    }
    std::vector<int> counts(std::size_t num_modes) const;

    auto operator<=>(const OccupationVector &) const = default;

   private:
    uint64_t packed_ = 0;
};

/// Sparse superposition over the truncated occupation-number basis.
///
/// Sub-normalized states are legal; they represent conditional branches.
class PureState {
   public:
    using AmplitudeMap = std::map<OccupationVector, Amplitude>;

    /// The zero vector on `modes`.
    explicit PureState(ModeSet modes);

    static PureState vacuum(ModeSet modes);
    /// Single basis state, e.g. basis(modes, {{"a_e", 1}, {"b_e", 1}}).
    static PureState basis(ModeSet modes, std::initializer_list<std::pair<std::string_view, int>> occupations);

    const ModeSet &modes() const {
        return modes_;
    }
    const AmplitudeMap &amplitudes() const {
        return amplitudes_;
    }
    const Truncation &truncation() const {
        return truncation_;
    }
    bool is_zero() const {
        return amplitudes_.empty();
    }

    Amplitude amplitude(const OccupationVector &occupation) const;
    /// Amplitude of a basis state given by label/count pairs (unlisted modes empty).
    Amplitude amplitude(std::initializer_list<std::pair<std::string_view, int>> occupations) const;
    OccupationVector occupation(std::initializer_list<std::pair<std::string_view, int>> occupations) const;

    double norm_squared() const;

    /// Adds `value` to the amplitude of `occupation`. Occupations violating the
    /// cutoffs are rejected with FockError.
    void add(const OccupationVector &occupation, Amplitude value);
    /// Like add, but above-cutoff components are discarded and recorded as truncation.
    void add_or_truncate(const OccupationVector &occupation, Amplitude value);
    void record_truncation(const Truncation &t) {
        truncation_ += t;
    }

    bool fits(const OccupationVector &occupation) const;

    PureState scaled(Amplitude factor) const;
    /// Unit-norm copy. Throws FockError on the zero state.
    PureState normalized() const;
    PureState pruned(double threshold = kDefaultPruneThreshold) const;

    PureState &operator+=(const PureState &other);
    PureState &operator-=(const PureState &other);
    friend PureState operator+(PureState a, const PureState &b) {
        return a += b;
    }
    friend PureState operator-(PureState a, const PureState &b) {
        return a -= b;
    }
    friend PureState operator*(Amplitude factor, const PureState &s) {
        return s.scaled(factor);
    }

   private:
    ModeSet modes_;
    AmplitudeMap amplitudes_;
    Truncation truncation_;
};

struct Branch {
    double weight;
    PureState state;
};

/// Density operator as a weighted list of unit-norm pure states.
class MixedEnsemble {
   public:
    explicit MixedEnsemble(ModeSet modes, bool unnormalized = false);
    static MixedEnsemble pure(const PureState &state);

    const ModeSet &modes() const {
        return modes_;
    }
    const std::vector<Branch> &branches() const {
        return branches_;
    }
    bool unnormalized() const {
        return unnormalized_;
    }
    bool empty() const {
        return branches_.empty();
    }

    /// Appends a branch. `state` must be unit norm within kNormTolerance.
    void add_branch(double weight, PureState state);
    /// Appends `weight * |state><state|` for an arbitrary (sub-normalized) state;
    /// the norm is folded into the weight. Zero states are skipped.
    void add_state(double weight, const PureState &state);
    void add_ensemble(const MixedEnsemble &other, double scale = 1.0);

    double trace() const;
    Truncation truncation() const;
    /// Unit-trace copy with the unnormalized flag cleared. Throws on zero trace.
    MixedEnsemble normalized() const;
    /// Copy with the unnormalized flag set, so trace may exceed 1.
    MixedEnsemble marked_unnormalized() const;

    /// Records truncation of branches that vanished entirely, so it is not
    /// lost with them. `truncation` includes it.
    void record_truncation(const Truncation &t) {
        dropped_ += t;
    }
    const Truncation &dropped_truncation() const {
        return dropped_;
    }

   private:
    ModeSet modes_;
    std::vector<Branch> branches_;
    bool unnormalized_;
    Truncation dropped_;
};

PureState create(const PureState &state, std::string_view mode);
PureState annihilate(const PureState &state, std::string_view mode);
/// Multiplies each component by exp(i * phase * n_mode).
PureState phase_shift(const PureState &state, std::string_view mode, double phase);
/// Renames a mode; the basis ordering keeps the label's position.
PureState relabel(const PureState &state, std::string_view from, std::string_view to);
MixedEnsemble relabel(const MixedEnsemble &rho, std::string_view from, std::string_view to);

/// Product state on the concatenated mode set. Labels must be disjoint;
/// components above the joined cutoffs are truncated and recorded.
PureState tensor(const PureState &a, const PureState &b);
MixedEnsemble tensor(const MixedEnsemble &a, const MixedEnsemble &b);

/// <a|b>. Both states must share the same mode labels.
Amplitude inner(const PureState &a, const PureState &b);

/// <target|rho|target> / tr(rho).
double fidelity(const MixedEnsemble &rho, const PureState &target);

/// <psi| n_mode |psi>.
double number_expectation(const PureState &state, std::string_view mode);

/// Drops modes that are in a definite occupation shared by every component.
/// Throws FockError if the dropped modes are correlated with the kept ones.
PureState restrict(const PureState &state, std::span<const std::string> keep);

/// Partial trace over `drop`, done by measuring the dropped modes in the
/// occupation basis and forgetting the outcome.
MixedEnsemble branch_trace(const MixedEnsemble &rho, std::span<const std::string> drop);

std::string to_string(const PureState &state);

}  // namespace swapsim

#endif
