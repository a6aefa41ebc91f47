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

#include "swapsim/fock.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace swapsim {

namespace {

std::vector<std::size_t> indices_of(const ModeSet &modes, std::span<const std::string> labels) {
    std::vector<std::size_t> result;
    result.reserve(labels.size());
    for (const auto &label : labels) {
        result.push_back(modes.index_of(label));
    }
    return result;
}

// Gathers the nibbles at `positions` into a packed key, in the given order.
OccupationVector gather(const OccupationVector &occupation, std::span<const std::size_t> positions) {
    OccupationVector result;
    for (std::size_t k = 0; k < positions.size(); k++) {
        result = result.with(k, occupation[positions[k]]);
    }
    return result;
}

void require_same_labels(const ModeSet &a, const ModeSet &b, const char *what) {
    if (!a.same_labels(b)) {
        throw FockError(fmt::format("{}: states are defined on different mode sets", what));
    }
}

}  // namespace

ModeSet::ModeSet(std::vector<std::string> labels, int per_mode_cutoff, int total_cutoff)
    : labels_(std::move(labels)), per_mode_cutoff_(per_mode_cutoff), total_cutoff_(total_cutoff) {
    if (labels_.size() > kMaxModes) {
        throw FockError(fmt::format("at most {} modes are supported, got {}", kMaxModes, labels_.size()));
    }
    if (per_mode_cutoff_ < 1 || per_mode_cutoff_ > kMaxPerModeCutoff) {
        throw FockError(fmt::format("per_mode_cutoff must be in [1, {}], got {}", kMaxPerModeCutoff, per_mode_cutoff_));
    }
    if (total_cutoff_ < 1) {
        throw FockError(fmt::format("total_cutoff must be >= 1, got {}", total_cutoff_));
    }
    std::set<std::string_view> seen;
    for (const auto &label : labels_) {
        if (label.empty()) {
            throw FockError("mode labels must be nonempty");
        }
        if (!seen.insert(label).second) {
            throw FockError(fmt::format("duplicate mode label '{}'", label));
        }
    }
}

bool ModeSet::contains(std::string_view label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t ModeSet::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw FockError(fmt::format("unknown mode label '{}'", label));
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

ModeSet ModeSet::without(std::span<const std::string> drop) const {
    for (const auto &label : drop) {
        index_of(label);
    }
    std::vector<std::string> kept;
    for (const auto &label : labels_) {
        if (std::find(drop.begin(), drop.end(), label) == drop.end()) {
            kept.push_back(label);
        }
    }
    return ModeSet(std::move(kept), per_mode_cutoff_, total_cutoff_);
}

ModeSet ModeSet::joined(const ModeSet &other) const {
    std::vector<std::string> labels = labels_;
    for (const auto &label : other.labels_) {
        if (contains(label)) {
            throw FockError(fmt::format("mode label '{}' appears in both operands", label));
        }
        labels.push_back(label);
    }
    return ModeSet(
        std::move(labels),
        std::max(per_mode_cutoff_, other.per_mode_cutoff_),
        std::max(total_cutoff_, other.total_cutoff_));
}

ModeSet ModeSet::relabeled(std::string_view from, std::string_view to) const {
    std::size_t k = index_of(from);
    if (from != to && contains(to)) {
        throw FockError(fmt::format("cannot relabel '{}' to existing label '{}'", from, to));
    }
    std::vector<std::string> labels = labels_;
    labels[k] = std::string(to);
    return ModeSet(std::move(labels), per_mode_cutoff_, total_cutoff_);
}

ModeSet ModeSet::with_cutoffs(int per_mode_cutoff, int total_cutoff) const {
    return ModeSet(labels_, per_mode_cutoff, total_cutoff);
}

OccupationVector OccupationVector::from_counts(std::span<const int> counts) {
    if (counts.size() > ModeSet::kMaxModes) {
        throw FockError("too many occupation counts");
    }
    OccupationVector result;
    for (std::size_t k = 0; k < counts.size(); k++) {
        if (counts[k] < 0 || counts[k] > ModeSet::kMaxPerModeCutoff) {
            throw FockError(fmt::format("occupation {} out of range", counts[k]));
        }
        result = result.with(k, counts[k]);
    }
    return result;
}

int OccupationVector::total() const {
    // Nibble-wise horizontal add.
    uint64_t x = packed_;
    x = (x & 0x0F0F0F0F0F0F0F0FULL) + ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL);
    x = (x & 0x00FF00FF00FF00FFULL) + ((x >> 8) & 0x00FF00FF00FF00FFULL);
    x = (x & 0x0000FFFF0000FFFFULL) + ((x >> 16) & 0x0000FFFF0000FFFFULL);
    x = (x & 0x00000000FFFFFFFFULL) + (x >> 32);
    return static_cast<int>(x);
}

std::vector<int> OccupationVector::counts(std::size_t num_modes) const {
    std::vector<int> result(num_modes);
    for (std::size_t k = 0; k < num_modes; k++) {
        result[k] = (*this)[k];
    }
    return result;
}

PureState::PureState(ModeSet modes) : modes_(std::move(modes)) {
}

PureState PureState::vacuum(ModeSet modes) {
    PureState result(std::move(modes));
    result.amplitudes_[OccupationVector{}] = 1.0;
    return result;
}

PureState PureState::basis(ModeSet modes, std::initializer_list<std::pair<std::string_view, int>> occupations) {
    PureState result(std::move(modes));
    result.add(result.occupation(occupations), 1.0);
    return result;
}

OccupationVector PureState::occupation(std::initializer_list<std::pair<std::string_view, int>> occupations) const {
    OccupationVector occ;
    for (const auto &[label, count] : occupations) {
        if (count < 0 || count > ModeSet::kMaxPerModeCutoff) {
            throw FockError(fmt::format("occupation {} of mode '{}' out of range", count, label));
        }
        occ = occ.with(modes_.index_of(label), count);
    }
    return occ;
}

Amplitude PureState::amplitude(const OccupationVector &occupation) const {
    auto it = amplitudes_.find(occupation);
    return it == amplitudes_.end() ? Amplitude{} : it->second;
}

Amplitude PureState::amplitude(std::initializer_list<std::pair<std::string_view, int>> occupations) const {
    return amplitude(occupation(occupations));
}

double PureState::norm_squared() const {
    double total = 0;
    for (const auto &[occ, amp] : amplitudes_) {
        total += std::norm(amp);
    }
    return total;
}

bool PureState::fits(const OccupationVector &occupation) const {
    for (std::size_t k = 0; k < modes_.size(); k++) {
        if (occupation[k] > modes_.per_mode_cutoff()) {
            return false;
        }
    }
    // Nibbles beyond the mode count must be empty.
    if (modes_.size() < ModeSet::kMaxModes && (occupation.packed() >> (4 * modes_.size())) != 0) {
        return false;
    }
    return occupation.total() <= modes_.total_cutoff();
}

void PureState::add(const OccupationVector &occupation, Amplitude value) {
    if (!fits(occupation)) {
        throw FockError("occupation vector exceeds the mode set cutoffs");
    }
    amplitudes_[occupation] += value;
}

void PureState::add_or_truncate(const OccupationVector &occupation, Amplitude value) {
    if (!fits(occupation)) {
        truncation_.events++;
        truncation_.lost_weight += std::norm(value);
        return;
    }
    amplitudes_[occupation] += value;
}

PureState PureState::scaled(Amplitude factor) const {
    PureState result = *this;
    for (auto &[occ, amp] : result.amplitudes_) {
        amp *= factor;
    }
    return result;
}

PureState PureState::normalized() const {
    double n2 = norm_squared();
    if (n2 <= 0) {
        throw FockError("cannot normalize the zero state");
    }
    return scaled(1.0 / std::sqrt(n2));
}

PureState PureState::pruned(double threshold) const {
    PureState result(modes_);
    result.truncation_ = truncation_;
    for (const auto &[occ, amp] : amplitudes_) {
        if (std::abs(amp) >= threshold) {
            result.amplitudes_.emplace(occ, amp);
        }
    }
    return result;
}

PureState &PureState::operator+=(const PureState &other) {
    require_same_labels(modes_, other.modes_, "addition");
    for (const auto &[occ, amp] : other.amplitudes_) {
        add_or_truncate(occ, amp);
    }
    truncation_ += other.truncation_;
    return *this;
}

PureState &PureState::operator-=(const PureState &other) {
    return *this += other.scaled(-1.0);
}

MixedEnsemble::MixedEnsemble(ModeSet modes, bool unnormalized)
    : modes_(std::move(modes)), unnormalized_(unnormalized) {
}

MixedEnsemble MixedEnsemble::pure(const PureState &state) {
    MixedEnsemble result(state.modes());
    result.add_state(1.0, state);
    return result;
}

void MixedEnsemble::add_branch(double weight, PureState state) {
    if (!(weight >= 0) || !std::isfinite(weight)) {
        throw FockError(fmt::format("branch weight must be finite and non-negative, got {}", weight));
    }
    require_same_labels(modes_, state.modes(), "add_branch");
    if (std::abs(state.norm_squared() - 1.0) > kNormTolerance) {
        throw FockError(fmt::format("branch state must have unit norm, got {}", state.norm_squared()));
    }
    if (weight == 0) {
        return;
    }
    branches_.push_back({weight, std::move(state)});
    if (!unnormalized_ && trace() > 1.0 + kNormTolerance) {
        throw FockError(fmt::format("ensemble trace {} exceeds 1; mark it unnormalized", trace()));
    }
}

void MixedEnsemble::add_state(double weight, const PureState &state) {
    double n2 = state.norm_squared();
    if (n2 <= 0 || weight == 0) {
        Truncation t = state.truncation();
        t.lost_weight *= weight;
        dropped_ += t;
        return;
    }
    add_branch(weight * n2, state.normalized());
}

void MixedEnsemble::add_ensemble(const MixedEnsemble &other, double scale) {
    dropped_ += other.dropped_;
    for (const auto &branch : other.branches_) {
        add_branch(branch.weight * scale, branch.state);
    }
}

double MixedEnsemble::trace() const {
    double total = 0;
    for (const auto &branch : branches_) {
        total += branch.weight;
    }
    return total;
}

Truncation MixedEnsemble::truncation() const {
    Truncation total = dropped_;
    for (const auto &branch : branches_) {
        Truncation t = branch.state.truncation();
        t.lost_weight *= branch.weight;
        total += t;
    }
    return total;
}

MixedEnsemble MixedEnsemble::normalized() const {
    double t = trace();
    if (t <= 0) {
        throw FockError("cannot normalize an ensemble with zero trace");
    }
    MixedEnsemble result(modes_);
    result.dropped_ = dropped_;
    result.branches_.reserve(branches_.size());
    for (const auto &branch : branches_) {
        result.branches_.push_back({branch.weight / t, branch.state});
    }
    return result;
}

MixedEnsemble MixedEnsemble::marked_unnormalized() const {
    MixedEnsemble result = *this;
    result.unnormalized_ = true;
    return result;
}

namespace {

PureState ladder(const PureState &state, std::string_view mode, bool raise) {
    std::size_t k = state.modes().index_of(mode);
    PureState result(state.modes());
    result.record_truncation(state.truncation());
    for (const auto &[occ, amp] : state.amplitudes()) {
        int n = occ[k];
        if (raise) {
            if (n >= ModeSet::kMaxPerModeCutoff) {
                Truncation t{1, std::norm(amp) * (n + 1)};
                result.record_truncation(t);
                continue;
            }
            result.add_or_truncate(occ.with(k, n + 1), amp * std::sqrt(static_cast<double>(n + 1)));
        } else if (n > 0) {
            result.add(occ.with(k, n - 1), amp * std::sqrt(static_cast<double>(n)));
        }
    }
    return result;
}

}  // namespace

PureState create(const PureState &state, std::string_view mode) {
    return ladder(state, mode, true);
}

PureState annihilate(const PureState &state, std::string_view mode) {
    return ladder(state, mode, false);
}

PureState phase_shift(const PureState &state, std::string_view mode, double phase) {
    std::size_t k = state.modes().index_of(mode);
    PureState shifted(state.modes());
    shifted.record_truncation(state.truncation());
    for (const auto &[occ, amp] : state.amplitudes()) {
        shifted.add(occ, amp * std::polar(1.0, phase * occ[k]));
    }
    return shifted;
}

PureState relabel(const PureState &state, std::string_view from, std::string_view to) {
    PureState result(state.modes().relabeled(from, to));
    result.record_truncation(state.truncation());
    for (const auto &[occ, amp] : state.amplitudes()) {
        result.add(occ, amp);
    }
    return result;
}

MixedEnsemble relabel(const MixedEnsemble &rho, std::string_view from, std::string_view to) {
    MixedEnsemble result(rho.modes().relabeled(from, to), rho.unnormalized());
    result.record_truncation(rho.dropped_truncation());
    for (const auto &branch : rho.branches()) {
        result.add_branch(branch.weight, relabel(branch.state, from, to));
    }
    return result;
}

PureState tensor(const PureState &a, const PureState &b) {
    PureState result(a.modes().joined(b.modes()));
    result.record_truncation(a.truncation());
    result.record_truncation(b.truncation());
    const unsigned shift = static_cast<unsigned>(4 * a.modes().size());
    for (const auto &[occ_a, amp_a] : a.amplitudes()) {
        for (const auto &[occ_b, amp_b] : b.amplitudes()) {
            uint64_t packed = occ_a.packed() | (shift >= 64 ? 0 : occ_b.packed() << shift);
            result.add_or_truncate(OccupationVector(packed), amp_a * amp_b);
        }
    }
    return result;
}

MixedEnsemble tensor(const MixedEnsemble &a, const MixedEnsemble &b) {
    MixedEnsemble result(a.modes().joined(b.modes()), a.unnormalized() || b.unnormalized());
    result.record_truncation(a.dropped_truncation());
    result.record_truncation(b.dropped_truncation());
    for (const auto &branch_a : a.branches()) {
        for (const auto &branch_b : b.branches()) {
            result.add_state(branch_a.weight * branch_b.weight, tensor(branch_a.state, branch_b.state));
        }
    }
    return result;
}

Amplitude inner(const PureState &a, const PureState &b) {
    require_same_labels(a.modes(), b.modes(), "inner");
    const auto &small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
    const auto &large = &small == &a ? b : a;
    Amplitude total{};
    for (const auto &[occ, amp] : small.amplitudes()) {
        auto it = large.amplitudes().find(occ);
        if (it == large.amplitudes().end()) {
            continue;
        }
        total += &small == &a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return total;
}

double fidelity(const MixedEnsemble &rho, const PureState &target) {
    if (std::abs(target.norm_squared() - 1.0) > kNormTolerance) {
        throw FockError("fidelity target must be normalized");
    }
    double t = rho.trace();
    if (t <= 0) {
        throw FockError("fidelity of an ensemble with zero trace is undefined");
    }
    double overlap = 0;
    for (const auto &branch : rho.branches()) {
        overlap += branch.weight * std::norm(inner(target, branch.state));
    }
    return std::clamp(overlap / t, 0.0, 1.0);
}

double number_expectation(const PureState &state, std::string_view mode) {
    std::size_t k = state.modes().index_of(mode);
    double total = 0;
    for (const auto &[occ, amp] : state.amplitudes()) {
        total += occ[k] * std::norm(amp);
    }
    return total;
}

PureState restrict(const PureState &state, std::span<const std::string> keep) {
    const ModeSet &modes = state.modes();
    auto keep_idx = indices_of(modes, keep);
    std::vector<std::string> drop_labels;
    for (const auto &label : modes.labels()) {
        if (std::find(keep.begin(), keep.end(), label) == keep.end()) {
            drop_labels.push_back(label);
        }
    }
    auto drop_idx = indices_of(modes, drop_labels);

    PureState result(ModeSet(std::vector<std::string>(keep.begin(), keep.end()), modes.per_mode_cutoff(), modes.total_cutoff()));
    result.record_truncation(state.truncation());
    bool first = true;
    OccupationVector dropped_reference;
    for (const auto &[occ, amp] : state.amplitudes()) {
        OccupationVector dropped = gather(occ, drop_idx);
        if (first) {
            dropped_reference = dropped;
            first = false;
        } else if (dropped != dropped_reference) {
            throw FockError("restrict: dropped modes are correlated with kept modes; use branch_trace");
        }
        result.add(gather(occ, keep_idx), amp);
    }
    return result;
}

MixedEnsemble branch_trace(const MixedEnsemble &rho, std::span<const std::string> drop) {
    const ModeSet &modes = rho.modes();
    ModeSet kept_modes = modes.without(drop);
    auto keep_idx = indices_of(modes, kept_modes.labels());
    auto drop_idx = indices_of(modes, drop);

    MixedEnsemble result(kept_modes, rho.unnormalized());
    result.record_truncation(rho.dropped_truncation());
    for (const auto &branch : rho.branches()) {
        std::map<OccupationVector, PureState> groups;
        for (const auto &[occ, amp] : branch.state.amplitudes()) {
            auto [it, inserted] = groups.try_emplace(gather(occ, drop_idx), kept_modes);
            it->second.add(gather(occ, keep_idx), amp);
        }
        for (auto &[dropped, part] : groups) {
            part.record_truncation(branch.state.truncation());
            result.add_state(branch.weight, part);
        }
    }
    return result;
}

std::string to_string(const PureState &state) {
    if (state.is_zero()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto &[occ, amp] : state.amplitudes()) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << "(" << amp.real();
        if (amp.imag() != 0) {
            out << (amp.imag() < 0 ? "-" : "+") << std::abs(amp.imag()) << "i";
        }
        out << ")|";
        bool first_mode = true;
        for (std::size_t k = 0; k < state.modes().size(); k++) {
            if (occ[k] == 0) {
                continue;
            }
            if (!first_mode) {
                out << ",";
            }
            first_mode = false;
            out << state.modes().labels()[k] << "=" << occ[k];
        }
        out << ">";
    }
    return out.str();
}

}  // namespace swapsim
