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

#include "swapsim/optics.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "combinatorics.h"

namespace swapsim {

DetectorModel DetectorModel::threshold(double efficiency) {
    DetectorModel model{efficiency, DetectorKind::kThreshold};
    model.validate();
    return model;
}

DetectorModel DetectorModel::number_resolving(double efficiency) {
    DetectorModel model{efficiency, DetectorKind::kNumberResolving};
    model.validate();
    return model;
}

void DetectorModel::validate() const {
    if (!(efficiency >= 0 && efficiency <= 1)) {
        throw std::invalid_argument(fmt::format("detector efficiency must be in [0, 1], got {}", efficiency));
    }
}

bool DetectionOutcome::accepts(int detected) const {
    switch (kind) {
        case Kind::kClick:
            return detected >= 1;
        case Kind::kNoClick:
            return detected == 0;
        case Kind::kCount:
            return detected == count;
    }
    return false;
}

std::string DetectionOutcome::describe() const {
    switch (kind) {
        case Kind::kClick:
            return "click";
        case Kind::kNoClick:
            return "no-click";
        case Kind::kCount:
            return fmt::format("count={}", count);
    }
    return "?";
}

PureState two_mode_transform(const PureState &state, std::string_view m1, std::string_view m2, const ModeTransform &u) {
    const std::size_t i1 = state.modes().index_of(m1);
    const std::size_t i2 = state.modes().index_of(m2);
    if (i1 == i2) {
        throw std::invalid_argument("two_mode_transform needs two distinct modes");
    }

    std::map<OccupationVector, Amplitude> accumulated;
    Truncation overflow;
    for (const auto &[occ, amp] : state.amplitudes()) {
        const int n1 = occ[i1];
        const int n2 = occ[i2];
        const int total = n1 + n2;
        const double norm = 1.0 / std::sqrt(factorial(n1) * factorial(n2));
        for (int j = 0; j <= n1; j++) {
            Amplitude from_first = binomial(n1, j) * int_pow(u[0][0], j) * int_pow(u[0][1], n1 - j);
            for (int k = 0; k <= n2; k++) {
                Amplitude coefficient = from_first * binomial(n2, k) * int_pow(u[1][0], k) * int_pow(u[1][1], n2 - k);
                const int out1 = j + k;
                const int out2 = total - out1;
                Amplitude value = amp * norm * coefficient * std::sqrt(factorial(out1) * factorial(out2));
                if (value == Amplitude{}) {
                    continue;
                }
                if (out1 > ModeSet::kMaxPerModeCutoff || out2 > ModeSet::kMaxPerModeCutoff) {
                    overflow.events++;
                    overflow.lost_weight += std::norm(value);
                    continue;
                }
                accumulated[occ.with(i1, out1).with(i2, out2)] += value;
            }
        }
    }

    PureState result(state.modes());
    result.record_truncation(state.truncation());
    result.record_truncation(overflow);
    for (const auto &[occ, value] : accumulated) {
        if (std::abs(value) < kDefaultPruneThreshold) {
            continue;
        }
        result.add_or_truncate(occ, value);
    }
    return result;
}

PureState beamsplitter(const PureState &state, std::string_view m1, std::string_view m2, double transmittance, double phase) {
    if (!(transmittance >= 0 && transmittance <= 1)) {
        throw std::invalid_argument(fmt::format("transmittance must be in [0, 1], got {}", transmittance));
    }
    const double t = std::sqrt(transmittance);
    const double r = std::sqrt(1 - transmittance);
    const Amplitude e = std::polar(1.0, phase);
    ModeTransform u{{{t, -e * r}, {r, e * t}}};
    return two_mode_transform(state, m1, m2, u);
}

PureState balanced_beamsplitter(const PureState &state, std::string_view m1, std::string_view m2) {
    const double h = std::numbers::sqrt2 / 2;
    ModeTransform u{{{h, h}, {h, -h}}};
    return two_mode_transform(state, m1, m2, u);
}

MixedEnsemble balanced_beamsplitter(const MixedEnsemble &rho, std::string_view m1, std::string_view m2) {
    MixedEnsemble result(rho.modes(), rho.unnormalized());
    result.record_truncation(rho.dropped_truncation());
    for (const auto &branch : rho.branches()) {
        result.add_state(branch.weight, balanced_beamsplitter(branch.state, m1, m2));
    }
    return result;
}

MixedEnsemble loss(const MixedEnsemble &rho, std::string_view mode, double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        throw std::invalid_argument(fmt::format("loss transmission must be in [0, 1], got {}", eta));
    }
    const std::size_t index = rho.modes().index_of(mode);
    MixedEnsemble result(rho.modes(), rho.unnormalized());
    result.record_truncation(rho.dropped_truncation());
    for (const auto &branch : rho.branches()) {
        int max_n = 0;
        for (const auto &[occ, amp] : branch.state.amplitudes()) {
            max_n = std::max(max_n, occ[index]);
        }
        // One Kraus operator per number of lost photons.
        for (int lost = 0; lost <= max_n; lost++) {
            PureState part(rho.modes());
            part.record_truncation(branch.state.truncation());
            for (const auto &[occ, amp] : branch.state.amplitudes()) {
                const int n = occ[index];
                if (n < lost) {
                    continue;
                }
                const double p = binomial(n, lost) * std::pow(eta, n - lost) * std::pow(1 - eta, lost);
                if (p == 0) {
                    continue;
                }
                part.add(occ.with(index, n - lost), amp * std::sqrt(p));
            }
            result.add_state(branch.weight, part);
        }
    }
    return result;
}

namespace {

struct MeasuredMode {
    std::string label;
    std::size_t index;
    DetectorModel model;
    std::vector<DetectionOutcome> outcomes;

    bool accepts(int detected) const {
        return std::all_of(outcomes.begin(), outcomes.end(), [&](const DetectionOutcome &o) {
            return o.accepts(detected);
        });
    }

    // Probability that n photons in the mode produce an accepted record.
    double acceptance(int n) const {
        double total = 0;
        for (int m = 0; m <= n; m++) {
            if (accepts(m)) {
                total += binomial(n, m) * std::pow(model.efficiency, m) * std::pow(1 - model.efficiency, n - m);
            }
        }
        return total;
    }
};

void validate_record(const DetectionSpec &record) {
    record.model.validate();
    if (record.outcome.kind == DetectionOutcome::Kind::kCount) {
        if (record.model.kind != DetectorKind::kNumberResolving) {
            throw std::invalid_argument(fmt::format("threshold detector on '{}' cannot report a photon count", record.mode));
        }
        if (record.outcome.count < 0) {
            throw std::invalid_argument("photon count outcome must be non-negative");
        }
    }
}

std::string describe_records(std::span<const DetectionSpec> records) {
    std::string out;
    for (const auto &record : records) {
        if (!out.empty()) {
            out += ' ';
        }
        out += fmt::format("{}:{}", record.mode, record.outcome.describe());
    }
    return out;
}

}  // namespace

MixedEnsemble postselect(const MixedEnsemble &rho, std::span<const DetectionSpec> records) {
    std::vector<MeasuredMode> measured;
    for (const auto &record : records) {
        validate_record(record);
        auto it = std::find_if(measured.begin(), measured.end(), [&](const MeasuredMode &m) {
            return m.label == record.mode;
        });
        if (it == measured.end()) {
            measured.push_back({record.mode, rho.modes().index_of(record.mode), record.model, {record.outcome}});
        } else {
            if (it->model.efficiency != record.model.efficiency || it->model.kind != record.model.kind) {
                throw std::invalid_argument(fmt::format("conflicting detector models on mode '{}'", record.mode));
            }
            it->outcomes.push_back(record.outcome);
        }
    }
    if (measured.empty()) {
        return rho;
    }

    std::vector<std::string> dropped;
    for (const auto &m : measured) {
        dropped.push_back(m.label);
    }
    ModeSet kept = rho.modes().without(dropped);
    std::vector<std::size_t> kept_index;
    for (const auto &label : kept.labels()) {
        kept_index.push_back(rho.modes().index_of(label));
    }

    MixedEnsemble result(kept, rho.unnormalized());
    result.record_truncation(rho.dropped_truncation());
    for (const auto &branch : rho.branches()) {
        // Components with different measured occupations are orthogonal records.
        std::map<std::vector<int>, PureState> groups;
        for (const auto &[occ, amp] : branch.state.amplitudes()) {
            std::vector<int> key;
            key.reserve(measured.size());
            for (const auto &m : measured) {
                key.push_back(occ[m.index]);
            }
            OccupationVector rest;
            for (std::size_t k = 0; k < kept_index.size(); k++) {
                rest = rest.with(k, occ[kept_index[k]]);
            }
            auto [it, inserted] = groups.try_emplace(std::move(key), kept);
            it->second.add(rest, amp);
        }
        for (auto &[key, part] : groups) {
            double accept = 1;
            for (std::size_t k = 0; k < measured.size() && accept > 0; k++) {
                accept *= measured[k].acceptance(key[k]);
            }
            if (accept <= 0) {
                continue;
            }
            part.record_truncation(branch.state.truncation());
            result.add_state(branch.weight * accept, part);
        }
    }
    return result;
}

HeraldedOutcome condition_joint(const MixedEnsemble &rho, std::span<const DetectionSpec> records) {
    MixedEnsemble kept = postselect(rho, records);
    double probability = kept.trace();
    std::string pattern = describe_records(records);
    if (probability <= 0) {
        return {0.0, MixedEnsemble(kept.modes()), std::move(pattern)};
    }
    return {probability, kept.normalized(), std::move(pattern)};
}

HeraldedOutcome detect(const MixedEnsemble &rho, std::string_view mode, const DetectorModel &model, DetectionOutcome outcome) {
    DetectionSpec record{std::string(mode), model, outcome};
    return condition_joint(rho, std::span<const DetectionSpec>(&record, 1));
}

std::vector<DetectionOutcome> possible_outcomes(DetectorKind kind, int max_photons) {
    if (kind == DetectorKind::kThreshold) {
        return {DetectionOutcome::click(), DetectionOutcome::no_click()};
    }
    std::vector<DetectionOutcome> result;
    for (int n = 0; n <= max_photons; n++) {
        result.push_back(DetectionOutcome::exactly(n));
    }
    return result;
}

}  // namespace swapsim
