#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "omamrc/source_set.hpp"

namespace omamrc {

/// One second-phase transmission: who sent, and the decoding set it held at
/// the start of the round (a source always holds exactly itself).
struct TransmissionRecord {
    NodeId transmitter;
    SourceSet snapshot;
    int round = 0;
};

/// A transmission as received by one observer, with that observer's link MI.
struct HeardTransmission {
    TransmissionRecord record;
    double mi = 0.0;
};

/// The node under evaluation for the current round, not yet part of any
/// history.
struct Candidate {
    NodeId node;
    SourceSet snapshot;
    double mi = 0.0;
};

/// Everything a receiver (relay or destination) has accumulated in a frame.
///
/// For the destination this is the set P_{t-1}: the selected nodes with
/// their decoding-set snapshots, plus its own decoding set.
struct ObserverState {
    NodeId observer;
    double alpha = 0.0;
    /// First-phase MI from each source to this observer.
    std::vector<double> phase1_mi;
    std::vector<HeardTransmission> history;
    SourceSet decoded;

    int sources() const { return static_cast<int>(phase1_mi.size()); }
    SourceSet undecoded() const { return SourceSet::all(sources()) - decoded; }
};

namespace detail {

inline bool useful_for(SourceSet snapshot, SourceSet joint, SourceSet interference)
{
    return snapshot.intersects(joint) && !snapshot.intersects(interference);
}

} // namespace detail

/// Right-hand side of the MAC inequality for the sources in `joint`, with
/// `interference` treated as noise. A second-phase transmission adds one
/// alpha-weighted term when its snapshot covers part of `joint` and none of
/// `interference`.
inline double accumulated_information(SourceSet joint, SourceSet interference, const ObserverState& state,
                                      const std::optional<Candidate>& candidate)
{
    double total = 0.0;
    for (std::size_t s = 0; s < state.phase1_mi.size(); ++s) {
        if (joint.contains(static_cast<int>(s))) {
            total += state.phase1_mi[s];
        }
    }
    for (const auto& heard : state.history) {
        if (detail::useful_for(heard.record.snapshot, joint, interference)) {
            total += state.alpha * heard.mi;
        }
    }
    if (candidate && detail::useful_for(candidate->snapshot, joint, interference)) {
        total += state.alpha * candidate->mi;
    }
    return total;
}

/// True when the sum rate of `joint` exceeds what the observer has
/// accumulated for it.
inline bool mac_constraint_violated(SourceSet joint, SourceSet interference, const ObserverState& state,
                                    std::span<const double> rates, const std::optional<Candidate>& candidate = {})
{
    double sum_rate = 0.0;
    for (std::size_t s = 0; s < rates.size(); ++s) {
        if (joint.contains(static_cast<int>(s))) {
            sum_rate += rates[s];
        }
    }
    return sum_rate > accumulated_information(joint, interference, state, candidate);
}

/// Common outage of the subset `group` of the observer's undecoded sources;
/// the remaining undecoded sources act as interference.
inline bool common_outage_of_subset(SourceSet group, const ObserverState& state, std::span<const double> rates,
                                    const std::optional<Candidate>& candidate = {})
{
    if (group.empty()) {
        return false;
    }
    const SourceSet interference = state.undecoded() - group;
    return any_nonempty_subset(group, [&](SourceSet joint) {
        return mac_constraint_violated(joint, interference, state, rates, candidate);
    });
}

/// Largest subset of `undecoded` that is not in common outage, scanning by
/// decreasing size and lexicographically within a size. Empty when every
/// subset is in outage.
inline SourceSet best_decodable_subset(SourceSet undecoded, const ObserverState& state,
                                       std::span<const double> rates,
                                       const std::optional<Candidate>& candidate = {})
{
    for (int size = undecoded.size(); size >= 1; --size) {
        const SourceSet found = first_subset_of_size(undecoded, size, [&](SourceSet group) {
            return !common_outage_of_subset(group, state, rates, candidate);
        });
        if (!found.empty()) {
            return found;
        }
    }
    return {};
}

/// Reference search for best_decodable_subset: scans every subset of
/// `undecoded` and keeps the largest non-outage one, preferring the
/// lexicographically smallest member list among equals.
inline SourceSet brute_force_decodable_subset(SourceSet undecoded, const ObserverState& state,
                                              std::span<const double> rates,
                                              const std::optional<Candidate>& candidate = {})
{
    SourceSet best;
    std::vector<int> best_members;
    const auto pool = undecoded.mask();
    for (SourceSet::mask_type mask = 0;; mask = (mask - pool) & pool) {
        const SourceSet group = SourceSet::from_mask(mask);
        if (!group.empty() && !common_outage_of_subset(group, state, rates, candidate)) {
            const auto members = group.members();
            if (group.size() > best.size() || (group.size() == best.size() && members < best_members)) {
                best = group;
                best_members = members;
            }
        }
        if (mask == pool) {
            break;
        }
    }
    return best;
}

/// Individual outage of source `s`: for every interference set not holding
/// s, some joint set containing s violates its MAC inequality.
inline bool individual_outage(int s, const ObserverState& state, std::span<const double> rates,
                              const std::optional<Candidate>& candidate = {})
{
    const SourceSet undecoded = state.undecoded();
    const SourceSet others = undecoded - SourceSet::single(s);
    const auto pool = others.mask();
    for (SourceSet::mask_type mask = 0;; mask = (mask - pool) & pool) {
        const SourceSet interference = SourceSet::from_mask(mask);
        const SourceSet rest = undecoded - interference - SourceSet::single(s);
        const bool violated =
            mac_constraint_violated(SourceSet::single(s), interference, state, rates, candidate) ||
            any_nonempty_subset(rest, [&](SourceSet extra) {
                return mac_constraint_violated(extra | SourceSet::single(s), interference, state, rates, candidate);
            });
        if (!violated) {
            return false;
        }
        if (mask == pool) {
            break;
        }
    }
    return true;
}

/// Appends a heard transmission. A half-duplex node cannot hear itself.
inline ObserverState apply_transmission(ObserverState state, const TransmissionRecord& record, double observer_mi)
{
    if (record.transmitter == state.observer) {
        throw std::invalid_argument("half-duplex violation: " + record.transmitter.to_string() +
                                    " cannot receive its own transmission");
    }
    state.history.push_back({record, observer_mi});
    return state;
}

} // namespace omamrc
