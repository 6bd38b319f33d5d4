#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "omamrc/channel.hpp"
#include "omamrc/network.hpp"
#include "omamrc/outage.hpp"
#include "omamrc/strategies.hpp"

namespace omamrc {

/// Receiver-side state of the whole network inside one frame.
struct NetworkState {
    std::vector<ObserverState> relays;
    ObserverState destination;
    /// I_{a,d} for every transmitting node in node order (the destination's CSI).
    std::vector<double> direct_mi;

    int sources() const { return destination.sources(); }
    bool complete() const { return destination.undecoded().empty(); }

    /// Decoding set of every transmitting node in node order; a source's set
    /// is itself.
    std::vector<SourceSet> node_sets() const
    {
        std::vector<SourceSet> sets;
        sets.reserve(static_cast<std::size_t>(sources()) + relays.size());
        for (int s = 0; s < sources(); ++s) {
            sets.push_back(SourceSet::single(s));
        }
        for (const auto& relay : relays) {
            sets.push_back(relay.decoded);
        }
        return sets;
    }

    SourceSet decoding_set(NodeId node) const
    {
        if (node.is_source()) {
            return SourceSet::single(node.index);
        }
        if (node.is_relay()) {
            return relays[static_cast<std::size_t>(node.index)].decoded;
        }
        return destination.decoded;
    }
};

struct RoundRecord {
    int round = 0;
    NodeId selected;
    SourceSet snapshot;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Adds whatever the observer can now decode to its decoding set.
inline void rederive_decoding_set(ObserverState& state, std::span<const double> rates)
{
    state.decoded |= best_decodable_subset(state.undecoded(), state, rates);
}

/// First phase: every source transmits once; each relay and the destination
/// decode from their own links.
inline NetworkState run_phase1(const ChannelRealization& realization, const Network& net)
{
    const int m = net.sources();
    const auto make_observer = [&](NodeId observer) {
        ObserverState state{observer, net.alpha(), std::vector<double>(static_cast<std::size_t>(m)), {}, {}};
        for (int s = 0; s < m; ++s) {
            state.phase1_mi[static_cast<std::size_t>(s)] = realization.mi(source_node(s), observer);
        }
        state.history.reserve(static_cast<std::size_t>(net.max_rounds()));
        rederive_decoding_set(state, net.rates());
        return state;
    };

    NetworkState state;
    state.relays.reserve(static_cast<std::size_t>(net.relays()));
    for (int r = 0; r < net.relays(); ++r) {
        state.relays.push_back(make_observer(relay_node(r)));
    }
    state.destination = make_observer(destination_node());
    state.direct_mi.reserve(static_cast<std::size_t>(net.nodes()));
    for (int a = 0; a < net.nodes(); ++a) {
        state.direct_mi.push_back(realization.mi(node_at(a, m), destination_node()));
    }
    return state;
}

/// Step 4 of a round: `selected` transmits with the decoding set it held at
/// the start of the round, every other relay and the destination listen, and
/// all decoding sets are re-derived.
inline RoundRecord transmit(NetworkState& state, NodeId selected, int round, const ChannelRealization& realization,
                            const Network& net)
{
    const TransmissionRecord record{selected, state.decoding_set(selected), round};
    for (auto& relay : state.relays) {
        if (relay.observer != selected) {
            relay = apply_transmission(std::move(relay), record, realization.mi(selected, relay.observer));
        }
    }
    state.destination = apply_transmission(std::move(state.destination), record,
                                           realization.mi(selected, destination_node()));
    for (auto& relay : state.relays) {
        rederive_decoding_set(relay, net.rates());
    }
    rederive_decoding_set(state.destination, net.rates());
    return {round, selected, record.snapshot};
}

/// One HARQ round driven by an adaptive strategy (NACK, decoding-set
/// reports, scheduling, transmission).
inline RoundRecord run_round(NetworkState& state, Strategy strategy, int round, const ChannelRealization& realization,
                             const Network& net)
{
    if (state.complete()) {
        throw std::logic_error("run_round called after ACK");
    }
    const auto sets = state.node_sets();
    const SchedulingContext ctx{round, state.destination, sets, state.direct_mi, net.rates()};
    const NodeId selected = select_node(strategy, ctx);
    if (state.decoding_set(selected).empty()) {
        throw std::logic_error(std::string(to_string(strategy)) + " selected " + selected.to_string() +
                               " with an empty decoding set");
    }
    return transmit(state, selected, round, realization, net);
}

struct FrameOutcome {
    /// Second-phase rounds actually used, 0..T_max.
    int rounds_used = 0;
    SourceSet final_destination_set;
    std::vector<RoundRecord> trace;

    bool decoded(int s) const { return final_destination_set.contains(s); }

    std::vector<bool> decoded_flags(int sources) const
    {
        std::vector<bool> flags(static_cast<std::size_t>(sources));
        for (int s = 0; s < sources; ++s) {
            flags[static_cast<std::size_t>(s)] = decoded(s);
        }
        return flags;
    }

    friend bool operator==(const FrameOutcome&, const FrameOutcome&) = default;
};

/// Ranking key of a frame result; smaller is better. Full decoding beats any
/// partial result and is ranked by rounds; partial results (which always use
/// T_max rounds) are ranked by how many sources were decoded.
struct OutcomeRank {
    int rounds_key = 0;
    int missing = 0;

    static OutcomeRank of(bool complete, int rounds, int decoded, int sources, int max_rounds)
    {
        return complete ? OutcomeRank{rounds, 0} : OutcomeRank{max_rounds + 1, sources - decoded};
    }
    static OutcomeRank of(const FrameOutcome& outcome, const Network& net)
    {
        const int decoded = outcome.final_destination_set.size();
        return of(decoded == net.sources(), outcome.rounds_used, decoded, net.sources(), net.max_rounds());
    }

    friend auto operator<=>(const OutcomeRank&, const OutcomeRank&) = default;
};

inline FrameOutcome run_adaptive_frame(const ChannelRealization& realization, const Network& net, Strategy strategy)
{
    NetworkState state = run_phase1(realization, net);
    FrameOutcome outcome;
    for (int t = 1; t <= net.max_rounds() && !state.complete(); ++t) {
        outcome.trace.push_back(run_round(state, strategy, t, realization, net));
        outcome.rounds_used = t;
    }
    outcome.final_destination_set = state.destination.decoded;
    return outcome;
}

/// Runs a fixed activation sequence, stopping early on ACK.
inline FrameOutcome replay_sequence(const ChannelRealization& realization, const Network& net,
                                    std::span<const NodeId> sequence)
{
    NetworkState state = run_phase1(realization, net);
    FrameOutcome outcome;
    int t = 0;
    for (NodeId node : sequence) {
        if (state.complete() || t == net.max_rounds()) {
            break;
        }
        ++t;
        outcome.trace.push_back(transmit(state, node, t, realization, net));
        outcome.rounds_used = t;
    }
    outcome.final_destination_set = state.destination.decoded;
    return outcome;
}

} // namespace omamrc
