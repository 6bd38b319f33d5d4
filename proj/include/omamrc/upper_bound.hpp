#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "omamrc/frame.hpp"

namespace omamrc {

struct SequenceSearchResult {
    /// Chosen activation sequence, truncated at the round of full decoding.
    std::vector<NodeId> sequence;
    /// Number of length-T_max sequences covered, (M + L)^T_max.
    std::uint64_t sequences_considered = 0;
    /// Number of length-T_max sequences sharing the optimal outcome.
    std::uint64_t optimal_sequences = 0;
    OutcomeRank rank;
};

namespace detail {

class SequenceSearch {
public:
    SequenceSearch(const ChannelRealization& realization, const Network& net)
        : realization_(realization), net_(net)
    {
        weight_.assign(static_cast<std::size_t>(net.max_rounds()) + 1, 1);
        for (int depth = net.max_rounds() - 1; depth >= 0; --depth) {
            weight_[static_cast<std::size_t>(depth)] =
                weight_[static_cast<std::size_t>(depth) + 1] * static_cast<std::uint64_t>(net.nodes());
        }
    }

    void run(const NetworkState& root) { visit(root, 0); }

    struct Leaf {
        std::vector<int> prefix;
        std::uint64_t weight;
    };

    const std::vector<Leaf>& best() const { return best_; }
    OutcomeRank best_rank() const { return best_rank_; }
    std::uint64_t total() const { return total_; }

private:
    // Every completion of a prefix that decodes all sources at `depth` shares
    // its outcome, so the prefix stands for n^(T_max - depth) sequences.
    void visit(const NetworkState& state, int depth)
    {
        if (state.complete() || depth == net_.max_rounds()) {
            const int decoded = state.destination.decoded.size();
            record(OutcomeRank::of(state.complete(), depth, decoded, net_.sources(), net_.max_rounds()),
                   weight_[static_cast<std::size_t>(depth)]);
            return;
        }
        for (int a = 0; a < net_.nodes(); ++a) {
            NetworkState next = state;
            transmit(next, node_at(a, net_.sources()), depth + 1, realization_, net_);
            prefix_.push_back(a);
            visit(next, depth + 1);
            prefix_.pop_back();
        }
    }

    void record(OutcomeRank rank, std::uint64_t weight)
    {
        total_ += weight;
        if (best_.empty() || rank < best_rank_) {
            best_.clear();
            best_rank_ = rank;
        } else if (best_rank_ < rank) {
            return;
        }
        best_.push_back({prefix_, weight});
    }

    const ChannelRealization& realization_;
    const Network& net_;
    std::vector<std::uint64_t> weight_;
    std::vector<int> prefix_;
    std::vector<Leaf> best_;
    OutcomeRank best_rank_;
    std::uint64_t total_ = 0;
};

} // namespace detail

/// Genie-aided exhaustive search over all (M + L)^T_max activation
/// sequences. Minimizes the rounds needed to decode every source; failing
/// that, maximizes the number decoded at T_max. Ties are broken uniformly at
/// random over the tied sequences using `stream`.
inline SequenceSearchResult optimal_sequence(const ChannelRealization& realization, const Network& net,
                                             RandomStream& stream)
{
    detail::SequenceSearch search(realization, net);
    search.run(run_phase1(realization, net));

    const auto& best = search.best();
    std::uint64_t tied = 0;
    for (const auto& leaf : best) {
        tied += leaf.weight;
    }

    std::size_t pick = 0;
    if (tied > 1) {
        std::uniform_int_distribution<std::uint64_t> uniform(0, tied - 1);
        std::uint64_t draw = uniform(stream);
        while (draw >= best[pick].weight) {
            draw -= best[pick].weight;
            ++pick;
        }
    }

    SequenceSearchResult result;
    result.sequences_considered = search.total();
    result.optimal_sequences = tied;
    result.rank = search.best_rank();
    for (int a : best[pick].prefix) {
        result.sequence.push_back(node_at(a, net.sources()));
    }
    return result;
}

} // namespace omamrc
