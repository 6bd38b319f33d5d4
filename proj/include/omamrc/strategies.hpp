#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "omamrc/outage.hpp"

namespace omamrc {

enum class Strategy { strategy1, strategy2, strategy3, reference1, upper_bound };

inline constexpr Strategy kAllStrategies[] = {Strategy::strategy1, Strategy::strategy2, Strategy::strategy3,
                                              Strategy::reference1, Strategy::upper_bound};

constexpr std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::strategy1:
        return "strategy1";
    case Strategy::strategy2:
        return "strategy2";
    case Strategy::strategy3:
        return "strategy3";
    case Strategy::reference1:
        return "reference1";
    case Strategy::upper_bound:
        return "upper_bound";
    }
    return "unknown";
}

inline std::optional<Strategy> parse_strategy(std::string_view name)
{
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

/// What the destination knows when scheduling round `round`: its own
/// accumulated state (direct-link MIs and past selections) and the decoding
/// set every node reported. Per-node spans are in node order.
struct SchedulingContext {
    int round = 1;
    const ObserverState& destination;
    std::span<const SourceSet> node_sets;
    std::span<const double> direct_mi;
    std::span<const double> rates;

    int sources() const { return destination.sources(); }
    int nodes() const { return static_cast<int>(node_sets.size()); }
    SourceSet undecoded() const { return destination.undecoded(); }

    Candidate candidate(int ordinal) const
    {
        const auto i = static_cast<std::size_t>(ordinal);
        return {node_at(ordinal, sources()), node_sets[i], direct_mi[i]};
    }
};

namespace detail {

inline void require_pending(const SchedulingContext& ctx)
{
    if (ctx.undecoded().empty()) {
        throw std::logic_error("scheduling requested after every source was decoded");
    }
}

inline std::vector<int> useful_ordinals(const SchedulingContext& ctx)
{
    const SourceSet pending = ctx.undecoded();
    std::vector<int> out;
    for (int a = 0; a < ctx.nodes(); ++a) {
        if (ctx.node_sets[static_cast<std::size_t>(a)].intersects(pending)) {
            out.push_back(a);
        }
    }
    return out;
}

/// First ordinal with the largest score; `pool` is in node order.
template <class Score>
int first_argmax(const std::vector<int>& pool, Score&& score)
{
    int best = pool.front();
    double best_score = score(best);
    for (std::size_t i = 1; i < pool.size(); ++i) {
        const double value = score(pool[i]);
        if (value > best_score) {
            best = pool[i];
            best_score = value;
        }
    }
    return best;
}

} // namespace detail

/// Nodes whose decoding set holds at least one source the destination still
/// misses, sources first.
inline std::vector<NodeId> useful_candidates(const SchedulingContext& ctx)
{
    detail::require_pending(ctx);
    std::vector<NodeId> out;
    for (int a : detail::useful_ordinals(ctx)) {
        out.push_back(node_at(a, ctx.sources()));
    }
    return out;
}

/// Number of sources the destination would newly decode if `ordinal`
/// transmitted this round (zero for a node that cannot help).
inline int newly_decoded_count(const SchedulingContext& ctx, int ordinal)
{
    const SourceSet pending = ctx.undecoded();
    if (!ctx.node_sets[static_cast<std::size_t>(ordinal)].intersects(pending)) {
        return 0;
    }
    return best_decodable_subset(pending, ctx.destination, ctx.rates, ctx.candidate(ordinal)).size();
}

/// Maximizes the number of newly decoded sources, then the direct-link MI.
/// When no node decodes anything new the choice falls back to the useful
/// nodes only.
inline NodeId select_strategy1(const SchedulingContext& ctx)
{
    detail::require_pending(ctx);
    std::vector<int> gain(static_cast<std::size_t>(ctx.nodes()), 0);
    int max_gain = 0;
    for (int a = 0; a < ctx.nodes(); ++a) {
        gain[static_cast<std::size_t>(a)] = newly_decoded_count(ctx, a);
        max_gain = std::max(max_gain, gain[static_cast<std::size_t>(a)]);
    }
    std::vector<int> best;
    if (max_gain > 0) {
        for (int a = 0; a < ctx.nodes(); ++a) {
            if (gain[static_cast<std::size_t>(a)] == max_gain) {
                best.push_back(a);
            }
        }
    } else {
        best = detail::useful_ordinals(ctx);
    }
    const int chosen = detail::first_argmax(best, [&](int a) { return ctx.direct_mi[static_cast<std::size_t>(a)]; });
    return node_at(chosen, ctx.sources());
}

/// Highest direct-link MI among useful nodes.
inline NodeId select_strategy2(const SchedulingContext& ctx)
{
    detail::require_pending(ctx);
    const auto pool = detail::useful_ordinals(ctx);
    const int chosen = detail::first_argmax(pool, [&](int a) { return ctx.direct_mi[static_cast<std::size_t>(a)]; });
    return node_at(chosen, ctx.sources());
}

/// Highest direct-link MI times decoding-set size among useful nodes.
inline NodeId select_strategy3(const SchedulingContext& ctx)
{
    detail::require_pending(ctx);
    const auto pool = detail::useful_ordinals(ctx);
    const int chosen = detail::first_argmax(pool, [&](int a) {
        const auto i = static_cast<std::size_t>(a);
        return ctx.direct_mi[i] * ctx.node_sets[i].size();
    });
    return node_at(chosen, ctx.sources());
}

/// Common-outage minimization benchmark. A node whose transmission lifts the
/// common outage of all pending sources wins (highest MI among those);
/// otherwise the highest-MI useful node.
inline NodeId select_reference1(const SchedulingContext& ctx)
{
    detail::require_pending(ctx);
    const auto pool = detail::useful_ordinals(ctx);
    const SourceSet pending = ctx.undecoded();
    std::vector<int> resolving;
    for (int a : pool) {
        if (!common_outage_of_subset(pending, ctx.destination, ctx.rates, ctx.candidate(a))) {
            resolving.push_back(a);
        }
    }
    const auto& tier = resolving.empty() ? pool : resolving;
    const int chosen = detail::first_argmax(tier, [&](int a) { return ctx.direct_mi[static_cast<std::size_t>(a)]; });
    return node_at(chosen, ctx.sources());
}

/// Dispatches an adaptive strategy. The exhaustive upper bound needs the
/// full realization and is handled by the frame runner.
inline NodeId select_node(Strategy strategy, const SchedulingContext& ctx)
{
    switch (strategy) {
    case Strategy::strategy1:
        return select_strategy1(ctx);
    case Strategy::strategy2:
        return select_strategy2(ctx);
    case Strategy::strategy3:
        return select_strategy3(ctx);
    case Strategy::reference1:
        return select_reference1(ctx);
    case Strategy::upper_bound:
        break;
    }
    throw std::logic_error("upper_bound is not an adaptive strategy");
}

} // namespace omamrc
