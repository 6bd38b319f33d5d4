#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "omamrc/channel.hpp"
#include "omamrc/frame.hpp"
#include "omamrc/upper_bound.hpp"

namespace omamrc {

/// One frame under `strategy`. The upper bound searches with full CSI and
/// replays its chosen sequence; `stream` feeds its random tie-break.
inline FrameOutcome run_frame(const ChannelRealization& realization, const Network& net, Strategy strategy,
                              RandomStream& stream)
{
    if (strategy != Strategy::upper_bound) {
        return run_adaptive_frame(realization, net, strategy);
    }
    const auto search = optimal_sequence(realization, net, stream);
    return replay_sequence(realization, net, search.sequence);
}

/// Frame `frame_index` of a seeded batch. The realization is drawn first
/// from the frame's substream, so every strategy sees the same channel.
inline FrameOutcome simulate_frame(const Network& net, Strategy strategy, std::uint64_t master_seed,
                                   std::uint64_t frame_index)
{
    RandomStream stream = frame_stream(master_seed, frame_index);
    const ChannelRealization realization = draw_realization(net, stream);
    return run_frame(realization, net, strategy, stream);
}

/// Integer tallies of a batch; merging is exact and order-free.
struct RawCounters {
    std::uint64_t frames = 0;
    std::uint64_t rounds_sum = 0;
    std::vector<std::uint64_t> decoded;
    std::uint64_t common_outage = 0;

    explicit RawCounters(int sources = 0) : decoded(static_cast<std::size_t>(sources), 0) {}

    void add(const FrameOutcome& outcome)
    {
        ++frames;
        rounds_sum += static_cast<std::uint64_t>(outcome.rounds_used);
        bool all = true;
        for (std::size_t s = 0; s < decoded.size(); ++s) {
            if (outcome.decoded(static_cast<int>(s))) {
                ++decoded[s];
            } else {
                all = false;
            }
        }
        if (!all) {
            ++common_outage;
        }
    }

    RawCounters& operator+=(const RawCounters& other)
    {
        frames += other.frames;
        rounds_sum += other.rounds_sum;
        for (std::size_t s = 0; s < decoded.size(); ++s) {
            decoded[s] += other.decoded[s];
        }
        common_outage += other.common_outage;
        return *this;
    }

    friend bool operator==(const RawCounters&, const RawCounters&) = default;
};

/// Runs frames [0, frames) with per-frame substreams of `master_seed`.
/// Workers take contiguous frame ranges; the result does not depend on the
/// worker count.
inline RawCounters run_monte_carlo(const Network& net, Strategy strategy, std::uint64_t frames,
                                   std::uint64_t master_seed, unsigned workers = 1)
{
    if (frames == 0) {
        throw std::invalid_argument("run_monte_carlo needs at least one frame");
    }
    workers = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(workers, frames)));

    std::vector<RawCounters> partial(workers, RawCounters(net.sources()));
    const auto run_range = [&](unsigned worker) {
        const std::uint64_t begin = frames * worker / workers;
        const std::uint64_t end = frames * (worker + 1) / workers;
        for (std::uint64_t f = begin; f < end; ++f) {
            partial[worker].add(simulate_frame(net, strategy, master_seed, f));
        }
    };

    if (workers == 1) {
        run_range(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run_range, w);
        }
    }

    RawCounters total(net.sources());
    for (const auto& part : partial) {
        total += part;
    }
    return total;
}

} // namespace omamrc
