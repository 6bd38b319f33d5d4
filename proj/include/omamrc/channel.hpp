#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "omamrc/network.hpp"

namespace omamrc {

using RandomStream = std::mt19937_64;

/// Independent per-frame substream derived from (master seed, frame index).
/// Frames can be simulated in any order or on any worker with identical
/// results.
inline RandomStream frame_stream(std::uint64_t master_seed, std::uint64_t frame_index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(frame_index), static_cast<std::uint32_t>(frame_index >> 32),
                      0x6f6d616du};
    return RandomStream(seq);
}

/// Instantaneous mutual information of a Gaussian-input link, in bits per
/// complex channel use.
inline double mutual_information(std::complex<double> h) { return std::log2(1.0 + std::norm(h)); }

/// Fading gains of every link for one frame, with cached mutual information.
class ChannelRealization {
public:
    ChannelRealization() = default;

    /// `gains` is indexed like Network::link_index; self slots must be zero.
    ChannelRealization(const Network& net, std::vector<std::complex<double>> gains)
        : sources_(net.sources()), relays_(net.relays()), gains_(std::move(gains))
    {
        mi_.resize(gains_.size());
        for (std::size_t i = 0; i < gains_.size(); ++i) {
            mi_[i] = mutual_information(gains_[i]);
        }
    }

    std::complex<double> gain(NodeId from, NodeId to) const { return gains_[index(from, to)]; }
    double mi(NodeId from, NodeId to) const { return mi_[index(from, to)]; }
    std::span<const std::complex<double>> gains() const { return gains_; }

    /// Sets the gain of a link to the real amplitude that yields `bits` of
    /// mutual information. Used to build hand-made instances.
    void set_mi(NodeId from, NodeId to, double bits)
    {
        const auto i = index(from, to);
        gains_[i] = std::sqrt(std::exp2(bits) - 1.0);
        mi_[i] = bits;
    }

    /// Realization with every link at `bits` of mutual information.
    static ChannelRealization uniform(const Network& net, double bits)
    {
        ChannelRealization out(net, std::vector<std::complex<double>>(net.link_slots()));
        for (const auto& [from, to] : all_links(net.sources(), net.relays())) {
            out.set_mi(from, to, bits);
        }
        return out;
    }

private:
    std::size_t index(NodeId from, NodeId to) const
    {
        const int slot = to.is_destination() ? relays_ : to.index;
        return static_cast<std::size_t>(node_ordinal(from, sources_) * (relays_ + 1) + slot);
    }

    int sources_ = 0;
    int relays_ = 0;
    std::vector<std::complex<double>> gains_;
    std::vector<double> mi_;
};

/// Draws every link independently from CN(0, gamma). Two unit normals are
/// consumed per link in link order regardless of gamma, so the same stream
/// gives the same underlying fading at every SNR point.
inline ChannelRealization draw_realization(const Network& net, RandomStream& stream)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> gains(net.link_slots());
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (net.is_self_slot(i)) {
            continue;
        }
        const double re = normal(stream);
        const double im = normal(stream);
        const double scale = std::sqrt(net.gain_at(i) / 2.0);
        gains[i] = {scale * re, scale * im};
    }
    return ChannelRealization(net, std::move(gains));
}

} // namespace omamrc
