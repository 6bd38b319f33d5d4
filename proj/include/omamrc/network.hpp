#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "omamrc/source_set.hpp"

namespace omamrc {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

using LinkKey = std::pair<NodeId, NodeId>;

/// Network description as read from a config file. Average SNRs are in dB;
/// a link at -inf dB never carries information.
struct NetworkConfig {
    int sources = 0;
    int relays = 0;
    int max_rounds = 0;
    double alpha = 0.0;
    std::vector<double> rates;
    std::map<LinkKey, double> link_gains_db;
};

/// Every ordered pair (a, b) with a in S u R, b in R u {d}, a != b, in node
/// order of the transmitter and then relays before the destination.
inline std::vector<LinkKey> all_links(int sources, int relays)
{
    std::vector<LinkKey> links;
    for (int a = 0; a < sources + relays; ++a) {
        const NodeId from = node_at(a, sources);
        for (int r = 0; r < relays; ++r) {
            if (!(from.is_relay() && from.index == r)) {
                links.emplace_back(from, relay_node(r));
            }
        }
        links.emplace_back(from, destination_node());
    }
    return links;
}

inline void set_symmetric_gains(NetworkConfig& cfg, double gain_db)
{
    cfg.link_gains_db.clear();
    for (const auto& link : all_links(cfg.sources, cfg.relays)) {
        cfg.link_gains_db[link] = gain_db;
    }
}

inline void offset_gains(NetworkConfig& cfg, double delta_db)
{
    for (auto& [link, db] : cfg.link_gains_db) {
        db += delta_db;
    }
}

struct ValidationResult;
inline ValidationResult validate_config(const NetworkConfig& raw);

/// Validated, immutable network with linear-scale average SNRs.
///
/// Links are addressed by a dense index: transmitter ordinal * (L + 1) plus
/// the receiver slot (relay index, or L for the destination). The slot of a
/// relay to itself exists but holds a zero gain and is never drawn.
class Network {
public:
    int sources() const { return sources_; }
    int relays() const { return relays_; }
    int nodes() const { return sources_ + relays_; }
    int max_rounds() const { return max_rounds_; }
    double alpha() const { return alpha_; }
    std::span<const double> rates() const { return rates_; }
    SourceSet all_sources() const { return SourceSet::all(sources_); }

    std::size_t link_slots() const { return static_cast<std::size_t>(nodes() * (relays_ + 1)); }

    static bool is_link(NodeId from, NodeId to)
    {
        return !from.is_destination() && !to.is_source() && from != to;
    }

    std::size_t link_index(NodeId from, NodeId to) const
    {
        const int slot = to.is_destination() ? relays_ : to.index;
        return static_cast<std::size_t>(node_ordinal(from, sources_) * (relays_ + 1) + slot);
    }

    bool is_self_slot(std::size_t index) const
    {
        const int tx = static_cast<int>(index) / (relays_ + 1);
        const int slot = static_cast<int>(index) % (relays_ + 1);
        return tx >= sources_ && slot == tx - sources_;
    }

    double gain(NodeId from, NodeId to) const { return gains_linear_[link_index(from, to)]; }
    double gain_at(std::size_t index) const { return gains_linear_[index]; }

    /// Exhaustive-search space size (M + L)^T_max, saturating.
    double sequence_space() const { return std::pow(static_cast<double>(nodes()), max_rounds_); }

private:
    friend ValidationResult validate_config(const NetworkConfig& raw);

    int sources_ = 0;
    int relays_ = 0;
    int max_rounds_ = 0;
    double alpha_ = 0.0;
    std::vector<double> rates_;
    std::vector<double> gains_linear_;
};

struct ValidationResult {
    std::optional<Network> network;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    explicit operator bool() const { return network.has_value(); }
};

inline ValidationResult validate_config(const NetworkConfig& raw)
{
    ValidationResult result;
    auto& errors = result.errors;

    if (raw.sources < 2) {
        errors.emplace_back("M must be ≥ 2");
    }
    if (raw.sources > kMaxSources) {
        errors.emplace_back("M must be ≤ " + std::to_string(kMaxSources));
    }
    if (raw.relays < 1) {
        errors.emplace_back("L must be ≥ 1");
    }
    if (raw.max_rounds < 1) {
        errors.emplace_back("T_max must be ≥ 1");
    }
    if (!(raw.alpha > 0.0) || !std::isfinite(raw.alpha)) {
        errors.emplace_back("alpha must be > 0");
    }
    if (raw.sources >= 0 && raw.rates.size() != static_cast<std::size_t>(raw.sources)) {
        errors.emplace_back("expected " + std::to_string(raw.sources) + " rates, got " +
                            std::to_string(raw.rates.size()));
    }
    for (std::size_t s = 0; s < raw.rates.size(); ++s) {
        if (!(raw.rates[s] > 0.0) || !std::isfinite(raw.rates[s])) {
            errors.emplace_back("non-positive rate for source " + std::to_string(s));
        }
    }
    if (!errors.empty()) {
        return result;
    }

    const auto links = all_links(raw.sources, raw.relays);
    for (const auto& link : links) {
        const auto it = raw.link_gains_db.find(link);
        if (it == raw.link_gains_db.end()) {
            errors.push_back("missing link entry " + link.first.to_string() + "->" + link.second.to_string());
        } else if (std::isnan(it->second) || it->second == HUGE_VAL) {
            errors.push_back("invalid gain for link " + link.first.to_string() + "->" + link.second.to_string());
        }
    }
    for (const auto& [link, db] : raw.link_gains_db) {
        const bool in_range = link.first.kind != NodeKind::destination &&
                              (link.first.is_source() ? link.first.index < raw.sources
                                                      : link.first.index < raw.relays) &&
                              (link.second.is_destination() ||
                               (link.second.is_relay() && link.second.index < raw.relays));
        if (!in_range || !Network::is_link(link.first, link.second)) {
            errors.push_back("unexpected link entry " + link.first.to_string() + "->" + link.second.to_string());
        }
    }
    if (!errors.empty()) {
        return result;
    }

    if (raw.max_rounds < raw.relays) {
        result.warnings.emplace_back("T_max < L: some relays can never all transmit in one frame");
    }

    Network net;
    net.sources_ = raw.sources;
    net.relays_ = raw.relays;
    net.max_rounds_ = raw.max_rounds;
    net.alpha_ = raw.alpha;
    net.rates_ = raw.rates;
    net.gains_linear_.assign(net.link_slots(), 0.0);
    for (const auto& link : links) {
        net.gains_linear_[net.link_index(link.first, link.second)] = db_to_linear(raw.link_gains_db.at(link));
    }
    result.network = std::move(net);
    return result;
}

/// Builds the config of a network whose links all share one average SNR.
inline NetworkConfig symmetric_config(int sources, int relays, int max_rounds, double alpha,
                                      std::vector<double> rates, double gain_db)
{
    NetworkConfig cfg{sources, relays, max_rounds, alpha, std::move(rates), {}};
    set_symmetric_gains(cfg, gain_db);
    return cfg;
}

} // namespace omamrc
