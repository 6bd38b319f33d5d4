#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "omamrc/metrics.hpp"
#include "omamrc/network.hpp"
#include "omamrc/simulator.hpp"

namespace omamrc {

/// The MCS rate family used for slow link adaptation, in b.c.u.
inline const std::vector<double> kDefaultMcsRates{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};

struct AdaptationPoint {
    double snr_db = 0.0;
    double selected_rate = 0.0;
    double envelope_eta = 0.0;
    /// One report per MCS rate, in MCS-list order.
    std::vector<MetricsReport> per_rate;
    std::size_t selected_index = 0;

    const MetricsReport& selected() const { return per_rate[selected_index]; }
};

struct AdaptationResult {
    std::vector<double> mcs_rates;
    std::vector<AdaptationPoint> points;
};

/// Slow link adaptation over a symmetric-link sweep: every source uses the
/// same MCS rate, and each SNR point keeps the rate with the largest long-term
/// throughput. All rates at a point share the seed (common random numbers).
/// Rates within 1e-12 of the best keep the smaller rate.
inline AdaptationResult adapt_rates(const NetworkConfig& base, std::span<const double> mcs_rates,
                                    std::span<const double> snr_points_db, Strategy strategy, std::uint64_t frames,
                                    std::uint64_t seed, unsigned workers = 1)
{
    if (mcs_rates.empty()) {
        throw std::invalid_argument("adapt_rates: empty MCS list");
    }
    AdaptationResult result;
    result.mcs_rates.assign(mcs_rates.begin(), mcs_rates.end());

    for (double snr_db : snr_points_db) {
        AdaptationPoint point;
        point.snr_db = snr_db;
        for (double rate : mcs_rates) {
            const NetworkConfig cfg =
                symmetric_config(base.sources, base.relays, base.max_rounds, base.alpha,
                                 std::vector<double>(static_cast<std::size_t>(base.sources), rate), snr_db);
            const auto validated = validate_config(cfg);
            if (!validated) {
                throw std::invalid_argument("adapt_rates: " + validated.errors.front());
            }
            const auto counters = run_monte_carlo(*validated.network, strategy, frames, seed, workers);
            point.per_rate.push_back(compute_metrics(counters, *validated.network, strategy));
            point.envelope_eta = std::max(point.envelope_eta, point.per_rate.back().eta);
        }
        bool chosen = false;
        for (std::size_t i = 0; i < mcs_rates.size(); ++i) {
            const bool ties_best = point.per_rate[i].eta >= point.envelope_eta - 1e-12;
            if (ties_best && (!chosen || mcs_rates[i] < point.selected_rate)) {
                point.selected_rate = mcs_rates[i];
                point.selected_index = i;
                chosen = true;
            }
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

} // namespace omamrc
