#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "omamrc/network.hpp"
#include "omamrc/simulator.hpp"
#include "omamrc/strategies.hpp"

namespace omamrc {

struct MetricsReport {
    std::string strategy;
    std::uint64_t frames = 0;
    /// Sample mean of second-phase rounds, frames with T = 0 included.
    double mean_rounds = 0.0;
    /// Pr{source s not decoded at T_max}, from the realized decoding sets.
    std::vector<double> per_source_outage;
    /// Binomial standard errors of per_source_outage.
    std::vector<double> per_source_outage_stderr;
    double common_outage = 0.0;
    double common_outage_stderr = 0.0;
    /// Long-term rate per source, R_s / (M + alpha E(T)).
    std::vector<double> long_term_rates;
    /// Long-term aggregate throughput.
    double eta = 0.0;
    /// Rate-independent (normalized) aggregate throughput.
    double eta_norm = 0.0;
};

inline MetricsReport compute_metrics(const RawCounters& counters, const Network& net, Strategy strategy)
{
    if (counters.frames == 0) {
        throw std::invalid_argument("compute_metrics: zero frames");
    }
    const auto frames = static_cast<double>(counters.frames);
    const auto binomial_stderr = [frames](double p) { return std::sqrt(p * (1.0 - p) / frames); };

    MetricsReport report;
    report.strategy = std::string(to_string(strategy));
    report.frames = counters.frames;
    report.mean_rounds = static_cast<double>(counters.rounds_sum) / frames;
    report.common_outage = static_cast<double>(counters.common_outage) / frames;
    report.common_outage_stderr = binomial_stderr(report.common_outage);

    const double slots = net.sources() + net.alpha() * report.mean_rounds;
    for (int s = 0; s < net.sources(); ++s) {
        const auto decoded = counters.decoded[static_cast<std::size_t>(s)];
        const double success = static_cast<double>(decoded) / frames;
        const double outage = static_cast<double>(counters.frames - decoded) / frames;
        const double rate = net.rates()[static_cast<std::size_t>(s)];
        report.per_source_outage.push_back(outage);
        report.per_source_outage_stderr.push_back(binomial_stderr(outage));
        report.long_term_rates.push_back(rate / slots);
        report.eta += rate / slots * success;
        report.eta_norm += success / slots;
    }
    return report;
}

} // namespace omamrc
