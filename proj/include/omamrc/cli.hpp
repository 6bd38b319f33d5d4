#pragma once

// Batch driver: TOML run description -> sweep -> CSV.
//
// Config layout:
//
//   [network]  M, L, T_max, alpha
//   [rates]    values = [R_1, ..., R_M]
//   [gains]    symmetric_db = x, or one quoted entry per link: "s1->r1" = x
//   [sweep]    type = "symmetric_gamma" | "link_adaptation" | "delta_gamma"
//              values_db = [...]  (or start_db / stop_db / step_db)
//              mcs_rates = [...]  (link_adaptation only)
//   [run]      frames, seed, workers, strategies = [...], output,
//              upper_bound_cap
//
// Exit codes: 0 ok, 2 config error, 3 runtime error (including an
// unwritable output), 4 usage error (unknown strategy or sweep name).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "omamrc/link_adaptation.hpp"
#include "omamrc/metrics.hpp"
#include "omamrc/network.hpp"
#include "omamrc/simulator.hpp"
#include "omamrc/strategies.hpp"

namespace omamrc::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3, kUsageError = 4 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepKind { symmetric_gamma, link_adaptation, delta_gamma };

constexpr std::string_view to_string(SweepKind kind)
{
    switch (kind) {
    case SweepKind::symmetric_gamma:
        return "symmetric_gamma";
    case SweepKind::link_adaptation:
        return "link_adaptation";
    case SweepKind::delta_gamma:
        return "delta_gamma";
    }
    return "unknown";
}

inline std::optional<SweepKind> parse_sweep(std::string_view name)
{
    for (SweepKind kind : {SweepKind::symmetric_gamma, SweepKind::link_adaptation, SweepKind::delta_gamma}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

inline constexpr double kDefaultUpperBoundCap = 1e5;

struct RunSpec {
    NetworkConfig network;
    SweepKind sweep = SweepKind::symmetric_gamma;
    std::vector<double> sweep_values_db;
    std::vector<double> mcs_rates = kDefaultMcsRates;
    std::vector<Strategy> strategies{Strategy::strategy1, Strategy::strategy2, Strategy::strategy3,
                                     Strategy::reference1, Strategy::upper_bound};
    std::uint64_t frames = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double upper_bound_cap = kDefaultUpperBoundCap;
    std::string output;
};

struct Overrides {
    std::optional<std::string> output{};
    std::optional<std::uint64_t> frames{};
    std::optional<std::uint64_t> seed{};
    std::optional<unsigned> workers{};
    std::optional<std::string> sweep{};
    std::vector<std::string> strategies{};
};

namespace detail {

template <class T>
T required(const toml::table& table, std::string_view section, std::string_view key)
{
    const auto value = table[section][key].value<T>();
    if (!value) {
        throw ConfigError("missing or mistyped [" + std::string(section) + "] " + std::string(key));
    }
    return *value;
}

inline std::vector<double> number_list(const toml::node_view<const toml::node>& node, std::string_view what)
{
    const auto* array = node.as_array();
    if (array == nullptr) {
        throw ConfigError(std::string(what) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : *array) {
        const auto value = item.value<double>();
        if (!value) {
            throw ConfigError(std::string(what) + " must be an array of numbers");
        }
        out.push_back(*value);
    }
    return out;
}

inline NodeId parse_node(std::string_view label, bool receiver)
{
    if (label == "d") {
        if (!receiver) {
            throw ConfigError("the destination does not transmit");
        }
        return destination_node();
    }
    if (label.size() < 2 || (label[0] != 's' && label[0] != 'r')) {
        throw ConfigError("bad node label '" + std::string(label) + "'");
    }
    int index = 0;
    for (char c : label.substr(1)) {
        if (c < '0' || c > '9') {
            throw ConfigError("bad node label '" + std::string(label) + "'");
        }
        index = index * 10 + (c - '0');
    }
    if (index < 1) {
        throw ConfigError("node labels are 1-based: '" + std::string(label) + "'");
    }
    if (label[0] == 's' && receiver) {
        throw ConfigError("sources do not receive: '" + std::string(label) + "'");
    }
    return label[0] == 's' ? source_node(index - 1) : relay_node(index - 1);
}

inline LinkKey parse_link(std::string_view key)
{
    const auto arrow = key.find("->");
    if (arrow == std::string_view::npos) {
        throw ConfigError("link key '" + std::string(key) + "' must look like \"s1->r1\"");
    }
    return {parse_node(key.substr(0, arrow), false), parse_node(key.substr(arrow + 2), true)};
}

inline Strategy strategy_from(std::string_view name)
{
    const auto strategy = parse_strategy(name);
    if (!strategy) {
        throw UsageError("unknown strategy '" + std::string(name) + "'");
    }
    return *strategy;
}

} // namespace detail

/// Parses a run description. Throws ConfigError for malformed content and
/// UsageError for unknown strategy or sweep names.
inline RunSpec parse_run_spec(std::string_view text)
{
    toml::table parsed;
    try {
        parsed = toml::parse(text);
    } catch (const toml::parse_error& err) {
        throw ConfigError(std::string("TOML parse error: ") + std::string(err.description()));
    }

    const toml::table& root = parsed;
    RunSpec spec;
    auto& net = spec.network;
    net.sources = static_cast<int>(detail::required<std::int64_t>(root, "network", "M"));
    net.relays = static_cast<int>(detail::required<std::int64_t>(root, "network", "L"));
    net.max_rounds = static_cast<int>(detail::required<std::int64_t>(root, "network", "T_max"));
    net.alpha = detail::required<double>(root, "network", "alpha");

    if (root["rates"].is_array()) {
        net.rates = detail::number_list(root["rates"], "rates");
    } else {
        net.rates = detail::number_list(root["rates"]["values"], "[rates] values");
    }

    if (const auto* sweep = root["sweep"].as_table()) {
        if (const auto type = (*sweep)["type"].value<std::string>()) {
            const auto kind = parse_sweep(*type);
            if (!kind) {
                throw UsageError("unknown sweep '" + *type + "'");
            }
            spec.sweep = *kind;
        }
        if ((*sweep)["values_db"]) {
            spec.sweep_values_db = detail::number_list((*sweep)["values_db"], "[sweep] values_db");
        } else if ((*sweep)["start_db"]) {
            const double start = detail::required<double>(root, "sweep", "start_db");
            const double stop = detail::required<double>(root, "sweep", "stop_db");
            const double step = detail::required<double>(root, "sweep", "step_db");
            if (!(step > 0.0) || stop < start) {
                throw ConfigError("[sweep] needs step_db > 0 and stop_db >= start_db");
            }
            const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
            for (long i = 0; i <= count; ++i) {
                spec.sweep_values_db.push_back(start + static_cast<double>(i) * step);
            }
        }
        if ((*sweep)["mcs_rates"]) {
            spec.mcs_rates = detail::number_list((*sweep)["mcs_rates"], "[sweep] mcs_rates");
        }
    }
    if (spec.sweep_values_db.empty()) {
        throw ConfigError("[sweep] needs values_db or start_db/stop_db/step_db");
    }
    if (spec.mcs_rates.empty()) {
        throw ConfigError("[sweep] mcs_rates is empty");
    }

    if (const auto* gains = root["gains"].as_table()) {
        // symmetric_db fills every link; explicit entries then override.
        if (const auto* base = gains->get("symmetric_db")) {
            const auto value = base->value<double>();
            if (!value) {
                throw ConfigError("[gains] symmetric_db must be a number (dB)");
            }
            set_symmetric_gains(net, *value);
        }
        for (const auto& [key, node] : *gains) {
            if (key.str() == "symmetric_db") {
                continue;
            }
            const auto value = node.value<double>();
            if (!value) {
                throw ConfigError("[gains] " + std::string(key.str()) + " must be a number (dB)");
            }
            net.link_gains_db[detail::parse_link(key.str())] = *value;
        }
    } else if (spec.sweep == SweepKind::delta_gamma) {
        throw ConfigError("delta_gamma sweep needs a [gains] base matrix");
    }

    if (const auto* run = root["run"].as_table()) {
        if (const auto frames = (*run)["frames"].value<std::int64_t>()) {
            if (*frames < 1) {
                throw ConfigError("[run] frames must be >= 1");
            }
            spec.frames = static_cast<std::uint64_t>(*frames);
        }
        if (const auto seed = (*run)["seed"].value<std::int64_t>()) {
            spec.seed = static_cast<std::uint64_t>(*seed);
        }
        if (const auto workers = (*run)["workers"].value<std::int64_t>()) {
            spec.workers = static_cast<unsigned>(std::max<std::int64_t>(1, *workers));
        }
        if (const auto cap = (*run)["upper_bound_cap"].value<double>()) {
            spec.upper_bound_cap = *cap;
        }
        if (const auto output = (*run)["output"].value<std::string>()) {
            spec.output = *output;
        }
        if (const auto* names = (*run)["strategies"].as_array()) {
            spec.strategies.clear();
            for (const auto& item : *names) {
                const auto name = item.value<std::string>();
                if (!name) {
                    throw ConfigError("[run] strategies must be strings");
                }
                spec.strategies.push_back(detail::strategy_from(*name));
            }
        }
    }
    return spec;
}

inline RunSpec load_run_spec(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_spec(buffer.str());
}

inline void apply_overrides(RunSpec& spec, const Overrides& overrides)
{
    if (overrides.output) {
        spec.output = *overrides.output;
    }
    if (overrides.frames) {
        if (*overrides.frames == 0) {
            throw ConfigError("--frames must be >= 1");
        }
        spec.frames = *overrides.frames;
    }
    if (overrides.seed) {
        spec.seed = *overrides.seed;
    }
    if (overrides.workers) {
        spec.workers = std::max(1u, *overrides.workers);
    }
    if (overrides.sweep) {
        const auto kind = parse_sweep(*overrides.sweep);
        if (!kind) {
            throw UsageError("unknown sweep '" + *overrides.sweep + "'");
        }
        spec.sweep = *kind;
    }
    if (!overrides.strategies.empty()) {
        spec.strategies.clear();
        for (const auto& name : overrides.strategies) {
            spec.strategies.push_back(detail::strategy_from(name));
        }
    }
}

/// The network at one sweep point.
inline Network network_at(const RunSpec& spec, double sweep_value_db, double symmetric_rate = 0.0)
{
    NetworkConfig cfg = spec.network;
    if (symmetric_rate > 0.0) {
        cfg.rates.assign(static_cast<std::size_t>(cfg.sources), symmetric_rate);
    }
    if (spec.sweep == SweepKind::delta_gamma) {
        offset_gains(cfg, sweep_value_db);
    } else {
        set_symmetric_gains(cfg, sweep_value_db);
    }
    auto validated = validate_config(cfg);
    if (!validated) {
        std::string message = "invalid network:";
        for (const auto& e : validated.errors) {
            message += " " + e + ";";
        }
        throw ConfigError(message);
    }
    return *validated.network;
}

/// Throws ConfigError for an invalid network, an empty strategy list or an
/// exhaustive search above the cap. In adaptation mode the configured rates
/// are replaced by the MCS family.
inline void check_runnable(const RunSpec& spec)
{
    if (spec.strategies.empty()) {
        throw ConfigError("no strategies selected");
    }
    const Network net = network_at(spec, spec.sweep_values_db.front(),
                                   spec.sweep == SweepKind::link_adaptation ? spec.mcs_rates.front() : 0.0);
    for (Strategy s : spec.strategies) {
        if (s == Strategy::upper_bound && net.sequence_space() > spec.upper_bound_cap) {
            std::ostringstream msg;
            msg << "upper_bound would enumerate " << net.sequence_space() << " sequences per frame, above cap "
                << spec.upper_bound_cap << " ([run] upper_bound_cap)";
            throw ConfigError(msg.str());
        }
    }
}

struct CsvRow {
    std::string scenario;
    double sweep_value_db = 0.0;
    MetricsReport metrics;
    std::uint64_t seed = 0;
    std::optional<double> selected_rate;
};

inline std::vector<CsvRow> run_sweep(const RunSpec& spec)
{
    std::vector<CsvRow> rows;
    for (double value : spec.sweep_values_db) {
        for (Strategy strategy : spec.strategies) {
            if (spec.sweep != SweepKind::link_adaptation) {
                const Network net = network_at(spec, value);
                const auto counters = run_monte_carlo(net, strategy, spec.frames, spec.seed, spec.workers);
                rows.push_back({std::string(to_string(spec.sweep)), value, compute_metrics(counters, net, strategy),
                                spec.seed, std::nullopt});
                continue;
            }
            const double point[] = {value};
            const auto adapted =
                adapt_rates(spec.network, spec.mcs_rates, point, strategy, spec.frames, spec.seed, spec.workers);
            const auto& p = adapted.points.front();
            rows.push_back({"link_adaptation", value, p.selected(), spec.seed, p.selected_rate});
            for (std::size_t i = 0; i < p.per_rate.size(); ++i) {
                rows.push_back({"link_adaptation_rate", value, p.per_rate[i], spec.seed, spec.mcs_rates[i]});
            }
        }
    }
    return rows;
}

inline std::string format_number(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<CsvRow>& rows, int sources)
{
    out << "scenario,sweep_value_db,strategy,frames,seed,mean_T,p_common_outage";
    for (int s = 1; s <= sources; ++s) {
        out << ",p_outage_s" << s;
    }
    out << ",eta,eta_norm,selected_rate\n";
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        out << row.scenario << ',' << format_number(row.sweep_value_db) << ',' << m.strategy << ',' << m.frames << ','
            << row.seed << ',' << format_number(m.mean_rounds) << ',' << format_number(m.common_outage);
        for (double p : m.per_source_outage) {
            out << ',' << format_number(p);
        }
        out << ',' << format_number(m.eta) << ',' << format_number(m.eta_norm) << ',';
        if (row.selected_rate) {
            out << format_number(*row.selected_rate);
        }
        out << '\n';
    }
}

/// Loads the config, applies flag overrides, runs the sweep and writes the
/// CSV to the configured output (stdout when none). Diagnostics go to `err`.
inline int execute(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& err)
{
    RunSpec spec;
    try {
        spec = load_run_spec(config_path);
        apply_overrides(spec, overrides);
        check_runnable(spec);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    std::ofstream file;
    if (!spec.output.empty()) {
        file.open(spec.output, std::ios::out | std::ios::trunc);
        if (!file) {
            err << "error: cannot write " << spec.output << '\n';
            return kRuntimeError;
        }
    }

    try {
        const auto rows = run_sweep(spec);
        std::ostream& out = spec.output.empty() ? std::cout : file;
        write_csv(out, rows, spec.network.sources);
        out.flush();
        if (!out) {
            err << "error: failed writing CSV\n";
            return kRuntimeError;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}

} // namespace omamrc::cli
