#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omamrc/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator for cooperative HARQ node scheduling in the orthogonal MAMRC"};

    std::string config;
    omamrc::cli::Overrides overrides;
    std::string output;
    std::uint64_t frames = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string sweep;

    app.add_option("--config", config, "TOML run description")->required()->check(CLI::ExistingFile);
    auto* output_opt = app.add_option("--output", output, "CSV output path (stdout when omitted)");
    auto* frames_opt = app.add_option("--frames", frames, "Frames per sweep point and strategy");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed");
    auto* workers_opt = app.add_option("--workers", workers, "Worker threads per Monte Carlo batch");
    auto* sweep_opt = app.add_option("--sweep", sweep, "symmetric_gamma | link_adaptation | delta_gamma");
    app.add_option("--strategy", overrides.strategies,
                   "strategy1 | strategy2 | strategy3 | reference1 | upper_bound (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : omamrc::cli::kUsageError;
    }

    if (*output_opt) {
        overrides.output = output;
    }
    if (*frames_opt) {
        overrides.frames = frames;
    }
    if (*seed_opt) {
        overrides.seed = seed;
    }
    if (*workers_opt) {
        overrides.workers = workers;
    }
    if (*sweep_opt) {
        overrides.sweep = sweep;
    }
    return omamrc::cli::execute(config, overrides, std::cerr);
}
