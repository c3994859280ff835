// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------
//
// Command-line driver: quantlink <experiment> --config <path> [--seed N] [--trials N] [--out <path>]

#include "quantlink/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    namespace h = quantlink::harness;

    CLI::App app{"Region counts, high-SNR bounds and Monte Carlo rates for MIMO links with one-bit ADCs"};
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> workers;
    std::optional<std::string> out;
    bool quiet = false;

    app.add_option("experiment", experiment, "Experiment id")
        ->required()
        ->check(CLI::IsMember(h::experiment_names()));
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--workers", workers, "Worker threads (output does not depend on this)");
    app.add_option("--out", out, "CSV output path");
    app.add_flag("--quiet", quiet, "Do not print the CSV to standard output");
    CLI11_PARSE(app, argc, argv);

    try {
        h::ExperimentConfig config;
        if (config_path.empty()) {
            config = h::default_config(experiment);
        } else {
            std::ifstream in(config_path);
            if (!in)
                throw h::ConfigError("cannot read config '" + config_path + "'");
            config = h::parse_config(experiment, in);
        }
        if (seed)
            config.master_seed = *seed;
        if (trials)
            config.trials = *trials;
        if (workers)
            config.workers = *workers;
        if (out)
            config.output = *out;
        h::validate(config);

        const auto result = h::run_experiment(config);
        h::write_csv(config.output, result.rows);
        {
            std::ofstream meta(config.output + ".meta", std::ios::binary);
            meta << h::format_meta(config);
        }
        for (const auto& note : result.notes)
            std::cerr << note << '\n';
        if (!quiet)
            std::cout << h::format_csv(result.rows);
        std::cerr << "wrote " << result.rows.size() << " rows to " << config.output << '\n';
        if (!result.passed) {
            std::cerr << experiment << ": validation failed\n";
            return 2;
        }
    } catch (const h::ConfigError& e) {
        std::cerr << "quantlink: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "quantlink: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
