// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_HARNESS_HPP
#define QUANTLINK_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quantlink::harness {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;
    std::size_t n_t = 10;
    std::size_t n_r = 4;
    std::size_t rank = 16;
    std::size_t n_q = 16;
    std::vector<std::size_t> n_r_list;
    std::vector<std::size_t> n_q_list;
    std::vector<std::size_t> block_lengths;
    std::vector<std::size_t> users;
    std::vector<double> eta;
    std::vector<double> eta_grid;
    std::vector<double> snr_db;
    std::size_t trials = 200;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
    bool quantized = false;
    bool zero_threshold = false;
    std::size_t max_hyperplanes = 8;
    std::size_t max_dimension = 4;
    std::size_t region_seeds = 100;
    std::string output;
};

const std::vector<std::string>& experiment_names();

/// Defaults of `experiment` (throws ConfigError for an unknown id).
ExperimentConfig default_config(const std::string& experiment);

/// Applies `key = value` lines (# starts a comment; lists are comma
/// separated; a list may be written start:stop:step) over the defaults.
ExperimentConfig parse_config(const std::string& experiment, std::istream& in);

/// Throws ConfigError when a field is out of range.
void validate(const ExperimentConfig& config);

struct CsvRow {
    double x = 0.0;
    std::string scheme;
    double value = 0.0;
    double stderr_value = 0.0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
};

struct ExperimentResult {
    std::vector<CsvRow> rows;
    std::vector<std::string> notes;
    bool passed = true;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string format_csv(const std::vector<CsvRow>& rows);
void write_csv(const std::string& path, const std::vector<CsvRow>& rows);
/// key=value sidecar describing the run (axis definitions, seed, trials).
std::string format_meta(const ExperimentConfig& config);

/// Independent generator seed for one trial.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

struct TrialStats {
    std::vector<double> mean;
    std::vector<double> stderr_value;
};

/// Runs fn(trial, seed) for every trial on `workers` threads; each call
/// returns the same number of values. Results are reduced in trial order.
TrialStats run_trials(std::size_t trials, std::uint64_t master_seed, std::size_t workers,
                      const std::function<std::vector<double>(std::size_t, std::uint64_t)>& fn);

}  // namespace quantlink::harness

#endif
