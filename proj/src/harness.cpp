// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/harness.hpp"

#include "quantlink/arrangements.hpp"
#include "quantlink/channel.hpp"
#include "quantlink/combinatorics.hpp"
#include "quantlink/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace quantlink::harness {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + ": '" + v + "' is not a number");
    }
    if (used != v.size() || !std::isfinite(d))
        throw ConfigError("config: " + key + ": '" + v + "' is not a number");
    return d;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v)
{
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("config: " + key + ": '" + v + "' is not a non-negative integer");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + ": '" + v + "' is out of range");
    }
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("config: " + key + ": expected true or false, got '" + v + "'");
}

std::vector<double> real_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_double(key, parts[0]));
            continue;
        }
        if (parts.size() != 3)
            throw ConfigError("config: " + key + ": ranges are written start:stop:step");
        const double a = to_double(key, parts[0]);
        const double b = to_double(key, parts[1]);
        const double step = to_double(key, parts[2]);
        if (!(step > 0.0) || b < a)
            throw ConfigError("config: " + key + ": range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (count > 100000)
            throw ConfigError("config: " + key + ": range has too many points");
        for (std::size_t i = 0; i < count; ++i) {
            const double x = a + static_cast<double>(i) * step;
            out.push_back(std::round(x * 1e12) / 1e12);
        }
    }
    return out;
}

std::vector<std::size_t> size_list(const std::string& key, const std::string& v)
{
    std::vector<std::size_t> out;
    for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_unsigned(key, parts[0]));
            continue;
        }
        if (parts.size() != 2 && parts.size() != 3)
            throw ConfigError("config: " + key + ": ranges are written start:stop or start:stop:step");
        const auto a = to_unsigned(key, parts[0]);
        const auto b = to_unsigned(key, parts[1]);
        const auto step = parts.size() == 3 ? to_unsigned(key, parts[2]) : 1;
        if (step == 0 || b < a || (b - a) / step > 100000)
            throw ConfigError("config: " + key + ": bad integer range");
        for (auto x = a; x <= b; x += step)
            out.push_back(x);
    }
    return out;
}

std::vector<std::size_t> iota_list(std::size_t a, std::size_t b)
{
    std::vector<std::size_t> v;
    for (auto x = a; x <= b; ++x)
        v.push_back(x);
    return v;
}

std::vector<double> grid(double a, double b, double step)
{
    return real_list("grid", std::to_string(a) + ":" + std::to_string(b) + ":" + std::to_string(step));
}

std::string fmt(double v)
{
    if (v == 0.0)
        v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string join(const std::vector<std::size_t>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + fmt(v[i]);
    return s;
}

double snr_power(double db) { return std::pow(10.0, db / 10.0); }

CsvRow analytic(double x, std::string scheme, double value, std::uint64_t seed)
{
    return CsvRow{x, std::move(scheme), value, 0.0, 0, seed};
}

template <class T>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, const std::function<T(std::size_t)>& fn)
{
    std::vector<T> out(count);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < count; i = next++)
            out[i] = fn(i);
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(workers, count));
    if (threads == 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_lock;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            try {
                work();
            } catch (...) {
                std::lock_guard<std::mutex> g(failure_lock);
                if (!failure)
                    failure = std::current_exception();
                next = count;
            }
        });
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

// ---- experiments ---------------------------------------------------------

ExperimentResult run_fig7a(const ExperimentConfig& c)
{
    ExperimentResult r;
    for (auto n_r : c.n_r_list) {
        const auto rank = std::min(c.n_t, n_r);
        for (auto n_q : c.n_q_list)
            r.rows.push_back(analytic(static_cast<double>(n_q), "blockwise_nr" + std::to_string(n_r),
                                      rates::blockwise_large_l_asymptote(n_q, rank, n_r).lower, c.master_seed));
    }
    for (auto n_q : c.n_q_list)
        r.rows.push_back(analytic(static_cast<double>(n_q), "nq_bound", static_cast<double>(n_q), c.master_seed));
    return r;
}

ExperimentResult run_fig7b(const ExperimentConfig& c)
{
    ExperimentResult r;
    for (auto l : c.block_lengths)
        for (auto n_q : c.n_q_list) {
            const double asym = rates::blockwise_large_l_asymptote(n_q, c.rank, c.rank).lower;
            const double exact = rates::blockwise_high_snr_bounds(l, n_q, c.rank, c.rank).lower;
            r.rows.push_back(
                analytic(static_cast<double>(n_q), "loss_l" + std::to_string(l), asym - exact, c.master_seed));
        }
    return r;
}

ExperimentResult run_fig8(const ExperimentConfig& c)
{
    ExperimentResult r;
    const auto rank = std::min(c.n_t, c.n_r);
    for (auto n_q : c.n_q_list) {
        const std::string tag = "_nq" + std::to_string(n_q);
        for (double eta : c.eta_grid) {
            const double u1 = rates::bc_large_l_asymptote(eta, n_q, rank, c.n_r).lower;
            const double u2 = rates::bc_large_l_asymptote(1.0 - eta, n_q, rank, c.n_r).lower;
            r.rows.push_back(analytic(eta, "blockwise" + tag + "_user1", u1, c.master_seed));
            r.rows.push_back(analytic(eta, "blockwise" + tag + "_user2", u2, c.master_seed));
        }
        // The adaptive threshold region is the square [0, n_q]^2; list its corners.
        const double q = static_cast<double>(n_q);
        const std::vector<std::pair<double, double>> corners{{0.0, 0.0}, {q, 0.0}, {q, q}, {0.0, q}};
        for (std::size_t i = 0; i < corners.size(); ++i) {
            r.rows.push_back(analytic(static_cast<double>(i), "adaptive" + tag + "_user1", corners[i].first,
                                      c.master_seed));
            r.rows.push_back(analytic(static_cast<double>(i), "adaptive" + tag + "_user2", corners[i].second,
                                      c.master_seed));
        }
    }
    return r;
}

ExperimentResult run_single_user(const ExperimentConfig& c, const std::vector<std::size_t>& budgets,
                                 bool with_capacity)
{
    std::vector<unsigned> nq(budgets.begin(), budgets.end());
    const std::size_t per_snr = nq.size() * (c.quantized ? 3 : 2) + (with_capacity ? 1 : 0);
    auto trial = [&](std::size_t, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        const auto h = channel::rayleigh_sample(c.n_r, c.n_t, rng);
        std::vector<double> v;
        v.reserve(per_snr * c.snr_db.size());
        for (double db : c.snr_db) {
            const double p = snr_power(db);
            const auto alloc = rates::allocate_budgets(h, p, nq);
            std::vector<rates::AllocationResult> quant;
            if (c.quantized)
                quant = rates::allocate_budgets(h, p, nq, rates::RateMode::quantized);
            const double cap = channel::shannon_capacity(h, p);
            for (std::size_t i = 0; i < nq.size(); ++i) {
                v.push_back(alloc[i].rate);
                v.push_back(std::min(static_cast<double>(nq[i]), cap));
                if (c.quantized)
                    v.push_back(quant[i].rate);
            }
            if (with_capacity)
                v.push_back(cap);
        }
        return v;
    };
    const auto stats = run_trials(c.trials, c.master_seed, c.workers, trial);

    ExperimentResult r;
    std::size_t idx = 0;
    for (double db : c.snr_db) {
        for (auto n : nq) {
            const std::string tag = "_nq" + std::to_string(n);
            auto push = [&](const std::string& scheme) {
                r.rows.push_back(CsvRow{db, scheme, stats.mean[idx], stats.stderr_value[idx], c.trials, c.master_seed});
                ++idx;
            };
            push("adaptive" + tag);
            push("tsc" + tag);
            if (c.quantized)
                push("adaptive_quantized" + tag);
        }
        if (with_capacity) {
            r.rows.push_back(CsvRow{db, "capacity", stats.mean[idx], stats.stderr_value[idx], c.trials, c.master_seed});
            ++idx;
        }
    }
    return r;
}

ExperimentResult run_fig9a(const ExperimentConfig& c) { return run_single_user(c, c.n_q_list, false); }

ExperimentResult run_rate_ptp(const ExperimentConfig& c) { return run_single_user(c, {c.n_q}, true); }

std::vector<double> equal_shares(std::size_t n_u) { return std::vector<double>(n_u, 1.0 / static_cast<double>(n_u)); }

// Per SNR and user: proposed, naive TDMA and the time-shared TSC.
std::vector<double> broadcast_trial(const ExperimentConfig& c, std::size_t n_u, const std::vector<double>& eta,
                                    std::mt19937_64& rng)
{
    std::vector<channel::ChannelMatrix> users;
    for (std::size_t j = 0; j < n_u; ++j)
        users.push_back(channel::rayleigh_sample(c.n_r, c.n_t, rng));
    const std::vector<unsigned> budgets(n_u, static_cast<unsigned>(c.n_q));
    const auto mode = c.quantized ? rates::RateMode::quantized : rates::RateMode::unquantized;
    std::vector<double> v;
    for (double db : c.snr_db) {
        const double p = snr_power(db);
        const std::vector<double> powers(n_u, p);
        const auto bc = rates::bc_rates(users, eta, budgets, powers, mode);
        const auto naive = rates::naive_tdma_rates(users, eta, budgets, powers, mode);
        for (std::size_t j = 0; j < n_u; ++j) {
            v.push_back(bc[j].rate);
            v.push_back(naive[j].rate);
            v.push_back(eta[j] * channel::truncated_capacity(users[j], p, c.n_q));
        }
    }
    return v;
}

ExperimentResult run_fig9b(const ExperimentConfig& c)
{
    auto trial = [&](std::size_t, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::vector<double> out;
        for (auto n_u : c.users) {
            const auto v = broadcast_trial(c, n_u, equal_shares(n_u), rng);
            // Average over users: the users are statistically identical.
            for (std::size_t s = 0; s < c.snr_db.size(); ++s)
                for (std::size_t k = 0; k < 3; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n_u; ++j)
                        acc += v[(s * n_u + j) * 3 + k];
                    out.push_back(acc / static_cast<double>(n_u));
                }
        }
        return out;
    };
    const auto stats = run_trials(c.trials, c.master_seed, c.workers, trial);

    ExperimentResult r;
    std::size_t idx = 0;
    static const char* kSchemes[] = {"proposed", "naive_tdma", "tsc_share"};
    for (auto n_u : c.users)
        for (double db : c.snr_db)
            for (const char* scheme : kSchemes) {
                r.rows.push_back(CsvRow{db, std::string(scheme) + "_nu" + std::to_string(n_u), stats.mean[idx],
                                        stats.stderr_value[idx], c.trials, c.master_seed});
                ++idx;
            }
    return r;
}

ExperimentResult run_rate_bc(const ExperimentConfig& c)
{
    const std::size_t n_u = c.users.front();
    const auto eta = c.eta.empty() ? equal_shares(n_u) : c.eta;
    auto trial = [&](std::size_t, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return broadcast_trial(c, n_u, eta, rng);
    };
    const auto stats = run_trials(c.trials, c.master_seed, c.workers, trial);

    ExperimentResult r;
    std::size_t idx = 0;
    static const char* kSchemes[] = {"proposed", "naive_tdma", "tsc_share"};
    for (double db : c.snr_db)
        for (std::size_t j = 0; j < n_u; ++j)
            for (const char* scheme : kSchemes) {
                r.rows.push_back(CsvRow{db, std::string(scheme) + "_user" + std::to_string(j + 1), stats.mean[idx],
                                        stats.stderr_value[idx], c.trials, c.master_seed});
                ++idx;
            }
    return r;
}

ExperimentResult run_high_snr(const ExperimentConfig& c)
{
    ExperimentResult r;
    for (auto l : c.block_lengths)
        for (auto n_q : c.n_q_list) {
            const auto b = rates::blockwise_high_snr_bounds(l, n_q, c.rank, c.n_r, c.zero_threshold);
            const std::string tag = "_l" + std::to_string(l);
            r.rows.push_back(analytic(static_cast<double>(n_q), "lower" + tag, b.lower, c.master_seed));
            r.rows.push_back(analytic(static_cast<double>(n_q), "upper" + tag, b.upper, c.master_seed));
        }
    for (auto n_q : c.n_q_list) {
        const auto a = rates::blockwise_large_l_asymptote(n_q, c.rank, c.n_r);
        r.rows.push_back(analytic(static_cast<double>(n_q), "asymptote_lower", a.lower, c.master_seed));
        r.rows.push_back(analytic(static_cast<double>(n_q), "asymptote_upper", a.upper, c.master_seed));
    }
    return r;
}

struct RegionCell {
    std::size_t n = 0;
    std::size_t d = 0;
    bool zero = false;
};

ExperimentResult run_regions(const ExperimentConfig& c)
{
    std::vector<RegionCell> cells;
    for (std::size_t n = 1; n <= c.max_hyperplanes; ++n)
        for (std::size_t d = 1; d <= c.max_dimension; ++d)
            for (bool zero : {false, true})
                cells.push_back({n, d, zero});

    struct CellReport {
        std::size_t matches = 0;
        std::vector<std::string> mismatches;
    };
    const std::function<CellReport(std::size_t)> check = [&](std::size_t i) {
        const auto& cell = cells[i];
        const auto expected = combinatorics::max_regions({cell.n, cell.d, cell.zero}).convert_to<std::size_t>();
        CellReport rep;
        for (std::size_t s = 0; s < c.region_seeds; ++s) {
            const auto seed = trial_seed(c.master_seed, i * c.region_seeds + s);
            const auto a = arrangements::random_general_position(cell.n, cell.d, cell.zero, seed);
            const auto count = arrangements::enumerate_regions(a).size();
            if (count == expected)
                ++rep.matches;
            else
                rep.mismatches.push_back("mismatch n=" + std::to_string(cell.n) + " d=" + std::to_string(cell.d) +
                                         (cell.zero ? " zero" : " general") + " seed=" + std::to_string(seed) +
                                         " oracle=" + std::to_string(count) +
                                         " closed_form=" + std::to_string(expected));
        }
        return rep;
    };
    const auto reports = parallel_map<CellReport>(cells.size(), c.workers, check);

    ExperimentResult r;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        const auto& rep = reports[i];
        const std::string scheme = "d" + std::to_string(cell.d) + (cell.zero ? "_zero" : "_general");
        r.rows.push_back(CsvRow{static_cast<double>(cell.n), scheme,
                                static_cast<double>(rep.matches) / static_cast<double>(c.region_seeds), 0.0,
                                c.region_seeds, c.master_seed});
        r.notes.push_back((rep.mismatches.empty() ? "PASS" : "FAIL") + std::string(" n=") + std::to_string(cell.n) +
                          " d=" + std::to_string(cell.d) + (cell.zero ? " zero" : " general") + " " +
                          std::to_string(rep.matches) + "/" + std::to_string(c.region_seeds));
        for (const auto& m : rep.mismatches)
            r.notes.push_back(m);
        if (!rep.mismatches.empty())
            r.passed = false;
    }
    return r;
}

const std::map<std::string, std::string>& axis_descriptions()
{
    static const std::map<std::string, std::string> m{
        {"fig7a", "n_q (one-bit ADC count)"},
        {"fig7b", "n_q (one-bit ADC count)"},
        {"fig8", "eta (time share of user 1); adaptive rows index the corners of the rate square"},
        {"fig9a", "SNR in dB"},
        {"fig9b", "SNR in dB"},
        {"regions", "number of hyperplanes n; value is the fraction of seeds matching the closed form"},
        {"rate-ptp", "SNR in dB"},
        {"rate-bc", "SNR in dB"},
        {"high-snr", "n_q (one-bit ADC count)"},
    };
    return m;
}

}  // namespace

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"fig7a", "fig7b",    "fig8",    "fig9a",   "fig9b",
                                                "regions", "rate-ptp", "rate-bc", "high-snr"};
    return names;
}

ExperimentConfig default_config(const std::string& experiment)
{
    ExperimentConfig c;
    c.experiment = experiment;
    const auto snr = grid(-10.0, 60.0, 5.0);
    if (experiment == "fig7a") {
        c.n_t = 10;
        c.n_r_list = {2, 4, 6, 8};
        c.n_q_list = iota_list(1, 40);
    } else if (experiment == "fig7b") {
        c.rank = 16;
        c.block_lengths = {1, 2, 5, 10, 20};
        c.n_q_list = iota_list(1, 48);
    } else if (experiment == "fig8") {
        c.n_t = 10;
        c.n_r = 4;
        c.n_q_list = {4, 6, 8};
        c.eta_grid = grid(0.01, 0.99, 0.01);
    } else if (experiment == "fig9a") {
        c.n_t = 16;
        c.n_r = 32;
        c.n_q_list = {16, 32};
        c.snr_db = snr;
    } else if (experiment == "fig9b") {
        c.n_t = 16;
        c.n_r = 32;
        c.n_q = 16;
        c.users = {2, 3};
        c.snr_db = snr;
    } else if (experiment == "regions") {
        c.max_hyperplanes = 8;
        c.max_dimension = 4;
        c.region_seeds = 100;
    } else if (experiment == "rate-ptp") {
        c.n_t = 4;
        c.n_r = 4;
        c.n_q = 8;
        c.snr_db = grid(-10.0, 40.0, 5.0);
    } else if (experiment == "rate-bc") {
        c.n_t = 4;
        c.n_r = 4;
        c.n_q = 8;
        c.users = {2};
        c.snr_db = grid(-10.0, 40.0, 5.0);
    } else if (experiment == "high-snr") {
        c.rank = 4;
        c.n_r = 4;
        c.block_lengths = {1, 2, 5, 10};
        c.n_q_list = iota_list(1, 32);
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    c.output = experiment + ".csv";
    return c;
}

ExperimentConfig parse_config(const std::string& experiment, std::istream& in)
{
    ExperimentConfig c = default_config(experiment);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty value for " + key);

        if (key == "n_t")
            c.n_t = to_unsigned(key, value);
        else if (key == "n_r")
            c.n_r = to_unsigned(key, value);
        else if (key == "rank")
            c.rank = to_unsigned(key, value);
        else if (key == "n_q")
            c.n_q = to_unsigned(key, value);
        else if (key == "n_r_list")
            c.n_r_list = size_list(key, value);
        else if (key == "n_q_list")
            c.n_q_list = size_list(key, value);
        else if (key == "block_lengths")
            c.block_lengths = size_list(key, value);
        else if (key == "users")
            c.users = size_list(key, value);
        else if (key == "eta")
            c.eta = real_list(key, value);
        else if (key == "eta_grid")
            c.eta_grid = real_list(key, value);
        else if (key == "snr_db")
            c.snr_db = real_list(key, value);
        else if (key == "trials")
            c.trials = to_unsigned(key, value);
        else if (key == "seed")
            c.master_seed = to_unsigned(key, value);
        else if (key == "workers")
            c.workers = to_unsigned(key, value);
        else if (key == "quantized")
            c.quantized = to_bool(key, value);
        else if (key == "zero_threshold")
            c.zero_threshold = to_bool(key, value);
        else if (key == "max_hyperplanes")
            c.max_hyperplanes = to_unsigned(key, value);
        else if (key == "max_dimension")
            c.max_dimension = to_unsigned(key, value);
        else if (key == "region_seeds")
            c.region_seeds = to_unsigned(key, value);
        else if (key == "out")
            c.output = value;
        else
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return c;
}

void validate(const ExperimentConfig& c)
{
    auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
    auto positive_list = [&](const std::vector<std::size_t>& v, const char* name) {
        if (v.empty())
            fail(std::string(name) + " must not be empty");
        for (auto x : v)
            if (x < 1)
                fail(std::string(name) + " entries must be at least 1");
    };
    if (std::find(experiment_names().begin(), experiment_names().end(), c.experiment) == experiment_names().end())
        fail("unknown experiment '" + c.experiment + "'");
    if (c.trials < 1)
        fail("trials must be at least 1");
    if (c.workers < 1)
        fail("workers must be at least 1");
    if (c.n_t < 1 || c.n_r < 1 || c.n_q < 1 || c.rank < 1)
        fail("n_t, n_r, n_q and rank must be at least 1");
    const auto& e = c.experiment;
    const bool swept = e == "fig9a" || e == "fig9b" || e == "rate-ptp" || e == "rate-bc";
    if (swept) {
        if (c.snr_db.empty())
            fail("snr_db must not be empty");
        for (std::size_t i = 1; i < c.snr_db.size(); ++i)
            if (!(c.snr_db[i] > c.snr_db[i - 1]))
                fail("snr_db must be strictly increasing");
        if (c.n_t > 64 || c.n_r > 64)
            fail("n_t and n_r are limited to 64");
    }
    if (e == "fig7a") {
        positive_list(c.n_r_list, "n_r_list");
        positive_list(c.n_q_list, "n_q_list");
    }
    if (e == "fig7b" || e == "high-snr") {
        positive_list(c.block_lengths, "block_lengths");
        positive_list(c.n_q_list, "n_q_list");
        if (e == "high-snr" && c.rank > c.n_r)
            fail("rank must not exceed n_r");
    }
    if (e == "fig8") {
        positive_list(c.n_q_list, "n_q_list");
        if (c.eta_grid.empty())
            fail("eta_grid must not be empty");
        for (double x : c.eta_grid)
            if (!(x > 0.0 && x < 1.0))
                fail("eta_grid entries must lie in (0, 1)");
    }
    if (e == "fig9a") {
        positive_list(c.n_q_list, "n_q_list");
        for (auto n : c.n_q_list)
            if (n > 64)
                fail("n_q_list entries are limited to 64");
    }
    if (e == "fig9b" || e == "rate-bc") {
        positive_list(c.users, "users");
        if (c.n_q > 64)
            fail("n_q is limited to 64");
    }
    if (e == "rate-bc") {
        if (c.users.size() != 1)
            fail("rate-bc takes a single user count");
        if (!c.eta.empty()) {
            if (c.eta.size() != c.users.front())
                fail("eta needs one share per user");
            try {
                rates::validate_shares(c.eta);
            } catch (const std::invalid_argument& ex) {
                fail(ex.what());
            }
        }
    }
    if (e == "regions") {
        if (c.max_hyperplanes < 1 || c.max_hyperplanes > arrangements::kMaxEnumerationSize)
            fail("max_hyperplanes must lie in [1, 22]");
        if (c.max_dimension < 1)
            fail("max_dimension must be at least 1");
        if (c.region_seeds < 1)
            fail("region_seeds must be at least 1");
    }
    if (c.output.empty())
        fail("out must not be empty");
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial)
{
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return splitmix(master_seed ^ splitmix(trial));
}

TrialStats run_trials(std::size_t trials, std::uint64_t master_seed, std::size_t workers,
                      const std::function<std::vector<double>(std::size_t, std::uint64_t)>& fn)
{
    if (trials < 1)
        throw std::invalid_argument("run_trials: at least one trial");
    const std::function<std::vector<double>(std::size_t)> one = [&](std::size_t t) {
        return fn(t, trial_seed(master_seed, t));
    };
    const auto results = parallel_map<std::vector<double>>(trials, workers, one);
    const std::size_t width = results.front().size();
    for (const auto& r : results)
        if (r.size() != width)
            throw std::logic_error("run_trials: trials returned different numbers of values");

    TrialStats s;
    s.mean.assign(width, 0.0);
    s.stderr_value.assign(width, 0.0);
    const auto n = static_cast<double>(trials);
    for (const auto& r : results)
        for (std::size_t i = 0; i < width; ++i)
            s.mean[i] += r[i];
    for (auto& m : s.mean)
        m /= n;
    if (trials > 1) {
        for (const auto& r : results)
            for (std::size_t i = 0; i < width; ++i)
                s.stderr_value[i] += (r[i] - s.mean[i]) * (r[i] - s.mean[i]);
        for (auto& v : s.stderr_value)
            v = std::sqrt(v / (n - 1.0) / n);
    }
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    validate(config);
    const auto& e = config.experiment;
    if (e == "fig7a")
        return run_fig7a(config);
    if (e == "fig7b")
        return run_fig7b(config);
    if (e == "fig8")
        return run_fig8(config);
    if (e == "fig9a")
        return run_fig9a(config);
    if (e == "fig9b")
        return run_fig9b(config);
    if (e == "regions")
        return run_regions(config);
    if (e == "rate-ptp")
        return run_rate_ptp(config);
    if (e == "rate-bc")
        return run_rate_bc(config);
    return run_high_snr(config);
}

std::string format_csv(const std::vector<CsvRow>& rows)
{
    std::string out = "x,scheme,value,stderr,n_trials,seed\n";
    for (const auto& r : rows)
        out += fmt(r.x) + "," + r.scheme + "," + fmt(r.value) + "," + fmt(r.stderr_value) + "," +
               std::to_string(r.n_trials) + "," + std::to_string(r.seed) + "\n";
    return out;
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << format_csv(rows);
    if (!f)
        throw std::runtime_error("failed writing '" + path + "'");
}

std::string format_meta(const ExperimentConfig& c)
{
    std::ostringstream m;
    m << "experiment=" << c.experiment << '\n';
    m << "x_axis=" << axis_descriptions().at(c.experiment) << '\n';
    m << "snr_definition=SNR is the total transmit power P against unit-variance noise; snr_db = 10*log10(P)\n";
    m << "rate_unit=bits per channel-use\n";
    m << "seed=" << c.master_seed << '\n';
    m << "trials=" << c.trials << '\n';
    m << "n_t=" << c.n_t << "\nn_r=" << c.n_r << "\nrank=" << c.rank << "\nn_q=" << c.n_q << '\n';
    m << "n_r_list=" << join(c.n_r_list) << "\nn_q_list=" << join(c.n_q_list) << '\n';
    m << "block_lengths=" << join(c.block_lengths) << "\nusers=" << join(c.users) << '\n';
    m << "eta=" << join(c.eta) << "\neta_grid=" << join(c.eta_grid) << "\nsnr_db=" << join(c.snr_db) << '\n';
    m << "quantized=" << (c.quantized ? "true" : "false") << '\n';
    m << "zero_threshold=" << (c.zero_threshold ? "true" : "false") << '\n';
    m << "max_hyperplanes=" << c.max_hyperplanes << "\nmax_dimension=" << c.max_dimension
      << "\nregion_seeds=" << c.region_seeds << '\n';
    return m.str();
}

}  // namespace quantlink::harness
