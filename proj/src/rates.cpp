// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/rates.hpp"

#include "quantlink/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace quantlink::rates {

namespace {

using combinatorics::binary_entropy;

void require_positive(std::size_t v, const char* what)
{
    if (v < 1)
        throw std::invalid_argument(std::string(what) + " must be at least 1");
}

// log2 |R| for n hyperplanes in d dimensions; d = 0 leaves a single region.
double log2_regions(std::uint64_t n, std::uint64_t d, bool zero)
{
    if (d == 0)
        return 0.0;
    return combinatorics::log2_max_regions({n, d, zero});
}

std::uint64_t floor_share(double x)
{
    return static_cast<std::uint64_t>(std::floor(x + 1e-9));
}

// Rate table: table[k][b] is the rate of stream k with b ADCs.
using Table = std::vector<std::vector<double>>;

template <class Depth>
Table rate_table(std::span<const double> sigma, const channel::PowerAllocation& alloc, unsigned n_q, RateMode mode,
                 Depth depth)
{
    Table t(sigma.size(), std::vector<double>(n_q + 1, 0.0));
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const double p = alloc.per_stream_power[k];
        if (p <= 0.0)
            continue;
        for (unsigned b = 1; b <= n_q; ++b)
            t[k][b] = stream_rate(depth(b), p, sigma[k], mode);
    }
    return t;
}

bool better(double candidate, double best)
{
    return candidate > best + 1e-12 * std::max(1.0, std::abs(best));
}

std::vector<unsigned> best_composition(const Table& t, unsigned n_q)
{
    const std::size_t s = t.size();
    constexpr double kNone = -std::numeric_limits<double>::infinity();
    // tail[k][r]: best total of streams k.. using exactly r ADCs.
    std::vector<std::vector<double>> tail(s + 1, std::vector<double>(n_q + 1, kNone));
    tail[s][0] = 0.0;
    for (std::size_t k = s; k-- > 0;)
        for (unsigned r = 0; r <= n_q; ++r)
            for (unsigned b = 0; b <= r; ++b)
                if (tail[k + 1][r - b] != kNone)
                    tail[k][r] = std::max(tail[k][r], t[k][b] + tail[k + 1][r - b]);

    std::vector<unsigned> bits(s, 0);
    unsigned left = n_q;
    for (std::size_t k = 0; k < s; ++k) {
        for (unsigned b = 0; b <= left; ++b) {
            const double rest = tail[k + 1][left - b];
            if (rest == kNone)
                continue;
            if (!better(tail[k][left], t[k][b] + rest)) {
                bits[k] = b;
                break;
            }
        }
        left -= bits[k];
    }
    return bits;
}

template <class Depth>
AllocationResult allocate_with(const channel::ChannelMatrix& h, double power, unsigned n_q, RateMode mode,
                               Depth depth)
{
    if (n_q < 1)
        throw std::invalid_argument("allocate: n_q must be at least 1");
    const auto sigma = h.singular_values();
    if (sigma.empty())
        throw std::invalid_argument("allocate: channel has rank zero");
    const auto alloc = channel::waterfill(sigma, power);
    const Table t = rate_table(sigma, alloc, n_q, mode, depth);

    AllocationResult out;
    out.bits = best_composition(t, n_q);
    out.powers = alloc.per_stream_power;
    for (std::size_t k = 0; k < sigma.size(); ++k)
        out.rate += t[k][out.bits[k]];
    return out;
}

void check_users(std::size_t users, std::span<const double> eta, std::span<const unsigned> budgets,
                 std::span<const double> powers)
{
    if (users < 1 || eta.size() != users || budgets.size() != users || powers.size() != users)
        throw std::invalid_argument("broadcast rates: one share, budget and power per user");
    validate_shares(eta);
}

}  // namespace

HighSnrBounds blockwise_high_snr_bounds(std::size_t l, std::size_t n_q, std::size_t rank, std::size_t n_r,
                                        bool zero_threshold)
{
    require_positive(l, "l");
    require_positive(n_q, "n_q");
    require_positive(rank, "rank");
    if (rank > n_r)
        throw std::invalid_argument("blockwise_high_snr_bounds: rank exceeds n_r");
    const double ld = static_cast<double>(l);
    HighSnrBounds b;
    b.regime = Regime::exact_block;
    b.zero_threshold = zero_threshold;
    b.lower = log2_regions(l * n_q, l * rank, zero_threshold) / ld;
    b.upper = log2_regions(l * n_q, l * n_r, zero_threshold) / ld;
    return b;
}

HighSnrBounds blockwise_large_l_asymptote(std::size_t n_q, std::size_t rank, std::size_t n_r)
{
    return bc_large_l_asymptote(1.0, n_q, rank, n_r);
}

double block_length_correction(std::size_t l)
{
    require_positive(l, "l");
    const double ld = static_cast<double>(l);
    return -std::log2(ld) / (2.0 * ld);
}

HighSnrBounds blockwise_large_nq_asymptote(std::size_t l, std::size_t rank, std::size_t n_r, std::size_t n_q)
{
    require_positive(l, "l");
    return bc_large_nq_asymptote(1.0, rank, n_r, n_q);
}

HighSnrBounds bc_blockwise_bounds(double eta, std::size_t l, std::size_t n_q, std::size_t rank, std::size_t n_r,
                                  bool zero_threshold)
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("bc_blockwise_bounds: eta must lie in (0, 1]");
    require_positive(l, "l");
    require_positive(n_q, "n_q");
    require_positive(rank, "rank");
    if (rank > n_r)
        throw std::invalid_argument("bc_blockwise_bounds: rank exceeds n_r");
    const double ld = static_cast<double>(l);
    HighSnrBounds b;
    b.regime = Regime::exact_block;
    b.zero_threshold = zero_threshold;
    b.lower = log2_regions(l * n_q, floor_share(eta * ld * static_cast<double>(rank)), zero_threshold) / ld;
    b.upper = log2_regions(l * n_q, floor_share(eta * ld * static_cast<double>(n_r)), zero_threshold) / ld;
    return b;
}

HighSnrBounds bc_large_l_asymptote(double eta, std::size_t n_q, std::size_t rank, std::size_t n_r)
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("bc_large_l_asymptote: eta must lie in (0, 1]");
    require_positive(n_q, "n_q");
    require_positive(rank, "rank");
    if (rank > n_r)
        throw std::invalid_argument("large-l asymptote: rank exceeds n_r");
    const double nq = static_cast<double>(n_q);
    const double alpha = std::min(eta * static_cast<double>(rank) / nq, 0.5);
    const double beta = std::min(eta * static_cast<double>(n_r) / nq, 0.5);
    HighSnrBounds b;
    b.regime = Regime::large_block;
    b.lower = nq * binary_entropy(alpha);
    b.upper = nq * binary_entropy(beta);
    return b;
}

HighSnrBounds bc_large_nq_asymptote(double eta, std::size_t rank, std::size_t n_r, std::size_t n_q)
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("bc_large_nq_asymptote: eta must lie in (0, 1]");
    require_positive(n_q, "n_q");
    require_positive(rank, "rank");
    if (rank > n_r)
        throw std::invalid_argument("large-n_q asymptote: rank exceeds n_r");
    const double lg = std::log2(static_cast<double>(n_q));
    HighSnrBounds b;
    b.regime = Regime::large_nq;
    b.lower = eta * static_cast<double>(rank) * lg;
    b.upper = eta * static_cast<double>(n_r) * lg;
    return b;
}

void validate_shares(std::span<const double> eta)
{
    if (eta.empty())
        throw std::invalid_argument("time shares: at least one user");
    double sum = 0.0;
    for (double e : eta) {
        if (!(e > 0.0 && e <= 1.0))
            throw std::invalid_argument("time shares: each share must lie in (0, 1]");
        sum += e;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("time shares: shares must sum to 1");
}

TimeShare mac_timeshare(std::span<const double> per_user_rates, std::span<const double> eta)
{
    if (per_user_rates.size() != eta.size())
        throw std::invalid_argument("mac_timeshare: one share per user");
    validate_shares(eta);
    TimeShare out;
    out.per_user.resize(eta.size());
    for (std::size_t j = 0; j < eta.size(); ++j) {
        out.per_user[j] = eta[j] * per_user_rates[j];
        out.sum += out.per_user[j];
    }
    return out;
}

unsigned boosted_depth(unsigned n, double eta)
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("boosted_depth: eta must lie in (0, 1]");
    return static_cast<unsigned>(floor_share(static_cast<double>(n) / eta));
}

double stream_rate(unsigned bits, double power, double gain, RateMode mode)
{
    if (bits == 0 || power <= 0.0 || gain <= 0.0)
        return 0.0;
    const PamStream stream(std::min(bits, kMaxStreamDepth), power, gain);
    if (mode == RateMode::quantized)
        return mi_quantized_pam(stream, matched_step(stream));
    return mi_pam_awgn(stream);
}

AllocationResult allocate(const channel::ChannelMatrix& h, double power, unsigned n_q, RateMode mode)
{
    return allocate_with(h, power, n_q, mode, [](unsigned b) { return b; });
}

std::vector<AllocationResult> allocate_budgets(const channel::ChannelMatrix& h, double power,
                                               std::span<const unsigned> budgets, RateMode mode)
{
    if (budgets.empty())
        return {};
    const unsigned top = *std::max_element(budgets.begin(), budgets.end());
    if (*std::min_element(budgets.begin(), budgets.end()) < 1)
        throw std::invalid_argument("allocate_budgets: budgets must be at least 1");
    const auto sigma = h.singular_values();
    if (sigma.empty())
        throw std::invalid_argument("allocate_budgets: channel has rank zero");
    const auto alloc = channel::waterfill(sigma, power);
    const Table t = rate_table(sigma, alloc, top, mode, [](unsigned b) { return b; });
    std::vector<AllocationResult> out;
    for (unsigned n_q : budgets) {
        Table sub(t.size());
        for (std::size_t k = 0; k < t.size(); ++k)
            sub[k].assign(t[k].begin(), t[k].begin() + n_q + 1);
        AllocationResult r;
        r.bits = best_composition(sub, n_q);
        r.powers = alloc.per_stream_power;
        for (std::size_t k = 0; k < sigma.size(); ++k)
            r.rate += sub[k][r.bits[k]];
        out.push_back(std::move(r));
    }
    return out;
}

AllocationResult allocate_exhaustive(const channel::ChannelMatrix& h, double power, unsigned n_q, RateMode mode)
{
    const auto sigma = h.singular_values();
    if (sigma.empty())
        throw std::invalid_argument("allocate_exhaustive: channel has rank zero");
    if (sigma.size() > 8 || n_q > 32 || n_q < 1)
        throw std::length_error("allocate_exhaustive: limited to s <= 8 streams and 1 <= n_q <= 32");
    const auto alloc = channel::waterfill(sigma, power);
    const Table t = rate_table(sigma, alloc, n_q, mode, [](unsigned b) { return b; });
    const std::size_t s = sigma.size();

    // Weak compositions in lexicographic order; only strict improvements replace the best.
    std::vector<unsigned> comp(s, 0);
    comp[s - 1] = n_q;
    AllocationResult best;
    best.rate = -1.0;
    best.powers = alloc.per_stream_power;
    while (true) {
        double r = 0.0;
        for (std::size_t k = 0; k < s; ++k)
            r += t[k][comp[k]];
        if (better(r, best.rate)) {
            best.rate = r;
            best.bits = comp;
        }
        // Next composition: empty the rightmost nonzero entry past the first,
        // move one unit to its left neighbour and the rest to the last slot.
        std::size_t i = s - 1;
        while (i > 0 && comp[i] == 0)
            --i;
        if (i == 0)
            break;
        const unsigned carry = comp[i];
        comp[i] = 0;
        ++comp[i - 1];
        comp[s - 1] = carry - 1;
    }
    return best;
}

std::vector<AllocationResult> bc_rates(std::span<const channel::ChannelMatrix> users, std::span<const double> eta,
                                       std::span<const unsigned> budgets, std::span<const double> powers,
                                       RateMode mode)
{
    check_users(users.size(), eta, budgets, powers);
    std::vector<AllocationResult> out;
    for (std::size_t j = 0; j < users.size(); ++j) {
        const double e = eta[j];
        auto r = allocate_with(users[j], powers[j], budgets[j], mode, [e](unsigned b) { return boosted_depth(b, e); });
        r.rate *= e;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AllocationResult> naive_tdma_rates(std::span<const channel::ChannelMatrix> users,
                                               std::span<const double> eta, std::span<const unsigned> budgets,
                                               std::span<const double> powers, RateMode mode)
{
    check_users(users.size(), eta, budgets, powers);
    std::vector<AllocationResult> out;
    for (std::size_t j = 0; j < users.size(); ++j) {
        auto r = allocate(users[j], powers[j], budgets[j], mode);
        r.rate *= eta[j];
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace quantlink::rates
