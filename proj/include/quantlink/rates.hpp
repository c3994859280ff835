// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_RATES_HPP
#define QUANTLINK_RATES_HPP

#include "quantlink/channel.hpp"
#include "quantlink/pam.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace quantlink::rates {

enum class Regime { exact_block, large_block, large_nq };

/// High-SNR rate bounds in bits per channel-use. Asymptotic regimes drop
/// their O(1) and O(1/l) terms.
struct HighSnrBounds {
    double lower = 0.0;
    double upper = 0.0;
    Regime regime = Regime::exact_block;
    bool zero_threshold = false;
};

/// (1/l) log2 of the region count with l*n_q hyperplanes in l*rank (lower)
/// and l*n_r (upper) dimensions. Sums start at i = 0.
HighSnrBounds blockwise_high_snr_bounds(std::size_t l, std::size_t n_q, std::size_t rank, std::size_t n_r,
                                        bool zero_threshold = false);

/// n_q h_b(min{rank/n_q, 1/2}) and n_q h_b(min{n_r/n_q, 1/2}).
HighSnrBounds blockwise_large_l_asymptote(std::size_t n_q, std::size_t rank, std::size_t n_r);

/// -(1/(2l)) log2 l, the finite-l term left out of the large-l asymptote.
double block_length_correction(std::size_t l);

/// rank log2 n_q and n_r log2 n_q.
HighSnrBounds blockwise_large_nq_asymptote(std::size_t l, std::size_t rank, std::size_t n_r, std::size_t n_q);

/// Broadcast user with time share eta: dimensions floor(eta l rank) and floor(eta l n_r).
HighSnrBounds bc_blockwise_bounds(double eta, std::size_t l, std::size_t n_q, std::size_t rank, std::size_t n_r,
                                  bool zero_threshold = false);

/// n_q h_b(min{eta rank/n_q, 1/2}) and n_q h_b(min{eta n_r/n_q, 1/2}).
HighSnrBounds bc_large_l_asymptote(double eta, std::size_t n_q, std::size_t rank, std::size_t n_r);

/// eta rank log2 n_q and eta n_r log2 n_q.
HighSnrBounds bc_large_nq_asymptote(double eta, std::size_t rank, std::size_t n_r, std::size_t n_q);

struct TimeShare {
    std::vector<double> per_user;
    double sum = 0.0;
};

/// User j gets eta_j * rate_j.
TimeShare mac_timeshare(std::span<const double> per_user_rates, std::span<const double> eta);

/// Checks 0 < eta_j <= 1 and sum eta_j = 1 (to 1e-9).
void validate_shares(std::span<const double> eta);

/// floor(n / eta), robust to eta values such as 1/3 that are inexact in binary.
unsigned boosted_depth(unsigned n, double eta);

enum class RateMode { unquantized, quantized };

/// Rate of one stream with 2^bits-PAM: mi_pam_awgn, or the matched-step
/// quantized DMC rate. Zero bits carry nothing.
double stream_rate(unsigned bits, double power, double gain, RateMode mode);

struct AllocationResult {
    std::vector<unsigned> bits;
    std::vector<double> powers;
    double rate = 0.0;
};

/// Waterfilled powers over all rank(H) streams, then the ADC composition
/// maximizing the sum of stream rates. Ties go to the lexicographically
/// smallest composition.
AllocationResult allocate(const channel::ChannelMatrix& h, double power, unsigned n_q,
                          RateMode mode = RateMode::unquantized);

/// allocate() for several ADC budgets on one channel, sharing the rate table.
std::vector<AllocationResult> allocate_budgets(const channel::ChannelMatrix& h, double power,
                                               std::span<const unsigned> budgets,
                                               RateMode mode = RateMode::unquantized);

/// Same objective by brute force over every weak composition (s <= 8, n_q <= 32).
AllocationResult allocate_exhaustive(const channel::ChannelMatrix& h, double power, unsigned n_q,
                                     RateMode mode = RateMode::unquantized);

/// Per-user broadcast rates: stream depth floor(n_{q,j,k}/eta_j), scaled by eta_j.
std::vector<AllocationResult> bc_rates(std::span<const channel::ChannelMatrix> users, std::span<const double> eta,
                                       std::span<const unsigned> budgets, std::span<const double> powers,
                                       RateMode mode = RateMode::unquantized);

/// eta_j times the single-user rate with plain depth n_{q,j,k}.
std::vector<AllocationResult> naive_tdma_rates(std::span<const channel::ChannelMatrix> users,
                                               std::span<const double> eta, std::span<const unsigned> budgets,
                                               std::span<const double> powers,
                                               RateMode mode = RateMode::unquantized);

/// Deepest PAM used per stream; larger depths are evaluated at this depth.
inline constexpr unsigned kMaxStreamDepth = 62;

}  // namespace quantlink::rates

#endif
