// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_CHANNEL_HPP
#define QUANTLINK_CHANNEL_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace quantlink::channel {

/// Thin SVD  A = U diag(s) V^T  with s sorted in descending order.
struct SvdResult {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd v;
};

/// One-sided (Hestenes) Jacobi SVD. Sized for the desk-scale matrices used
/// here (up to a few hundred rows/columns).
SvdResult jacobi_svd(const Eigen::MatrixXd& a);

/// Singular values below kRankTolerance * sigma_1 do not count toward rank.
inline constexpr double kRankTolerance = 1e-10;

/// Real n_r x n_t channel gain matrix H of y = H x + n, with its SVD cached.
class ChannelMatrix {
public:
    explicit ChannelMatrix(Eigen::MatrixXd entries);

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    std::size_t receive_antennas() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    std::size_t transmit_antennas() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
    std::size_t rank() const noexcept { return rank_; }

    /// All min(n_r, n_t) singular values, descending.
    const Eigen::VectorXd& all_singular_values() const noexcept { return svd_.singular_values; }
    /// The rank() nonzero singular values, descending.
    std::vector<double> singular_values() const;
    /// Left singular vectors of the nonzero singular values (n_r x rank).
    Eigen::MatrixXd left_basis() const { return svd_.u.leftCols(static_cast<Eigen::Index>(rank_)); }
    /// Right singular vectors of the nonzero singular values (n_t x rank).
    Eigen::MatrixXd right_basis() const { return svd_.v.leftCols(static_cast<Eigen::Index>(rank_)); }
    const SvdResult& svd() const noexcept { return svd_; }

private:
    Eigen::MatrixXd entries_;
    SvdResult svd_;
    std::size_t rank_ = 0;
};

struct PowerAllocation {
    std::vector<double> per_stream_power;
    double total_budget = 0.0;
    double water_level = 0.0;
};

/// i.i.d. N(0, 1) entries.
ChannelMatrix rayleigh_sample(std::size_t n_r, std::size_t n_t, std::uint64_t seed);
ChannelMatrix rayleigh_sample(std::size_t n_r, std::size_t n_t, std::mt19937_64& rng);

/// P_k = max(0, mu - 1/sigma_k^2) with sum_k P_k = P.
PowerAllocation waterfill(std::span<const double> singular_values, double total_power);

/// sum_k log2(1 + sigma_k^2 P_k) with waterfilled P_k.
double shannon_capacity(const ChannelMatrix& h, double total_power);

/// Truncated Shannon capacity min(n_q, C).
double truncated_capacity(const ChannelMatrix& h, double total_power, std::size_t n_q);

/// H (x) I_l, the channel seen by l consecutive uses.
ChannelMatrix kron_block(const ChannelMatrix& h, std::size_t block_length);

/// Plain-text fixture format: first line "n_r n_t", then n_r whitespace-separated rows.
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& is);

}  // namespace quantlink::channel

#endif
