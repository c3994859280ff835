// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_RECEIVERS_HPP
#define QUANTLINK_RECEIVERS_HPP

#include "quantlink/arrangements.hpp"
#include "quantlink/channel.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace quantlink::receivers {

using arrangements::SignVector;

/// Fixed analog combiner V followed by one-bit ADCs with thresholds t: w = Q(V y + t).
class OneShotReceiver {
public:
    OneShotReceiver(Eigen::MatrixXd combiner, Eigen::VectorXd thresholds);

    SignVector quantize(const Eigen::VectorXd& y) const;

    const Eigen::MatrixXd& combiner() const noexcept { return combiner_; }
    const Eigen::VectorXd& thresholds() const noexcept { return thresholds_; }
    std::size_t num_adcs() const noexcept { return static_cast<std::size_t>(combiner_.rows()); }

private:
    Eigen::MatrixXd combiner_;
    Eigen::VectorXd thresholds_;
};

SignVector one_shot_quantize(const OneShotReceiver& rx, const Eigen::VectorXd& y);

/// One combiner/threshold pair of a blockwise receiver. The combiner has n_q
/// rows and acts on the l stacked channel outputs of the previous block
/// (l * n_r columns, oldest output first).
struct SlotPair {
    Eigen::MatrixXd combiner;
    Eigen::VectorXd thresholds;
};

/// Hybrid blockwise receiver. Channel uses are grouped into blocks of l; while
/// block m arrives, the outputs of block m-1 are read back from the delay
/// network and quantized once per use with slot pair (use mod l). The first
/// block produces nothing.
class BlockwiseReceiver {
public:
    BlockwiseReceiver(std::size_t receive_antennas, std::vector<SlotPair> slots);

    std::optional<SignVector> step(const Eigen::VectorXd& y);

    std::size_t block_length() const noexcept { return slots_.size(); }
    std::size_t receive_antennas() const noexcept { return n_r_; }
    std::size_t adcs_per_slot() const noexcept { return static_cast<std::size_t>(slots_.front().combiner.rows()); }
    std::uint64_t clock() const noexcept { return clock_; }
    std::size_t buffered() const noexcept { return buffer_.size(); }
    const std::vector<SlotPair>& slots() const noexcept { return slots_; }

    /// All l * n_q hyperplanes as seen from chart coordinates z, where the
    /// stacked block output is chart * z.
    arrangements::Arrangement lifted_arrangement(const Eigen::MatrixXd& chart) const;

    void reset();

private:
    std::size_t n_r_;
    std::vector<SlotPair> slots_;
    std::deque<Eigen::VectorXd> buffer_;
    std::uint64_t clock_ = 0;
};

struct BlockwiseDesign {
    BlockwiseReceiver receiver;
    /// Orthonormal basis (l n_r x l rank) of the noiseless stacked output space.
    Eigen::MatrixXd chart;
    std::uint64_t seed_used = 0;
    /// Region count re-derived by the LP oracle (only when l * n_q <= 22).
    std::optional<std::size_t> verified_regions;
};

/// Draws i.i.d. Gaussian combiners (and thresholds unless zero_threshold) in
/// chart coordinates of the span of the stacked outputs. When l * n_q <= 22
/// the draw is re-counted by the arrangement oracle; a draw that misses the
/// closed-form maximum is discarded and the next seed is tried.
BlockwiseDesign design_blockwise(const channel::ChannelMatrix& h, std::size_t block_length, std::size_t n_q,
                                 bool zero_threshold, std::uint64_t seed);

/// Successive-approximation bits of `sample`:
///   b_1 = Q(sample),  b_i = Q(sample - step * sum_{j<i} 2^{n-j-1} b_j).
/// The bits, read as an offset-binary number with b_1 most significant, index
/// the uniform bin of width `step` containing the sample.
std::vector<std::int8_t> sar_quantize(double sample, unsigned n_bits, double step);

/// Bin index in [0, 2^n) of a SAR bit sequence.
std::uint64_t sar_bin_index(const std::vector<std::int8_t>& bits);

/// Adaptive threshold receiver. A combiner maps y to s streams; stream k owns
/// n_{q,k} one-bit ADCs that quantize each of its samples over n_{q,k}
/// consecutive uses. ADC thresholds are t(i) = A(i) vec(W(i)) where the
/// columns of W(i) are the ADC outputs of the previous max_k n_{q,k} - 1 uses.
class AdaptiveReceiver {
public:
    struct BitGroup {
        std::size_t stream = 0;
        std::uint64_t sample_index = 0;
        std::vector<std::int8_t> bits;
    };

    struct StepOutput {
        /// Output of every ADC this use; 0 for ADCs still idle in the warm-up.
        std::vector<std::int8_t> adc_outputs;
        std::size_t active_adcs = 0;
        /// Samples whose last bit was produced this use.
        std::vector<BitGroup> completed;
    };

    AdaptiveReceiver(Eigen::MatrixXd combiner, std::vector<unsigned> stream_budgets, std::vector<double> steps);

    /// Combiner from the left singular vectors of `h`, one stream per budget entry.
    static AdaptiveReceiver from_channel(const channel::ChannelMatrix& h, std::vector<unsigned> stream_budgets,
                                         std::vector<double> steps);

    StepOutput step(const Eigen::VectorXd& y);

    std::size_t num_streams() const noexcept { return budgets_.size(); }
    std::size_t num_adcs() const noexcept { return n_q_; }
    std::size_t delay_depth() const noexcept { return depth_; }
    const std::vector<unsigned>& stream_budgets() const noexcept { return budgets_; }
    const std::vector<double>& steps() const noexcept { return steps_; }
    const Eigen::MatrixXd& combiner() const noexcept { return combiner_; }
    std::uint64_t clock() const noexcept { return clock_; }

    /// A(i) in effect at the next use.
    const Eigen::MatrixXd& threshold_coefficients() const;
    /// The matrix the SAR recursion generates (time-invariant).
    const Eigen::MatrixXd& sar_coefficients() const noexcept { return sar_coefficients_; }
    /// Replace A(i) by schedule[i mod schedule.size()]. Each matrix must be
    /// n_q x (n_q * delay_depth()). An empty schedule restores the SAR matrix.
    void set_threshold_schedule(std::vector<Eigen::MatrixXd> schedule);

    void reset();

private:
    std::size_t adc_index(std::size_t stream, std::size_t stage) const { return offsets_[stream] + stage; }

    Eigen::MatrixXd combiner_;
    std::vector<unsigned> budgets_;
    std::vector<double> steps_;
    std::vector<std::size_t> offsets_;
    std::size_t n_q_ = 0;
    std::size_t depth_ = 0;
    Eigen::MatrixXd sar_coefficients_;
    std::vector<Eigen::MatrixXd> schedule_;
    // Most recent first; combiner outputs for lags 0..depth and ADC outputs for lags 1..depth.
    std::deque<Eigen::VectorXd> samples_;
    std::deque<std::vector<std::int8_t>> history_;
    std::uint64_t clock_ = 0;
};

// Structured-text (JSON) fixtures for receiver configurations.
nlohmann::json to_json(const OneShotReceiver& rx);
nlohmann::json to_json(const BlockwiseReceiver& rx);
nlohmann::json to_json(const AdaptiveReceiver& rx);
OneShotReceiver one_shot_from_json(const nlohmann::json& j);
BlockwiseReceiver blockwise_from_json(const nlohmann::json& j);
AdaptiveReceiver adaptive_from_json(const nlohmann::json& j);

}  // namespace quantlink::receivers

#endif
