// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/receivers.hpp"

#include "quantlink/combinatorics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace quantlink::receivers {

namespace {

SignVector affine_signs(const Eigen::MatrixXd& v, const Eigen::VectorXd& t, const Eigen::VectorXd& x)
{
    const Eigen::VectorXd r = v * x + t;
    std::vector<std::int8_t> s(static_cast<std::size_t>(r.size()));
    for (Eigen::Index i = 0; i < r.size(); ++i)
        s[static_cast<std::size_t>(i)] = arrangements::quantize_sign(r(i));
    return SignVector(std::move(s));
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m)
{
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j)
{
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw std::invalid_argument("receiver fixture: matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw std::invalid_argument("receiver fixture: ragged matrix");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

OneShotReceiver::OneShotReceiver(Eigen::MatrixXd combiner, Eigen::VectorXd thresholds)
    : combiner_(std::move(combiner)), thresholds_(std::move(thresholds))
{
    if (combiner_.rows() < 1 || combiner_.cols() < 1)
        throw std::invalid_argument("OneShotReceiver: empty combiner");
    if (combiner_.rows() != thresholds_.size())
        throw std::invalid_argument("OneShotReceiver: threshold count differs from combiner rows");
}

SignVector OneShotReceiver::quantize(const Eigen::VectorXd& y) const
{
    if (y.size() != combiner_.cols())
        throw std::invalid_argument("OneShotReceiver::quantize: input length does not match combiner");
    return affine_signs(combiner_, thresholds_, y);
}

SignVector one_shot_quantize(const OneShotReceiver& rx, const Eigen::VectorXd& y)
{
    return rx.quantize(y);
}

BlockwiseReceiver::BlockwiseReceiver(std::size_t receive_antennas, std::vector<SlotPair> slots)
    : n_r_(receive_antennas), slots_(std::move(slots))
{
    if (n_r_ < 1)
        throw std::invalid_argument("BlockwiseReceiver: receive antennas must be positive");
    if (slots_.empty())
        throw std::invalid_argument("BlockwiseReceiver: block length must be positive");
    const auto width = static_cast<Eigen::Index>(slots_.size() * n_r_);
    const auto n_q = slots_.front().combiner.rows();
    if (n_q < 1)
        throw std::invalid_argument("BlockwiseReceiver: slots need at least one ADC");
    for (const auto& s : slots_) {
        if (s.combiner.rows() != n_q || s.combiner.cols() != width)
            throw std::invalid_argument("BlockwiseReceiver: every slot combiner must be n_q x (l * n_r)");
        if (s.thresholds.size() != n_q)
            throw std::invalid_argument("BlockwiseReceiver: threshold count differs from combiner rows");
    }
}

std::optional<SignVector> BlockwiseReceiver::step(const Eigen::VectorXd& y)
{
    if (static_cast<std::size_t>(y.size()) != n_r_)
        throw std::invalid_argument("BlockwiseReceiver::step: input length does not match receive antennas");
    const std::size_t l = slots_.size();
    const std::size_t slot = static_cast<std::size_t>(clock_ % l);
    // At the start of a block, drop the block before the previous one.
    if (slot == 0 && buffer_.size() == 2 * l)
        buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(l));
    buffer_.push_back(y);
    ++clock_;
    if (clock_ <= l)
        return std::nullopt;

    Eigen::VectorXd stacked(static_cast<Eigen::Index>(l * n_r_));
    const auto nr = static_cast<Eigen::Index>(n_r_);
    for (std::size_t k = 0; k < l; ++k)
        stacked.segment(static_cast<Eigen::Index>(k) * nr, nr) = buffer_[k];
    return affine_signs(slots_[slot].combiner, slots_[slot].thresholds, stacked);
}

arrangements::Arrangement BlockwiseReceiver::lifted_arrangement(const Eigen::MatrixXd& chart) const
{
    const auto width = static_cast<Eigen::Index>(slots_.size() * n_r_);
    if (chart.rows() != width)
        throw std::invalid_argument("lifted_arrangement: chart rows must equal l * n_r");
    const auto n_q = slots_.front().combiner.rows();
    const auto l = static_cast<Eigen::Index>(slots_.size());
    Eigen::MatrixXd normals(n_q * l, chart.cols());
    Eigen::VectorXd offsets(n_q * l);
    for (Eigen::Index s = 0; s < l; ++s) {
        const auto& pair = slots_[static_cast<std::size_t>(s)];
        normals.middleRows(s * n_q, n_q) = pair.combiner * chart;
        offsets.segment(s * n_q, n_q) = pair.thresholds;
    }
    return arrangements::Arrangement::from_matrix(normals, offsets);
}

void BlockwiseReceiver::reset()
{
    buffer_.clear();
    clock_ = 0;
}

BlockwiseDesign design_blockwise(const channel::ChannelMatrix& h, std::size_t block_length, std::size_t n_q,
                                 bool zero_threshold, std::uint64_t seed)
{
    if (block_length < 1 || n_q < 1)
        throw std::invalid_argument("design_blockwise: block length and n_q must be positive");
    const auto l = static_cast<Eigen::Index>(block_length);
    const auto nq = static_cast<Eigen::Index>(n_q);
    const auto nr = static_cast<Eigen::Index>(h.receive_antennas());
    const Eigen::MatrixXd basis = h.left_basis();
    const auto s = basis.cols();
    if (s < 1)
        throw std::invalid_argument("design_blockwise: channel has rank zero");

    Eigen::MatrixXd chart = Eigen::MatrixXd::Zero(l * nr, l * s);
    for (Eigen::Index k = 0; k < l; ++k)
        chart.block(k * nr, k * s, nr, s) = basis;

    const std::size_t total = block_length * n_q;
    const bool verify = total <= arrangements::kMaxEnumerationSize;
    std::size_t expected = 0;
    if (verify) {
        const combinatorics::RegionCountQuery q{total, static_cast<std::uint64_t>(l * s), zero_threshold};
        expected = combinatorics::max_regions(q).convert_to<std::size_t>();
    }

    constexpr int kMaxAttempts = 32;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const std::uint64_t current = seed + static_cast<std::uint64_t>(attempt);
        std::mt19937_64 rng(current);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd g(l * nq, l * s);
        Eigen::VectorXd t = Eigen::VectorXd::Zero(l * nq);
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                g(i, j) = normal(rng);
            if (!zero_threshold)
                t(i) = normal(rng);
        }
        const Eigen::MatrixXd full = g * chart.transpose();
        std::vector<SlotPair> slots;
        slots.reserve(block_length);
        for (Eigen::Index k = 0; k < l; ++k)
            slots.push_back(SlotPair{full.middleRows(k * nq, nq), t.segment(k * nq, nq)});
        BlockwiseReceiver rx(h.receive_antennas(), std::move(slots));

        if (!verify)
            return BlockwiseDesign{std::move(rx), std::move(chart), current, std::nullopt};
        const auto count = arrangements::enumerate_regions(rx.lifted_arrangement(chart)).size();
        if (count == expected)
            return BlockwiseDesign{std::move(rx), std::move(chart), current, count};
    }
    throw std::runtime_error("design_blockwise: no draw reached the maximum region count after " +
                             std::to_string(kMaxAttempts) + " seeds");
}

std::vector<std::int8_t> sar_quantize(double sample, unsigned n_bits, double step)
{
    if (n_bits < 1 || n_bits > 62)
        throw std::invalid_argument("sar_quantize: n_bits must be in [1, 62]");
    if (!(step > 0.0))
        throw std::invalid_argument("sar_quantize: step must be positive");
    std::vector<std::int8_t> bits(n_bits);
    double acc = 0.0;
    for (unsigned i = 0; i < n_bits; ++i) {
        bits[i] = arrangements::quantize_sign(sample - step * acc);
        acc += std::ldexp(static_cast<double>(bits[i]), static_cast<int>(n_bits - i) - 2);
    }
    return bits;
}

std::uint64_t sar_bin_index(const std::vector<std::int8_t>& bits)
{
    if (bits.empty() || bits.size() > 63)
        throw std::invalid_argument("sar_bin_index: between 1 and 63 bits");
    std::uint64_t index = 0;
    for (auto b : bits)
        index = (index << 1) | (b > 0 ? 1U : 0U);
    return index;
}

AdaptiveReceiver::AdaptiveReceiver(Eigen::MatrixXd combiner, std::vector<unsigned> stream_budgets,
                                   std::vector<double> steps)
    : combiner_(std::move(combiner)), budgets_(std::move(stream_budgets)), steps_(std::move(steps))
{
    const std::size_t s = budgets_.size();
    if (s < 1 || static_cast<std::size_t>(combiner_.rows()) != s)
        throw std::invalid_argument("AdaptiveReceiver: combiner needs one row per stream budget");
    if (steps_.size() != s)
        throw std::invalid_argument("AdaptiveReceiver: one SAR step per stream");
    unsigned deepest = 0;
    for (std::size_t k = 0; k < s; ++k) {
        if (budgets_[k] < 1 || budgets_[k] > 62)
            throw std::invalid_argument("AdaptiveReceiver: stream budgets must be in [1, 62]");
        if (!(steps_[k] > 0.0))
            throw std::invalid_argument("AdaptiveReceiver: SAR steps must be positive");
        offsets_.push_back(n_q_);
        n_q_ += budgets_[k];
        deepest = std::max(deepest, budgets_[k]);
    }
    depth_ = deepest - 1;

    const auto nq = static_cast<Eigen::Index>(n_q_);
    sar_coefficients_ = Eigen::MatrixXd::Zero(nq, nq * static_cast<Eigen::Index>(depth_));
    for (std::size_t k = 0; k < s; ++k) {
        const int n = static_cast<int>(budgets_[k]);
        for (int j = 1; j < n; ++j) {
            for (int m = 0; m < j; ++m) {
                const auto lag = static_cast<Eigen::Index>(j - m);
                const auto col = (lag - 1) * nq + static_cast<Eigen::Index>(adc_index(k, static_cast<std::size_t>(m)));
                sar_coefficients_(static_cast<Eigen::Index>(adc_index(k, static_cast<std::size_t>(j))), col) =
                    -steps_[k] * std::ldexp(1.0, n - m - 2);
            }
        }
    }
}

AdaptiveReceiver AdaptiveReceiver::from_channel(const channel::ChannelMatrix& h, std::vector<unsigned> stream_budgets,
                                                std::vector<double> steps)
{
    const auto s = static_cast<Eigen::Index>(stream_budgets.size());
    if (s < 1 || s > static_cast<Eigen::Index>(h.rank()))
        throw std::invalid_argument("AdaptiveReceiver::from_channel: stream count must be in [1, rank(H)]");
    Eigen::MatrixXd combiner = h.left_basis().leftCols(s).transpose();
    return AdaptiveReceiver(std::move(combiner), std::move(stream_budgets), std::move(steps));
}

const Eigen::MatrixXd& AdaptiveReceiver::threshold_coefficients() const
{
    if (schedule_.empty())
        return sar_coefficients_;
    return schedule_[static_cast<std::size_t>(clock_ % schedule_.size())];
}

void AdaptiveReceiver::set_threshold_schedule(std::vector<Eigen::MatrixXd> schedule)
{
    const auto nq = static_cast<Eigen::Index>(n_q_);
    for (const auto& a : schedule)
        if (a.rows() != nq || a.cols() != nq * static_cast<Eigen::Index>(depth_))
            throw std::invalid_argument("set_threshold_schedule: matrices must be n_q x (n_q * delay_depth)");
    schedule_ = std::move(schedule);
}

AdaptiveReceiver::StepOutput AdaptiveReceiver::step(const Eigen::VectorXd& y)
{
    if (y.size() != combiner_.cols())
        throw std::invalid_argument("AdaptiveReceiver::step: input length does not match combiner");
    samples_.push_front(combiner_ * y);
    if (samples_.size() > depth_ + 1)
        samples_.pop_back();

    const auto nq = static_cast<Eigen::Index>(n_q_);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(nq * static_cast<Eigen::Index>(depth_));
    for (std::size_t lag = 1; lag <= history_.size(); ++lag)
        for (std::size_t a = 0; a < n_q_; ++a)
            w(static_cast<Eigen::Index>(lag - 1) * nq + static_cast<Eigen::Index>(a)) = history_[lag - 1][a];
    const Eigen::VectorXd t = threshold_coefficients() * w;

    StepOutput out;
    out.adc_outputs.assign(n_q_, 0);
    for (std::size_t k = 0; k < budgets_.size(); ++k) {
        for (std::size_t j = 0; j < budgets_[k]; ++j) {
            if (clock_ < j)
                continue;
            const auto a = adc_index(k, j);
            const double input = samples_[j](static_cast<Eigen::Index>(k));
            out.adc_outputs[a] = arrangements::quantize_sign(input + t(static_cast<Eigen::Index>(a)));
            ++out.active_adcs;
        }
        const std::size_t last = budgets_[k] - 1;
        if (clock_ >= last) {
            BitGroup g;
            g.stream = k;
            g.sample_index = clock_ - last;
            g.bits.resize(budgets_[k]);
            for (std::size_t m = 0; m < budgets_[k]; ++m) {
                const std::size_t lag = last - m;
                g.bits[m] = lag == 0 ? out.adc_outputs[adc_index(k, m)] : history_[lag - 1][adc_index(k, m)];
            }
            out.completed.push_back(std::move(g));
        }
    }

    if (depth_ > 0) {
        history_.push_front(out.adc_outputs);
        if (history_.size() > depth_)
            history_.pop_back();
    }
    ++clock_;
    return out;
}

void AdaptiveReceiver::reset()
{
    samples_.clear();
    history_.clear();
    clock_ = 0;
}

nlohmann::json to_json(const OneShotReceiver& rx)
{
    return {{"type", "one_shot"}, {"combiner", matrix_to_json(rx.combiner())},
            {"thresholds", vector_to_json(rx.thresholds())}};
}

nlohmann::json to_json(const BlockwiseReceiver& rx)
{
    auto slots = nlohmann::json::array();
    for (const auto& s : rx.slots())
        slots.push_back({{"combiner", matrix_to_json(s.combiner)}, {"thresholds", vector_to_json(s.thresholds)}});
    return {{"type", "blockwise"}, {"receive_antennas", rx.receive_antennas()}, {"slots", std::move(slots)}};
}

nlohmann::json to_json(const AdaptiveReceiver& rx)
{
    return {{"type", "adaptive"}, {"combiner", matrix_to_json(rx.combiner())},
            {"stream_budgets", rx.stream_budgets()}, {"steps", rx.steps()}};
}

OneShotReceiver one_shot_from_json(const nlohmann::json& j)
{
    if (j.at("type") != "one_shot")
        throw std::invalid_argument("one_shot_from_json: wrong receiver type");
    return OneShotReceiver(matrix_from_json(j.at("combiner")), vector_from_json(j.at("thresholds")));
}

BlockwiseReceiver blockwise_from_json(const nlohmann::json& j)
{
    if (j.at("type") != "blockwise")
        throw std::invalid_argument("blockwise_from_json: wrong receiver type");
    std::vector<SlotPair> slots;
    for (const auto& s : j.at("slots"))
        slots.push_back(SlotPair{matrix_from_json(s.at("combiner")), vector_from_json(s.at("thresholds"))});
    return BlockwiseReceiver(j.at("receive_antennas").get<std::size_t>(), std::move(slots));
}

AdaptiveReceiver adaptive_from_json(const nlohmann::json& j)
{
    if (j.at("type") != "adaptive")
        throw std::invalid_argument("adaptive_from_json: wrong receiver type");
    return AdaptiveReceiver(matrix_from_json(j.at("combiner")), j.at("stream_budgets").get<std::vector<unsigned>>(),
                            j.at("steps").get<std::vector<double>>());
}

}  // namespace quantlink::receivers
