// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace quantlink::channel {

namespace {

// Hestenes Jacobi on a tall matrix (rows >= cols).
SvdResult jacobi_tall(const Eigen::MatrixXd& a)
{
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    Eigen::MatrixXd u = a;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    constexpr double kEps = 1e-15;
    constexpr int kMaxSweeps = 80;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double alpha = u.col(p).squaredNorm();
                const double beta = u.col(q).squaredNorm();
                const double gamma = u.col(p).dot(u.col(q));
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double up = u(i, p);
                    const double uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated)
            break;
    }

    Eigen::VectorXd sigma(n);
    for (Eigen::Index j = 0; j < n; ++j)
        sigma(j) = u.col(j).norm();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sigma(x) > sigma(y); });

    SvdResult out;
    out.u.resize(m, n);
    out.v.resize(n, n);
    out.singular_values.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto j = order[static_cast<std::size_t>(k)];
        out.singular_values(k) = sigma(j);
        out.v.col(k) = v.col(j);
        if (sigma(j) > 0.0)
            out.u.col(k) = u.col(j) / sigma(j);
        else
            out.u.col(k).setZero();
    }
    return out;
}

}  // namespace

SvdResult jacobi_svd(const Eigen::MatrixXd& a)
{
    if (a.size() == 0)
        throw std::invalid_argument("jacobi_svd: empty matrix");
    if (a.rows() >= a.cols())
        return jacobi_tall(a);
    SvdResult t = jacobi_tall(a.transpose());
    return SvdResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

ChannelMatrix::ChannelMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries))
{
    if (entries_.rows() < 1 || entries_.cols() < 1)
        throw std::invalid_argument("ChannelMatrix: dimensions must be positive");
    if (!entries_.allFinite())
        throw std::invalid_argument("ChannelMatrix: non-finite entries");
    svd_ = jacobi_svd(entries_);
    const auto& s = svd_.singular_values;
    const double cutoff = s.size() > 0 ? kRankTolerance * s(0) : 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > cutoff && s(k) > 0.0)
            ++rank_;
}

std::vector<double> ChannelMatrix::singular_values() const
{
    const auto& s = svd_.singular_values;
    return {s.data(), s.data() + rank_};
}

ChannelMatrix rayleigh_sample(std::size_t n_r, std::size_t n_t, std::mt19937_64& rng)
{
    if (n_r < 1 || n_t < 1)
        throw std::invalid_argument("rayleigh_sample: dimensions must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd h(static_cast<Eigen::Index>(n_r), static_cast<Eigen::Index>(n_t));
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            h(i, j) = normal(rng);
    return ChannelMatrix(std::move(h));
}

ChannelMatrix rayleigh_sample(std::size_t n_r, std::size_t n_t, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return rayleigh_sample(n_r, n_t, rng);
}

PowerAllocation waterfill(std::span<const double> singular_values, double total_power)
{
    if (singular_values.empty())
        throw std::invalid_argument("waterfill: empty singular-value list");
    if (!(total_power > 0.0))
        throw std::invalid_argument("waterfill: total power must be positive");
    for (double s : singular_values)
        if (!(s > 0.0))
            throw std::invalid_argument("waterfill: singular values must be positive");

    // Closed form: sort the noise floors 1/sigma^2 and grow the active set
    // while the water level stays above the next floor.
    std::vector<double> floors(singular_values.size());
    std::transform(singular_values.begin(), singular_values.end(), floors.begin(),
                   [](double s) { return 1.0 / (s * s); });
    std::vector<double> sorted = floors;
    std::sort(sorted.begin(), sorted.end());
    double level = 0.0;
    double prefix = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        prefix += sorted[k];
        const double candidate = (total_power + prefix) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || candidate <= sorted[k + 1]) {
            level = candidate;
            break;
        }
    }

    PowerAllocation out;
    out.total_budget = total_power;
    out.water_level = level;
    out.per_stream_power.resize(floors.size());
    for (std::size_t k = 0; k < floors.size(); ++k)
        out.per_stream_power[k] = std::max(0.0, level - floors[k]);
    return out;
}

double shannon_capacity(const ChannelMatrix& h, double total_power)
{
    if (!(total_power > 0.0))
        throw std::invalid_argument("shannon_capacity: power must be positive");
    const auto sigma = h.singular_values();
    if (sigma.empty())
        return 0.0;
    const auto alloc = waterfill(sigma, total_power);
    double c = 0.0;
    for (std::size_t k = 0; k < sigma.size(); ++k)
        c += std::log2(1.0 + sigma[k] * sigma[k] * alloc.per_stream_power[k]);
    return c;
}

double truncated_capacity(const ChannelMatrix& h, double total_power, std::size_t n_q)
{
    if (n_q < 1)
        throw std::invalid_argument("truncated_capacity: n_q must be positive");
    return std::min(static_cast<double>(n_q), shannon_capacity(h, total_power));
}

ChannelMatrix kron_block(const ChannelMatrix& h, std::size_t block_length)
{
    if (block_length < 1)
        throw std::invalid_argument("kron_block: block length must be positive");
    const auto& e = h.entries();
    const auto l = static_cast<Eigen::Index>(block_length);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(e.rows() * l, e.cols() * l);
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            for (Eigen::Index k = 0; k < l; ++k)
                out(i * l + k, j * l + k) = e(i, j);
    return ChannelMatrix(std::move(out));
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m)
{
    os << m.rows() << ' ' << m.cols() << '\n';
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << m(i, j);
        os << '\n';
    }
}

Eigen::MatrixXd read_matrix(std::istream& is)
{
    long rows = 0;
    long cols = 0;
    if (!(is >> rows >> cols) || rows < 1 || cols < 1)
        throw std::runtime_error("read_matrix: malformed header, expected \"n_r n_t\"");
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            if (!(is >> m(i, j)))
                throw std::runtime_error("read_matrix: truncated matrix body");
    return m;
}

}  // namespace quantlink::channel
