// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/arrangements.hpp"

#include "quantlink/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace quantlink::arrangements {

namespace {

// Rows carry unit normals, so pivots smaller than this are rounding noise.
constexpr double kPivotTolerance = 1e-9;

}  // namespace

Hyperplane::Hyperplane(Eigen::VectorXd normal, double offset) : normal_(std::move(normal)), offset_(offset)
{
    if (normal_.size() == 0 || normal_.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("Hyperplane: normal must have a nonzero entry");
    if (!normal_.allFinite() || !std::isfinite(offset_))
        throw std::invalid_argument("Hyperplane: non-finite coefficients");
}

Arrangement::Arrangement(std::vector<Hyperplane> hyperplanes, std::size_t dimension)
    : hyperplanes_(std::move(hyperplanes)), dimension_(dimension)
{
    if (dimension_ < 1)
        throw std::invalid_argument("Arrangement: dimension must be positive");
    if (hyperplanes_.empty())
        throw std::invalid_argument("Arrangement: needs at least one hyperplane");
    for (const auto& h : hyperplanes_)
        if (h.dimension() != dimension_)
            throw std::invalid_argument("Arrangement: normal length does not match dimension");
}

Arrangement Arrangement::from_matrix(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets)
{
    if (normals.rows() != offsets.size())
        throw std::invalid_argument("Arrangement::from_matrix: row count differs from offset count");
    std::vector<Hyperplane> planes;
    planes.reserve(static_cast<std::size_t>(normals.rows()));
    for (Eigen::Index i = 0; i < normals.rows(); ++i)
        planes.emplace_back(normals.row(i).transpose(), offsets(i));
    return Arrangement(std::move(planes), static_cast<std::size_t>(normals.cols()));
}

Arrangement Arrangement::stacked(const Arrangement& other) const
{
    std::vector<Hyperplane> planes = hyperplanes_;
    planes.insert(planes.end(), other.hyperplanes_.begin(), other.hyperplanes_.end());
    return Arrangement(std::move(planes), dimension_);
}

SignVector::SignVector(std::vector<std::int8_t> signs) : signs_(std::move(signs))
{
    for (auto s : signs_)
        if (s != 1 && s != -1)
            throw std::invalid_argument("SignVector: entries must be -1 or +1");
}

SignVector SignVector::from_mask(std::uint64_t mask, std::size_t length)
{
    if (length > 64)
        throw std::length_error("SignVector::from_mask: at most 64 entries");
    std::vector<std::int8_t> s(length);
    for (std::size_t i = 0; i < length; ++i)
        s[i] = ((mask >> i) & 1U) ? 1 : -1;
    return SignVector(std::move(s));
}

std::uint64_t SignVector::mask() const
{
    if (signs_.size() > 64)
        throw std::length_error("SignVector::mask: at most 64 entries");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < signs_.size(); ++i)
        if (signs_[i] > 0)
            m |= std::uint64_t{1} << i;
    return m;
}

SignVector SignVector::negated() const
{
    auto s = signs_;
    for (auto& v : s)
        v = static_cast<std::int8_t>(-v);
    return SignVector(std::move(s));
}

SignVector SignVector::concatenated(const SignVector& tail) const
{
    auto s = signs_;
    s.insert(s.end(), tail.signs_.begin(), tail.signs_.end());
    return SignVector(std::move(s));
}

SignVector sign_vector(const Arrangement& arrangement, const Eigen::VectorXd& point)
{
    if (static_cast<std::size_t>(point.size()) != arrangement.dimension())
        throw std::invalid_argument("sign_vector: point dimension does not match arrangement");
    std::vector<std::int8_t> s(arrangement.size());
    for (std::size_t i = 0; i < arrangement.size(); ++i)
        s[i] = quantize_sign(arrangement[i].evaluate(point));
    return SignVector(std::move(s));
}

namespace {

// Largest absolute coordinate over all vertices (intersections of d hyperplanes).
double max_vertex_coordinate(const Arrangement& a)
{
    const std::size_t n = a.size();
    const std::size_t d = a.dimension();
    if (d > n)
        return 0.0;
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i)
        idx[i] = i;
    double worst = 0.0;
    Eigen::MatrixXd m(d, d);
    Eigen::VectorXd rhs(d);
    while (true) {
        for (std::size_t r = 0; r < d; ++r) {
            m.row(static_cast<Eigen::Index>(r)) = a[idx[r]].normal().transpose();
            rhs(static_cast<Eigen::Index>(r)) = -a[idx[r]].offset();
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        if (lu.isInvertible()) {
            const Eigen::VectorXd v = lu.solve(rhs);
            if (v.allFinite())
                worst = std::max(worst, v.cwiseAbs().maxCoeff());
        }
        // next combination
        std::size_t k = d;
        while (k > 0 && idx[k - 1] == n - d + (k - 1))
            --k;
        if (k == 0)
            break;
        ++idx[k - 1];
        for (std::size_t j = k; j < d; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return worst;
}

}  // namespace

double default_bound(const Arrangement& a)
{
    double max_offset = 0.0;
    double min_norm = std::numeric_limits<double>::infinity();
    for (const auto& h : a.hyperplanes()) {
        max_offset = std::max(max_offset, std::abs(h.offset()));
        min_norm = std::min(min_norm, h.normal().norm());
    }
    const double heuristic = 1e3 * (max_offset / min_norm + 1.0);
    const double vertex = 10.0 * (max_vertex_coordinate(a) + 1.0);
    return std::max(heuristic, vertex);
}

std::optional<Eigen::VectorXd> find_witness(const Arrangement& a, const SignVector& signs, double bound)
{
    if (signs.size() != a.size())
        throw std::invalid_argument("find_witness: sign vector length does not match arrangement");
    if (!(bound > 0.0))
        throw std::invalid_argument("find_witness: bound must be positive");

    // Variables: z = p - q with 0 <= p, q <= bound, and the margin e (0 <= e <= 1).
    // Each row s_i (n_i . z + t_i) >= e is written with unit-length n_i so that
    // e is a Euclidean distance to the hyperplane.
    const auto n = static_cast<Eigen::Index>(a.size());
    const auto d = static_cast<Eigen::Index>(a.dimension());
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n + 2 * d + 1, 2 * d + 1);
    Eigen::VectorXd rhs(n + 2 * d + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& h = a[static_cast<std::size_t>(i)];
        const double scale = 1.0 / h.normal().norm();
        const double s = signs[static_cast<std::size_t>(i)];
        const Eigen::VectorXd unit = h.normal() * scale;
        lhs.row(i).head(d) = -s * unit.transpose();
        lhs.row(i).segment(d, d) = s * unit.transpose();
        lhs(i, 2 * d) = 1.0;
        rhs(i) = s * h.offset() * scale;
    }
    for (Eigen::Index j = 0; j < 2 * d; ++j) {
        lhs(n + j, j) = 1.0;
        rhs(n + j) = bound;
    }
    lhs(n + 2 * d, 2 * d) = 1.0;
    rhs(n + 2 * d) = 1.0;
    Eigen::VectorXd objective = Eigen::VectorXd::Zero(2 * d + 1);
    objective(2 * d) = 1.0;

    const auto sol = lp::maximize(lhs, rhs, objective, kPivotTolerance);
    switch (sol.status) {
    case lp::LpStatus::infeasible:
        return std::nullopt;
    case lp::LpStatus::optimal:
        if (sol.objective <= kMinMargin)
            return std::nullopt;
        {
            // Accept only a point that realizes the signs when re-evaluated directly.
            Eigen::VectorXd z = sol.x.head(d) - sol.x.segment(d, d);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto& h = a[static_cast<std::size_t>(i)];
                if (signs[static_cast<std::size_t>(i)] * h.evaluate(z) / h.normal().norm() <= kMinMargin)
                    return std::nullopt;
            }
            return z;
        }
    case lp::LpStatus::unbounded:
        throw lp::SolverError("find_witness: bounded LP reported unbounded");
    case lp::LpStatus::iteration_limit:
        break;
    }
    throw lp::SolverError("find_witness: simplex did not converge");
}

bool feasible(const Arrangement& a, const SignVector& signs, double bound)
{
    return find_witness(a, signs, bound).has_value();
}

std::set<SignVector> enumerate_regions(const Arrangement& a, double bound)
{
    const std::size_t n = a.size();
    if (n > kMaxEnumerationSize)
        throw std::length_error("enumerate_regions: more than 22 hyperplanes; use the closed-form count");
    const std::uint64_t total = std::uint64_t{1} << n;

    auto scan = [&](std::uint64_t first, std::uint64_t last) {
        std::vector<std::uint64_t> hits;
        for (std::uint64_t mask = first; mask < last; ++mask)
            if (feasible(a, SignVector::from_mask(mask, n), bound))
                hits.push_back(mask);
        return hits;
    };

    const std::uint64_t workers =
        total < 4096 ? 1 : std::max<std::uint64_t>(1, std::thread::hardware_concurrency());
    std::vector<std::future<std::vector<std::uint64_t>>> parts;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t first = w * chunk;
        const std::uint64_t last = std::min(total, first + chunk);
        if (first >= last)
            break;
        parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, scan, first, last));
    }
    std::set<SignVector> regions;
    for (auto& part : parts)
        for (auto mask : part.get())
            regions.insert(SignVector::from_mask(mask, n));
    return regions;
}

std::set<SignVector> enumerate_regions(const Arrangement& a)
{
    return enumerate_regions(a, default_bound(a));
}

Arrangement random_general_position(std::size_t count, std::size_t dimension, bool zero_threshold,
                                    std::uint64_t seed)
{
    if (count < 1 || dimension < 1)
        throw std::invalid_argument("random_general_position: count and dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd normals(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dimension));
    Eigen::VectorXd offsets = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < normals.rows(); ++i) {
        for (Eigen::Index j = 0; j < normals.cols(); ++j)
            normals(i, j) = normal(rng);
        if (!zero_threshold)
            offsets(i) = normal(rng);
    }
    return Arrangement::from_matrix(normals, offsets);
}

}  // namespace quantlink::arrangements
