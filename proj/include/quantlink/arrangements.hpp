// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_ARRANGEMENTS_HPP
#define QUANTLINK_ARRANGEMENTS_HPP

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace quantlink::arrangements {

/// The affine form normal . z + offset; its zero set is one ADC's slicing hyperplane.
class Hyperplane {
public:
    Hyperplane(Eigen::VectorXd normal, double offset);

    const Eigen::VectorXd& normal() const noexcept { return normal_; }
    double offset() const noexcept { return offset_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(normal_.size()); }
    double evaluate(const Eigen::VectorXd& point) const { return normal_.dot(point) + offset_; }

private:
    Eigen::VectorXd normal_;
    double offset_;
};

class Arrangement {
public:
    Arrangement(std::vector<Hyperplane> hyperplanes, std::size_t dimension);

    /// Rows of `normals` paired with `offsets`.
    static Arrangement from_matrix(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets);

    std::size_t size() const noexcept { return hyperplanes_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    const Hyperplane& operator[](std::size_t i) const { return hyperplanes_[i]; }
    const std::vector<Hyperplane>& hyperplanes() const noexcept { return hyperplanes_; }

    /// Hyperplanes of `this` followed by those of `other` (same dimension).
    Arrangement stacked(const Arrangement& other) const;

private:
    std::vector<Hyperplane> hyperplanes_;
    std::size_t dimension_;
};

/// Digitized ADC outputs, one entry in {-1, +1} per hyperplane.
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::vector<std::int8_t> signs);

    /// Bit i of `mask` set means entry i is +1.
    static SignVector from_mask(std::uint64_t mask, std::size_t length);

    std::size_t size() const noexcept { return signs_.size(); }
    std::int8_t operator[](std::size_t i) const { return signs_[i]; }
    std::span<const std::int8_t> signs() const noexcept { return signs_; }
    std::uint64_t mask() const;
    SignVector negated() const;
    SignVector concatenated(const SignVector& tail) const;

    auto operator<=>(const SignVector&) const = default;

private:
    std::vector<std::int8_t> signs_;
};

/// Q(0) = +1 tie convention.
inline std::int8_t quantize_sign(double value) noexcept { return value >= 0.0 ? 1 : -1; }

SignVector sign_vector(const Arrangement& arrangement, const Eigen::VectorXd& point);

/// Smallest margin accepted as a strictly interior witness.
inline constexpr double kMinMargin = 1e-9;

/// Box half-width B used by the oracle: the larger of
///   1e3 * (max |offset| / min ||normal|| + 1)
/// and ten times (largest vertex coordinate + 1), so every cell of the
/// arrangement reaches into the box.
double default_bound(const Arrangement& arrangement);

/// A point z with ||z||_inf <= bound realizing `signs` with margin above
/// kMinMargin, found by maximizing the margin with a small LP. Empty when no
/// such point exists. Throws lp::SolverError if the simplex stalls.
std::optional<Eigen::VectorXd> find_witness(const Arrangement& arrangement, const SignVector& signs,
                                            double bound);

bool feasible(const Arrangement& arrangement, const SignVector& signs, double bound);

inline constexpr std::size_t kMaxEnumerationSize = 22;

/// Every sign vector realized inside the box, by testing all 2^n candidates.
/// Throws std::length_error when the arrangement has more than 22 hyperplanes.
std::set<SignVector> enumerate_regions(const Arrangement& arrangement, double bound);
std::set<SignVector> enumerate_regions(const Arrangement& arrangement);

/// i.i.d. standard normal normals (and offsets unless zero_threshold) from a seeded generator.
Arrangement random_general_position(std::size_t count, std::size_t dimension, bool zero_threshold,
                                    std::uint64_t seed);

}  // namespace quantlink::arrangements

#endif
