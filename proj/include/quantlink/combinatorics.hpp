// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_COMBINATORICS_HPP
#define QUANTLINK_COMBINATORICS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace quantlink::combinatorics {

using BigInt = boost::multiprecision::cpp_int;

/// Largest hyperplane count for which region counts are produced as exact integers.
inline constexpr std::uint64_t kExactCountLimit = 256;

/// A region-count question: how many cells can `num_hyperplanes` one-bit ADCs
/// carve out of a `dimension`-dimensional output space.
struct RegionCountQuery {
    std::uint64_t num_hyperplanes = 1;
    std::uint64_t dimension = 1;
    bool zero_threshold = false;
};

/// h_b(p) in bits, with 0 log 0 = 0. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Winder's count of the maximum number of cells.
///
/// General thresholds:  sum_{i=0}^{min(d,n)} C(n, i)
/// Zero thresholds:     2 sum_{i=0}^{min(d,n)-1} C(n-1, i)
///
/// Exact for n <= kExactCountLimit; larger n throws std::out_of_range (use
/// log2_max_regions instead).
BigInt max_regions(const RegionCountQuery& query);

/// log2 of max_regions. Exact integer arithmetic up to kExactCountLimit
/// hyperplanes, log-domain summation beyond.
double log2_max_regions(const RegionCountQuery& query);

/// log2 C(n, k) through the log-gamma function.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// Stirling asymptote of log2 C(n, lambda n) without its additive O(1) constant:
///   n h_b(lambda) - 1/2 log2 n - 1/2 log2(2 pi lambda (1 - lambda)).
/// lambda must lie strictly inside the finite-n admissibility window
///   1/2 (1 - sqrt(1 - 1/(3n))) < lambda < 1/2 (1 + sqrt(1 - 4/(12n + 1))),
/// otherwise std::domain_error.
double log_binomial_asymptotic(std::uint64_t n, double lambda);

/// log2 sum_{i=0}^{k} C(n, i), accumulated as a max-shifted log-sum.
double log_partial_binomial_sum(std::uint64_t n, std::uint64_t k);

/// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& value);

/// Exact sum_{i=0}^{k} C(n, i).
BigInt partial_binomial_sum(std::uint64_t n, std::uint64_t k);

}  // namespace quantlink::combinatorics

#endif
