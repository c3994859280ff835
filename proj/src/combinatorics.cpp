// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace quantlink::combinatorics {

namespace {

double log_gamma(double x)
{
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);  // reentrant; std::lgamma writes signgam
#else
    return std::lgamma(x);
#endif
}

// Natural log of C(n, k).
double ln_binomial(std::uint64_t n, std::uint64_t k)
{
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0);
}

void check_query(const RegionCountQuery& q)
{
    if (q.num_hyperplanes < 1 || q.dimension < 1)
        throw std::invalid_argument("region count query needs num_hyperplanes >= 1 and dimension >= 1");
}

}  // namespace

double binary_entropy(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    double h = 0.0;
    if (p > 0.0)
        h -= p * std::log2(p);
    if (p < 1.0)
        h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

BigInt partial_binomial_sum(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        throw std::domain_error("partial_binomial_sum: k must lie in [0, n]");
    BigInt term = 1;
    BigInt sum = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        term *= (n - i + 1);
        term /= i;
        sum += term;
    }
    return sum;
}

BigInt max_regions(const RegionCountQuery& q)
{
    check_query(q);
    const auto n = q.num_hyperplanes;
    if (n > kExactCountLimit)
        throw std::out_of_range("max_regions: exact counts are limited to " + std::to_string(kExactCountLimit) +
                                " hyperplanes; use log2_max_regions");
    const auto top = std::min(q.dimension, n);
    if (!q.zero_threshold)
        return partial_binomial_sum(n, top);
    return 2 * partial_binomial_sum(n - 1, top - 1);
}

double log2_big(const BigInt& value)
{
    if (value <= 0)
        throw std::domain_error("log2_big: value must be positive");
    const auto msb = boost::multiprecision::msb(value);
    if (msb < 63)
        return std::log2(value.convert_to<double>());
    // Keep the leading 63 bits as the mantissa.
    const unsigned shift = static_cast<unsigned>(msb) - 62;
    const BigInt top = value >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

double log2_max_regions(const RegionCountQuery& q)
{
    check_query(q);
    const auto n = q.num_hyperplanes;
    if (n <= kExactCountLimit)
        return log2_big(max_regions(q));
    const auto top = std::min(q.dimension, n);
    if (!q.zero_threshold)
        return log_partial_binomial_sum(n, top);
    return 1.0 + log_partial_binomial_sum(n - 1, top - 1);
}

double log_binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        throw std::domain_error("log_binomial: k must lie in [0, n]");
    if (k == 0 || k == n)
        return 0.0;
    return ln_binomial(n, k) / std::numbers::ln2;
}

double log_binomial_asymptotic(std::uint64_t n, double lambda)
{
    if (n < 1)
        throw std::domain_error("log_binomial_asymptotic: n must be positive");
    const auto nd = static_cast<double>(n);
    const double lo = 0.5 * (1.0 - std::sqrt(1.0 - 1.0 / (3.0 * nd)));
    const double hi = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 / (12.0 * nd + 1.0)));
    if (!(lambda > lo && lambda < hi))
        throw std::domain_error("log_binomial_asymptotic: lambda outside the admissibility window");
    return nd * binary_entropy(lambda) - 0.5 * std::log2(nd) -
           0.5 * std::log2(2.0 * std::numbers::pi * lambda * (1.0 - lambda));
}

double log_partial_binomial_sum(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        throw std::domain_error("log_partial_binomial_sum: k must lie in [0, n]");
    if (k == n)
        return static_cast<double>(n);

    // The terms C(n, i) are unimodal with their peak at n/2. Walk outward from
    // the largest admissible term and stop once terms fall below 2^-64 of it.
    constexpr double kCutoff = 64.0 * std::numbers::ln2;
    const std::uint64_t peak = std::min(k, n / 2);
    const double ln_peak = ln_binomial(n, peak);

    double acc = 1.0;
    double ln_term = ln_peak;
    for (std::uint64_t i = peak; i > 0; --i) {
        // C(n, i-1) = C(n, i) * i / (n - i + 1)
        ln_term += std::log(static_cast<double>(i) / static_cast<double>(n - i + 1));
        const double rel = ln_term - ln_peak;
        if (rel < -kCutoff)
            break;
        acc += std::exp(rel);
    }
    ln_term = ln_peak;
    for (std::uint64_t i = peak; i < k; ++i) {
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1)
        ln_term += std::log(static_cast<double>(n - i) / static_cast<double>(i + 1));
        const double rel = ln_term - ln_peak;
        if (rel < -kCutoff)
            break;
        acc += std::exp(rel);
    }
    return (ln_peak + std::log(acc)) / std::numbers::ln2;
}

}  // namespace quantlink::combinatorics
