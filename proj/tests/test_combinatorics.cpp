// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/combinatorics.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

using namespace quantlink::combinatorics;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("binary entropy", "[combinatorics]")
{
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK_THAT(binary_entropy(0.5), WithinAbs(1.0, 1e-15));
    CHECK_THAT(binary_entropy(0.11), WithinAbs(oracle::hb(0.11), 1e-14));
    CHECK_THAT(binary_entropy(0.3), WithinAbs(binary_entropy(0.7), 1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
}

TEST_CASE("max_regions small cases", "[combinatorics]")
{
    CHECK(max_regions({4, 2, false}) == 11);
    CHECK(max_regions({3, 1, false}) == 4);
    CHECK(max_regions({5, 2, true}) == 10);
    CHECK(max_regions({2, 1, false}) == 3);
    // d >= n: every sign vector.
    CHECK(max_regions({6, 6, false}) == 64);
    CHECK(max_regions({6, 9, true}) == 64);
    CHECK(max_regions({1, 1, true}) == 2);
    CHECK_THROWS_AS(max_regions({0, 1, false}), std::invalid_argument);
    CHECK_THROWS_AS(max_regions({kExactCountLimit + 1, 3, false}), std::out_of_range);
}

TEST_CASE("max_regions matches exact binomial sums", "[combinatorics]")
{
    for (std::uint64_t n = 1; n <= 40; ++n)
        for (std::uint64_t d = 1; d <= 12; ++d)
            for (bool zero : {false, true}) {
                INFO("n=" << n << " d=" << d << " zero=" << zero);
                CHECK(max_regions({n, d, zero}) == oracle::max_regions(n, d, zero));
            }
    CHECK(max_regions({200, 50, false}) == oracle::max_regions(200, 50, false));
}

TEST_CASE("log2_max_regions agrees with exact counts across the exact limit", "[combinatorics]")
{
    for (std::uint64_t n : {1ULL, 7ULL, 64ULL, 255ULL, 256ULL, 257ULL, 400ULL, 1000ULL})
        for (std::uint64_t d : {1ULL, 3ULL, 16ULL, 100ULL})
            for (bool zero : {false, true}) {
                INFO("n=" << n << " d=" << d << " zero=" << zero);
                const double want = oracle::log2(oracle::max_regions(n, d, zero));
                CHECK_THAT(log2_max_regions({n, d, zero}), WithinRel(want, 1e-12) || WithinAbs(want, 1e-12));
            }
}

TEST_CASE("log_binomial matches exact values", "[combinatorics]")
{
    for (std::uint64_t n : {1ULL, 2ULL, 10ULL, 64ULL, 333ULL, 4096ULL, 16384ULL})
        for (double f : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
            const auto k = static_cast<std::uint64_t>(f * static_cast<double>(n));
            INFO("n=" << n << " k=" << k);
            const double want = oracle::log2(oracle::binomial(n, k));
            CHECK_THAT(log_binomial(n, k), WithinAbs(want, 1e-9 * std::max(1.0, want)));
        }
    CHECK_THROWS_AS(log_binomial(5, 6), std::domain_error);
}

TEST_CASE("partial binomial sums", "[combinatorics]")
{
    for (std::uint64_t n : {1ULL, 5ULL, 30ULL, 160ULL, 640ULL})
        for (std::uint64_t k : {0ULL, 1ULL, 4ULL, 15ULL, 80ULL}) {
            if (k > n)
                continue;
            INFO("n=" << n << " k=" << k);
            const auto exact = oracle::partial_sum(n, k);
            CHECK(partial_binomial_sum(n, k) == exact);
            const double want = oracle::log2(exact);
            CHECK_THAT(log_partial_binomial_sum(n, k), WithinAbs(want, 1e-9 * std::max(1.0, want)));
            CHECK_THAT(log2_big(exact), WithinAbs(want, 1e-12 * std::max(1.0, want)));
        }
    CHECK(partial_binomial_sum(10, 10) == 1024);
    CHECK_THROWS_AS(partial_binomial_sum(3, 4), std::domain_error);
    CHECK_THROWS_AS(log2_big(BigInt(0)), std::domain_error);
}

TEST_CASE("Stirling asymptote tracks log_binomial", "[combinatorics]")
{
    // With lambda n an integer the dropped constant is o(1).
    for (std::uint64_t n : {64ULL, 256ULL, 1024ULL, 8192ULL})
        for (double lambda : {0.25, 0.5}) {
            const auto k = static_cast<std::uint64_t>(lambda * static_cast<double>(n));
            CHECK(std::abs(log_binomial(n, k) - log_binomial_asymptotic(n, lambda)) < 0.01);
        }
    CHECK_THROWS_AS(log_binomial_asymptotic(100, 0.0), std::domain_error);
    CHECK_THROWS_AS(log_binomial_asymptotic(100, 1e-4), std::domain_error);
    CHECK_THROWS_AS(log_binomial_asymptotic(100, 1.0), std::domain_error);
    CHECK_THROWS_AS(log_binomial_asymptotic(0, 0.5), std::domain_error);
    CHECK_NOTHROW(log_binomial_asymptotic(100, 0.5));
}

TEST_CASE("region counts are bounded by 2^n and n + 1", "[combinatorics]")
{
    for (std::uint64_t n = 1; n <= 20; ++n)
        for (std::uint64_t d = 1; d <= 6; ++d) {
            const auto r = max_regions({n, d, false});
            CHECK(r <= (BigInt(1) << n));
            CHECK(r >= n + 1);
            CHECK(max_regions({n, d, true}) <= r);
        }
}
