// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/pam.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace quantlink::rates;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double xlog(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// I(X; bin) for matched-or-not uniform bins, every row evaluated over the
// bins within 14 noise deviations.
double banded_dmc_mi(double m, double delta, double step)
{
    const auto mm = static_cast<std::int64_t>(m);
    std::vector<double> q(static_cast<std::size_t>(mm), 0.0);
    double cond = 0.0;
    for (std::int64_t r = 0; r < mm; ++r) {
        const double c = delta * (static_cast<double>(r) - 0.5 * (m - 1.0));
        const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((c - 14.0) / step)) + mm / 2);
        const auto hi = std::min<std::int64_t>(mm - 1, static_cast<std::int64_t>(std::floor((c + 14.0) / step)) + mm / 2);
        for (std::int64_t j = lo; j <= hi; ++j) {
            const double a = j == 0 ? -INFINITY : static_cast<double>(j - mm / 2) * step;
            const double b = j == mm - 1 ? INFINITY : static_cast<double>(j - mm / 2 + 1) * step;
            double p;
            if (a - c > 0.0)
                p = gauss_cdf(-(a - c)) - (std::isinf(b) ? 0.0 : gauss_cdf(-(b - c)));
            else
                p = (std::isinf(b) ? 1.0 : gauss_cdf(b - c)) - (std::isinf(a) ? 0.0 : gauss_cdf(a - c));
            q[static_cast<std::size_t>(j)] += p / m;
            cond += xlog(p) / m;
        }
    }
    double h = 0.0;
    for (double v : q)
        h += xlog(v);
    return h - cond;
}

// I(U + N; U) for U uniform on [-w/2, w/2], by the midpoint rule.
double uniform_input_mi(double w)
{
    const double lo = -0.5 * w - 12.0;
    const double hi = 0.5 * w + 12.0;
    const auto steps = static_cast<std::size_t>(std::max(4e5, (hi - lo) / 2e-3));
    const double dy = (hi - lo) / static_cast<double>(steps);
    double h = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double y = lo + (static_cast<double>(i) + 0.5) * dy;
        const double p = (gauss_cdf(y + 0.5 * w) - gauss_cdf(y - 0.5 * w)) / w;
        h += xlog(p) * dy;
    }
    return h - 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
}

// I(X; Y) by direct quadrature of the Gaussian mixture density.
double mixture_mi(unsigned n, double delta)
{
    const double m = std::ldexp(1.0, static_cast<int>(n));
    const double half = 0.5 * delta * (m - 1.0);
    const double lo = -half - 12.0;
    const double hi = half + 12.0;
    const auto steps = static_cast<std::size_t>((hi - lo) / 2e-3);
    const double dy = (hi - lo) / static_cast<double>(steps);
    const double norm = 1.0 / (m * std::sqrt(2.0 * std::numbers::pi));
    double h = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double y = lo + (static_cast<double>(i) + 0.5) * dy;
        double p = 0.0;
        for (double k = 0; k < m; ++k) {
            const double d = y - (k * delta - half);
            if (std::abs(d) < 12.0)
                p += std::exp(-0.5 * d * d);
        }
        h += xlog(p * norm) * dy;
    }
    return h - 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
}

// Power giving received spacing `delta` at unit gain.
double power_for_spacing(unsigned n, double delta)
{
    const double m = std::ldexp(1.0, static_cast<int>(n));
    return 0.25 * delta * delta * (m * m - 1.0) / 3.0;
}

}  // namespace

TEST_CASE("PAM stream geometry", "[pam]")
{
    const PamStream s(3, 10.0, 2.0);
    const auto pts = s.points();
    REQUIRE(pts.size() == 8);
    double energy = 0.0;
    for (double p : pts)
        energy += p * p;
    CHECK_THAT(energy / 8.0, WithinRel(10.0, 1e-12));
    CHECK_THAT(pts[1] - pts[0], WithinRel(2.0 * s.amplitude(), 1e-12));
    CHECK_THAT(s.received_spacing(), WithinRel(2.0 * (pts[1] - pts[0]), 1e-12));
    CHECK(matched_step(s) == s.received_spacing());
    CHECK_THROWS_AS(PamStream(0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PamStream(63, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PamStream(2, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PamStream(30, 1.0, 1.0).points(), std::length_error);
}

TEST_CASE("continuous-output MI against Monte Carlo", "[pam]")
{
    struct Case {
        unsigned n;
        double gain;
        double power;
    };
    for (const Case c : {Case{1, 1.0, 1.0}, Case{2, 1.0, 5.0}, Case{3, 2.0, 10.0}, Case{4, 0.5, 300.0},
                         Case{6, 1.0, 0.5}}) {
        const auto mc = oracle::monte_carlo_mi(c.n, c.gain, c.power, 400000, 19 + c.n);
        INFO("n=" << c.n << " gain=" << c.gain << " P=" << c.power << " mc=" << mc.value);
        CHECK(std::abs(mi_pam_awgn(PamStream(c.n, c.power, c.gain)) - mc.value) < 5.0 * mc.stderr_value + 2e-3);
    }
}

TEST_CASE("BPSK closed form", "[pam]")
{
    // 1-bit quantized BPSK is a binary symmetric channel.
    for (double p : {0.1, 1.0, 4.0}) {
        const PamStream s(1, p, 1.0);
        const double eps = gauss_cdf(-std::sqrt(p));
        CHECK_THAT(mi_quantized_pam(s, matched_step(s)), WithinAbs(1.0 - oracle::hb(eps), 1e-12));
    }
}

TEST_CASE("dense constellations approach the uniform-input limit", "[pam]")
{
    // Spacing well below the noise: the lattice mixture is indistinguishable
    // from a uniform density of the same width.
    for (auto [n, delta] : {std::pair{12u, 0.05}, {20u, 0.01}, {40u, 1e-9}}) {
        const PamStream s(n, power_for_spacing(n, delta), 1.0);
        const double width = std::ldexp(1.0, static_cast<int>(n)) * delta;
        INFO("n=" << n << " delta=" << delta);
        CHECK_THAT(mi_pam_awgn(s), WithinAbs(uniform_input_mi(width), 2e-6));
    }
    // Coarser spacing: the mixture itself.
    for (auto [n, delta] : {std::pair{9u, 0.2}, {6u, 0.6}, {4u, 1.5}}) {
        INFO("n=" << n << " delta=" << delta);
        CHECK_THAT(mi_pam_awgn(PamStream(n, power_for_spacing(n, delta), 1.0)), WithinAbs(mixture_mi(n, delta), 1e-6));
    }
}

TEST_CASE("MI limits and monotonicity", "[pam]")
{
    CHECK(mi_pam_awgn(PamStream(3, 0.0, 1.0)) == 0.0);
    CHECK(mi_pam_awgn(PamStream(3, 1.0, 0.0)) == 0.0);
    CHECK(mi_pam_awgn(PamStream(3, 1e8, 1.0)) == 3.0);
    CHECK(mi_quantized_pam(PamStream(3, 1e8, 1.0), 1.0) <= 3.0);
    for (unsigned n : {1u, 2u, 5u, 10u, 30u, 62u}) {
        double prev = 0.0;
        for (double db = -20.0; db <= 70.0; db += 2.5) {
            const PamStream s(n, std::pow(10.0, db / 10.0), 1.0);
            const double mi = mi_pam_awgn(s);
            INFO("n=" << n << " dB=" << db);
            CHECK(mi >= prev - 1e-9);
            CHECK(mi <= n);
            CHECK(mi <= 0.5 * std::log2(1.0 + s.power()) + 1e-9);
            const double q = mi_quantized_pam(s, matched_step(s));
            CHECK(q <= mi + 1e-9);
            prev = mi;
        }
    }
    // More levels never hurt at fixed power.
    for (double p : {0.1, 3.0, 1e3}) {
        double prev = 0.0;
        for (unsigned n = 1; n <= 24; ++n) {
            const double mi = mi_pam_awgn(PamStream(n, p, 1.0));
            CHECK(mi >= prev - 1e-9);
            prev = mi;
        }
    }
}

TEST_CASE("quantized MI against simulation", "[pam]")
{
    for (auto [n, gain, p] : {std::tuple{1u, 1.0, 1.0}, {2u, 1.0, 5.0}, {3u, 2.0, 10.0}, {4u, 1.0, 100.0}}) {
        const PamStream s(n, p, gain);
        const double sim = oracle::simulated_quantized_mi(n, gain, p, matched_step(s), 400000, 5 + n);
        INFO("n=" << n);
        CHECK(std::abs(mi_quantized_pam(s, matched_step(s)) - sim) < 0.01);
        // An arbitrary step as well.
        const double step = 0.7 * matched_step(s) + 0.1;
        CHECK(std::abs(mi_quantized_pam(s, step) - oracle::simulated_quantized_mi(n, gain, p, step, 400000, 9)) < 0.01);
    }
}

TEST_CASE("quantized MI matches a full banded computation", "[pam]")
{
    // Exact path.
    for (auto [n, delta, ratio] : {std::tuple{6u, 0.8, 1.0}, {8u, 0.3, 1.0}, {8u, 0.3, 1.7}, {13u, 0.2, 1.0}}) {
        const PamStream s(n, power_for_spacing(n, delta), 1.0);
        const double step = ratio * s.received_spacing();
        INFO("n=" << n << " delta=" << delta << " ratio=" << ratio);
        CHECK_THAT(mi_quantized_pam(s, step), WithinAbs(banded_dmc_mi(s.constellation_size(), s.received_spacing(), step), 1e-9));
    }
    // Matched step beyond the exact-table size: shift-invariant shortcut.
    const PamStream big(16, power_for_spacing(16, 0.3), 1.0);
    CHECK_THAT(mi_quantized_pam(big, matched_step(big)),
               WithinAbs(banded_dmc_mi(big.constellation_size(), big.received_spacing(), big.received_spacing()), 1e-8));
    CHECK_THROWS_AS(mi_quantized_pam(big, 1.3 * big.received_spacing()), std::domain_error);
    CHECK_THROWS_AS(mi_quantized_pam(big, 0.0), std::invalid_argument);
    // Spacing so fine that bins are far below the noise: falls back to the
    // unquantized value.
    const PamStream fine(50, power_for_spacing(50, 1e-6), 1.0);
    CHECK(mi_quantized_pam(fine, matched_step(fine)) == mi_pam_awgn(fine));
}
