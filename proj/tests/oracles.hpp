// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------
//
// Reference computations used by the tests. Nothing here calls into the
// library code it is used to check.

#ifndef QUANTLINK_TESTS_ORACLES_HPP
#define QUANTLINK_TESTS_ORACLES_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using boost::multiprecision::cpp_int;

// C(n, k) by the multiplicative formula.
inline cpp_int binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    cpp_int r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline cpp_int partial_sum(std::uint64_t n, std::uint64_t k)
{
    cpp_int s = 0;
    for (std::uint64_t i = 0; i <= k; ++i)
        s += binomial(n, i);
    return s;
}

inline cpp_int max_regions(std::uint64_t n, std::uint64_t d, bool zero_threshold)
{
    const std::uint64_t top = std::min(n, d);
    if (!zero_threshold)
        return partial_sum(n, top);
    if (top == 0)
        return 1;
    return 2 * partial_sum(n - 1, top - 1);
}

inline double log2(const cpp_int& v)
{
    // Keep 60 significant bits, shift the rest into the exponent.
    const auto bits = static_cast<long>(boost::multiprecision::msb(v)) + 1;
    if (bits <= 60)
        return std::log2(v.convert_to<double>());
    const long shift = bits - 60;
    const cpp_int top = v >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline double hb(double p)
{
    if (p <= 0.0 || p >= 1.0)
        return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Uniform 2^n-PAM with average power P scaled by `gain`; unit-variance noise.
inline std::vector<double> received_points(unsigned n_bits, double gain, double power)
{
    const double m = std::ldexp(1.0, static_cast<int>(n_bits));
    std::vector<double> c(static_cast<std::size_t>(m));
    double energy = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = 2.0 * static_cast<double>(i) + 1.0 - m;
        energy += c[i] * c[i];
    }
    const double scale = std::sqrt(power / (energy / m));
    for (auto& v : c)
        v *= scale * gain;
    return c;
}

struct Estimate {
    double value = 0.0;
    double stderr_value = 0.0;
};

// I(X;Y) = E[log2 p(y|x) / p(y)] by sampling.
inline Estimate monte_carlo_mi(unsigned n_bits, double gain, double power, std::size_t samples, std::uint64_t seed)
{
    const auto c = received_points(n_bits, gain, power);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t x = pick(rng);
        const double z = noise(rng);
        const double y = c[x] + z;
        double mix = 0.0;
        for (double ci : c)
            mix += std::exp(-0.5 * (y - ci) * (y - ci) + 0.5 * z * z);
        const double v = -std::log2(mix / static_cast<double>(c.size()));
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    return {mean, std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n)};
}

// Plug-in mutual information between the symbol and the uniform bin of width
// `step` (bins at k * step, 2^n of them, outer bins unbounded).
inline double simulated_quantized_mi(unsigned n_bits, double gain, double power, double step, std::size_t symbols,
                                     std::uint64_t seed)
{
    const auto c = received_points(n_bits, gain, power);
    const auto m = static_cast<std::int64_t>(c.size());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> joint(c.size() * c.size(), 0.0);
    for (std::size_t s = 0; s < symbols; ++s) {
        const std::size_t x = pick(rng);
        const double y = c[x] + noise(rng);
        auto bin = static_cast<std::int64_t>(std::floor(y / step)) + m / 2;
        bin = std::clamp<std::int64_t>(bin, 0, m - 1);
        joint[x * c.size() + static_cast<std::size_t>(bin)] += 1.0;
    }
    const double total = static_cast<double>(symbols);
    std::vector<double> px(c.size(), 0.0);
    std::vector<double> py(c.size(), 0.0);
    for (std::size_t x = 0; x < c.size(); ++x)
        for (std::size_t b = 0; b < c.size(); ++b) {
            px[x] += joint[x * c.size() + b] / total;
            py[b] += joint[x * c.size() + b] / total;
        }
    double mi = 0.0;
    for (std::size_t x = 0; x < c.size(); ++x)
        for (std::size_t b = 0; b < c.size(); ++b) {
            const double p = joint[x * c.size() + b] / total;
            if (p > 0.0)
                mi += p * std::log2(p / (px[x] * py[b]));
        }
    return mi;
}

}  // namespace oracle

#endif
