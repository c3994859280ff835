// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#include "quantlink/pam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace quantlink::rates {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kWindow = 12.0;   // centers farther than this from y are dropped
constexpr double kTail = 10.0;     // integration reaches this far past the outer centers
constexpr double kPanel = 0.5;
constexpr double kSimpsonTol = 1e-11;
constexpr int kMaxDepth = 40;

double phi(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

// Phi(x1) - Phi(x2) for x1 >= x2 without cancellation in either tail.
double phi_diff(double x1, double x2)
{
    if (x2 >= 0.0)
        return 0.5 * (std::erfc(x2 / std::numbers::sqrt2) - std::erfc(x1 / std::numbers::sqrt2));
    if (x1 <= 0.0)
        return 0.5 * (std::erfc(-x1 / std::numbers::sqrt2) - std::erfc(-x2 / std::numbers::sqrt2));
    return 1.0 - 0.5 * std::erfc(x1 / std::numbers::sqrt2) - 0.5 * std::erfc(-x2 / std::numbers::sqrt2);
}

// Density of the equal-weight mixture of unit Gaussians at M centers
// spaced delta apart and symmetric about 0.
class Mixture {
public:
    Mixture(double m, double delta) : m_(m), delta_(delta), half_(0.5 * delta * (m - 1.0)) {}

    double half_width() const { return half_; }

    double operator()(double y) const
    {
        if (delta_ >= 0.25)
            return direct(y);
        return euler_maclaurin(y);
    }

private:
    double direct(double y) const
    {
        // Centers indexed from the right end: c = half - r delta.
        const double hi_r = std::floor((half_ - y + kWindow) / delta_);
        const double lo_r = std::ceil((half_ - y - kWindow) / delta_);
        const double r0 = std::max(0.0, lo_r);
        const double r1 = std::min(m_ - 1.0, hi_r);
        double s = 0.0;
        for (double r = r0; r <= r1; r += 1.0)
            s += phi(y - (half_ - r * delta_));
        return s / m_;
    }

    double euler_maclaurin(double y) const
    {
        const double a = -half_ - 0.5 * delta_;
        const double b = half_ + 0.5 * delta_;
        const double ua = y - a;
        const double ub = y - b;
        auto f1 = [](double u) { return u * phi(u); };
        auto f3 = [](double u) { return (u * u * u - 3.0 * u) * phi(u); };
        const double d = delta_;
        const double s = phi_diff(ua, ub) / d - d / 24.0 * (f1(ub) - f1(ua)) +
                         7.0 * d * d * d / 5760.0 * (f3(ub) - f3(ua));
        return std::max(0.0, s) / m_;
    }

    double m_;
    double delta_;
    double half_;
};

double entropy_density(const Mixture& p, double y)
{
    const double v = p(y);
    return v > 0.0 ? -v * std::log2(v) : 0.0;
}

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol || std::abs(diff) <= 1e-15 * (std::abs(left) + std::abs(right)))
        return left + right + diff / 15.0;
    if (depth >= kMaxDepth)
        throw std::runtime_error("mi_pam_awgn: adaptive quadrature did not converge");
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol)
{
    if (!(b > a))
        return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / kPanel)));
    const double h = (b - a) / panels;
    const double panel_tol = tol / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = i + 1 == panels ? b : x0 + h;
        const double f0 = f(x0);
        const double f1 = f(x1);
        const double fm = f(0.5 * (x0 + x1));
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_step(f, x0, x1, f0, fm, f1, whole, panel_tol, 0);
    }
    return total;
}

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// Row m of the symbol-to-bin transition matrix restricted to the bins within
// the noise window; calls sink(bin, probability).
template <class Sink>
void transition_row(double m_count, double delta, double step, double m, Sink&& sink)
{
    const double half_bins = 0.5 * m_count;
    const double c = delta * (m - 0.5 * (m_count - 1.0));
    auto bin_of = [&](double x) { return std::clamp(std::floor(x / step) + half_bins, 0.0, m_count - 1.0); };
    const double j0 = bin_of(c - kWindow);
    const double j1 = bin_of(c + kWindow);
    for (double j = j0; j <= j1; j += 1.0) {
        const double k = j - half_bins;
        const double lower = j == 0.0 ? -INFINITY : k * step;
        const double upper = j == m_count - 1.0 ? INFINITY : (k + 1.0) * step;
        double p;
        if (std::isinf(lower))
            p = 0.5 * std::erfc(-(upper - c) / std::numbers::sqrt2);
        else if (std::isinf(upper))
            p = 0.5 * std::erfc((lower - c) / std::numbers::sqrt2);
        else
            p = phi_diff(upper - c, lower - c);
        sink(j, p);
    }
}

}  // namespace

PamStream::PamStream(unsigned n_bits, double power, double gain) : n_bits_(n_bits), power_(power), gain_(gain)
{
    if (n_bits_ < 1 || n_bits_ > 62)
        throw std::invalid_argument("PamStream: n_bits must be in [1, 62]");
    if (!(power_ >= 0.0) || !std::isfinite(power_))
        throw std::invalid_argument("PamStream: power must be finite and non-negative");
    if (!(gain_ >= 0.0) || !std::isfinite(gain_))
        throw std::invalid_argument("PamStream: gain must be finite and non-negative");
    const double m = constellation_size();
    amplitude_ = std::sqrt(3.0 * power_ / (m * m - 1.0));
}

double PamStream::constellation_size() const noexcept
{
    return std::ldexp(1.0, static_cast<int>(n_bits_));
}

std::vector<double> PamStream::points() const
{
    if (n_bits_ > 20)
        throw std::length_error("PamStream::points: constellation too large to list");
    const auto m = static_cast<int>(constellation_size());
    std::vector<double> pts(static_cast<std::size_t>(m));
    for (int x = 1; x <= m; ++x)
        pts[static_cast<std::size_t>(x - 1)] = amplitude_ * (2.0 * x - 1.0 - m);
    return pts;
}

double mi_pam_awgn(const PamStream& stream)
{
    const double delta = stream.received_spacing();
    const auto n = static_cast<double>(stream.n_bits());
    if (delta == 0.0)
        return 0.0;
    if (delta >= kSeparatedSpacing)
        return n;

    const double m = stream.constellation_size();
    const Mixture p(m, delta);
    const double half = p.half_width();
    auto g = [&](double y) { return entropy_density(p, y); };

    // h(y) = 2 * integral over y >= 0. Far from both ends the density is
    // periodic in delta, so whole periods of the interior are integrated once.
    const double periods = std::floor((half - kWindow) / delta);
    double interior = 0.0;
    double edge_start = 0.0;
    if (periods >= 1.0) {
        const double one = delta < 0.25 ? std::log2(m * delta) / m : adaptive_simpson(g, 0.0, delta, kSimpsonTol / periods);
        interior = periods * one;
        edge_start = periods * delta;
    }
    const double edge = adaptive_simpson(g, edge_start, half + kTail, kSimpsonTol);
    const double h = 2.0 * (interior + edge);
    const double mi = h - 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
    return std::clamp(mi, 0.0, n);
}

double mi_quantized_pam(const PamStream& stream, double step)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("mi_quantized_pam: step must be positive");
    const double delta = stream.received_spacing();
    const auto n = static_cast<double>(stream.n_bits());
    if (delta == 0.0)
        return 0.0;
    const double m = stream.constellation_size();
    const double row_cost = 2.0 * kWindow / step + 3.0;
    const bool matched = std::abs(step - delta) <= 1e-12 * delta;

    if (m * row_cost <= 4e6) {
        std::vector<double> q(static_cast<std::size_t>(m), 0.0);
        double cond = 0.0;
        for (double r = 0.0; r < m; r += 1.0)
            transition_row(m, delta, step, r, [&](double j, double pr) {
                q[static_cast<std::size_t>(j)] += pr / m;
                cond += plogp(pr) / m;
            });
        double hb = 0.0;
        for (double v : q)
            hb += plogp(v);
        return std::clamp(hb - cond, 0.0, n);
    }
    if (!matched)
        throw std::domain_error("mi_quantized_pam: transition matrix too large for an unmatched step");

    const double band = std::ceil(kWindow / delta) + 1.0;
    if (band > static_cast<double>(kMaxBandHalfWidth))
        return mi_pam_awgn(stream);
    const auto w = static_cast<std::int64_t>(band);

    // Matched step: rows beyond w from either end are shifts of one band.
    const auto wd = static_cast<double>(w);
    std::vector<double> q(static_cast<std::size_t>(w + 1), 0.0);
    double edge_cond = 0.0;
    for (double r = 0.0; r <= 2.0 * wd; r += 1.0)
        transition_row(m, delta, step, r, [&](double j, double pr) {
            if (j <= wd)
                q[static_cast<std::size_t>(j)] += pr / m;
            if (r <= wd)
                edge_cond += plogp(pr);
        });
    double band_sum = 0.0;
    double band_entropy = 0.0;
    for (std::int64_t d = -w; d <= w; ++d) {
        const double pr = phi_diff((static_cast<double>(d) + 0.5) * delta, (static_cast<double>(d) - 0.5) * delta);
        band_sum += pr;
        band_entropy += plogp(pr);
    }
    const double bulk = m - 2.0 * (wd + 1.0);
    double hb = bulk * plogp(band_sum / m);
    for (double v : q)
        hb += 2.0 * plogp(v);
    const double cond = (2.0 * edge_cond + bulk * band_entropy) / m;
    return std::clamp(hb - cond, 0.0, n);
}

}  // namespace quantlink::rates
