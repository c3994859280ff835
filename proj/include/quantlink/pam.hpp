// SPDX-License-Identifier: Apache-2.0
//
// quantlink: receivers and rate analysis for MIMO links with one-bit ADCs
// ------------------------------------------------------------------------

#ifndef QUANTLINK_PAM_HPP
#define QUANTLINK_PAM_HPP

#include <cstdint>
#include <vector>

namespace quantlink::rates {

/// One SVD stream carrying uniform 2^n-PAM: x = a (2 xhat - 1 - 2^n), y = gain x + noise.
class PamStream {
public:
    PamStream(unsigned n_bits, double power, double gain);

    unsigned n_bits() const noexcept { return n_bits_; }
    double power() const noexcept { return power_; }
    double gain() const noexcept { return gain_; }
    /// a = sqrt(3 P / (2^{2n} - 1)).
    double amplitude() const noexcept { return amplitude_; }
    double constellation_size() const noexcept;
    /// Distance between adjacent received points, 2 a gain.
    double received_spacing() const noexcept { return 2.0 * amplitude_ * gain_; }
    /// The 2^n transmit symbols in increasing order (n_bits <= 20).
    std::vector<double> points() const;

private:
    unsigned n_bits_;
    double power_;
    double gain_;
    double amplitude_;
};

/// Spacing beyond which the received constellation is treated as error-free.
inline constexpr double kSeparatedSpacing = 20.0;

/// I(x; y) = h(y) - 0.5 log2(2 pi e) for unit-variance Gaussian noise, with
/// h(y) integrated by adaptive Simpson over [min center - 10, max center + 10].
double mi_pam_awgn(const PamStream& stream);

/// Mutual information between the symbol and the SAR bin index of y, with
/// bin boundaries at k * step for |k| < 2^{n-1}.
double mi_quantized_pam(const PamStream& stream, double step);

/// The step that puts SAR boundaries midway between received points.
inline double matched_step(const PamStream& stream) { return stream.received_spacing(); }

/// Matched-step transition rows wider than this many bins on either side are
/// not tabulated; mi_quantized_pam returns mi_pam_awgn instead.
inline constexpr std::int64_t kMaxBandHalfWidth = 256;

}  // namespace quantlink::rates

#endif
