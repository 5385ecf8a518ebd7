#pragma once

#include <cmath>
#include <complex>
#include <span>

#include "qlbeam/fft.hpp"
#include "qlbeam/grid.hpp"

namespace qlbeam::detail {

using cplx = std::complex<double>;

inline bool is_nyquist(std::size_t k, std::size_t n) noexcept { return k == n / 2; }

/// exp(i theta) for an ordinary bin. The Nyquist bin stands for both +k and -k,
/// so it gets the mean of the two factors, cos(theta) for an odd phase.
inline cplx bin_phase(double theta, bool nyquist) noexcept {
    return nyquist ? cplx(std::cos(theta), 0.0) : std::polar(1.0, theta);
}

/// Samples of the trigonometric interpolant at x_k + shift, from the unnormalized
/// forward spectrum of the samples at x_k. `plan` must be a single transform of
/// length spectrum.size() with unit stride.
inline void shifted_samples(const AxisGrid &axis, std::span<const cplx> spectrum, double shift,
                            std::span<cplx> out, const FftBatch &plan) {
    const std::size_t n = spectrum.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = spectrum[k] * bin_phase(axis.frequency(k) * shift, is_nyquist(k, n)) * inv_n;
    }
    plan.backward(out.data());
}

}  // namespace qlbeam::detail
