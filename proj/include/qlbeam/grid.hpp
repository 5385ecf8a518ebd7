#pragma once

#include <cstddef>
#include <vector>

namespace qlbeam {

/// Uniform periodic axis. Point k sits at center - length/2 + k*spacing for k in [0, n);
/// the point after the last one wraps onto the first.
class AxisGrid {
  public:
    /// Throws Error(invalid_n) unless n is a power of two >= 8, and
    /// Error(non_positive_length) unless length is finite and > 0.
    AxisGrid(std::size_t n, double length, double center = 0.0);

    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double center() const noexcept { return center_; }
    double spacing() const noexcept { return length_ / static_cast<double>(n_); }
    double first() const noexcept { return center_ - 0.5 * length_; }
    double point(std::size_t k) const noexcept { return first() + static_cast<double>(k) * spacing(); }
    std::vector<double> points() const;

    /// Spacing of the spectral axis conjugate to this one.
    double conjugate_spacing() const noexcept;
    /// Signed frequency of FFT bin k, with bin n/2 mapped to the negative Nyquist frequency.
    double frequency(std::size_t k) const noexcept;
    /// Largest representable |frequency| (the Nyquist frequency, pi/spacing).
    double nyquist() const noexcept;

    bool operator==(const AxisGrid &) const = default;

  private:
    std::size_t n_;
    double length_;
    double center_;
};

AxisGrid make_axis_grid(std::size_t n, double length, double center);

bool is_power_of_two(std::size_t n) noexcept;

/// Phase plane (x, p). Values are stored row-major with x as the slow index.
struct PhaseGrid {
    AxisGrid x;
    AxisGrid p;

    std::size_t size() const noexcept { return x.size() * p.size(); }
    std::size_t index(std::size_t ix, std::size_t ip) const noexcept { return ix * p.size() + ip; }
    double cell_area() const noexcept { return x.spacing() * p.spacing(); }
    bool operator==(const PhaseGrid &) const = default;
};

}  // namespace qlbeam
