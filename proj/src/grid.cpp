#include "qlbeam/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qlbeam/error.hpp"

namespace qlbeam {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

AxisGrid::AxisGrid(std::size_t n, double length, double center)
    : n_(n), length_(length), center_(center) {
    if (n < 8 || !is_power_of_two(n)) {
        throw Error(ErrorKind::invalid_n,
                    "axis point count must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorKind::non_positive_length,
                    "axis length must be positive and finite, got " + value_text(length));
    }
    if (!std::isfinite(center)) {
        throw Error(ErrorKind::invalid_argument, "axis center must be finite");
    }
}

std::vector<double> AxisGrid::points() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = point(k);
    return out;
}

double AxisGrid::conjugate_spacing() const noexcept { return 2.0 * std::numbers::pi / length_; }

double AxisGrid::frequency(std::size_t k) const noexcept {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    auto m = static_cast<std::ptrdiff_t>(k);
    if (m >= n / 2) m -= n;
    return static_cast<double>(m) * conjugate_spacing();
}

double AxisGrid::nyquist() const noexcept { return std::numbers::pi / spacing(); }

AxisGrid make_axis_grid(std::size_t n, double length, double center) {
    return AxisGrid(n, length, center);
}

}  // namespace qlbeam
