#include "qlbeam/state.hpp"

#include <algorithm>
#include <cmath>

#include "qlbeam/error.hpp"

namespace qlbeam {

std::string_view to_string(DistributionKind kind) {
    return kind == DistributionKind::classical ? "classical" : "wigner";
}

std::size_t RayEnsemble::lost_count() const noexcept {
    return static_cast<std::size_t>(std::count(lost.begin(), lost.end(), std::uint8_t{1}));
}

ScaleContext::ScaleContext(double sigma0, double epsilon)
    : sigma0_(sigma0), epsilon_(epsilon), eta_(epsilon / (2.0 * sigma0)) {
    if (!(sigma0 > 0.0) || !(epsilon > 0.0) || !std::isfinite(sigma0) || !std::isfinite(epsilon)) {
        throw Error(ErrorKind::invalid_argument, "scale context needs sigma0 > 0 and epsilon > 0");
    }
}

double to_scaled(double length, const ScaleContext &ctx) noexcept {
    return length / (2.0 * ctx.sigma0());
}

double from_scaled(double scaled, const ScaleContext &ctx) noexcept {
    return scaled * (2.0 * ctx.sigma0());
}

double norm_squared(const WaveField &psi) {
    double sum = 0.0;
    for (const auto &v : psi.values) sum += std::norm(v);
    return sum * psi.grid.spacing();
}

double mass(const QuasiDistribution &rho) {
    double sum = 0.0;
    for (double v : rho.values) sum += v;
    return sum * rho.grid.cell_area();
}

void require_same_grid(const QuasiDistribution &a, const QuasiDistribution &b) {
    if (!(a.grid == b.grid)) {
        throw Error(ErrorKind::grid_mismatch, "distributions live on different phase grids");
    }
}

double linf_distance(const QuasiDistribution &a, const QuasiDistribution &b) {
    require_same_grid(a, b);
    double d = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        d = std::max(d, std::abs(a.values[k] - b.values[k]));
    }
    return d;
}

double max_abs(const QuasiDistribution &rho) {
    double m = 0.0;
    for (double v : rho.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace qlbeam
