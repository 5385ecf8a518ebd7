#include "qlbeam/initial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qlbeam/error.hpp"

namespace qlbeam {

namespace {

void check_wave_boundary(const WaveField &psi) {
    double peak = 0.0;
    for (const auto &v : psi.values) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(psi.values.front()), std::abs(psi.values.back()));
    if (!(edge <= kBoundaryDecay * peak)) {
        throw Error(ErrorKind::grid_too_narrow,
                    "wavefield amplitude at the grid boundary is " + value_text(edge / peak) +
                        " of its peak (limit 1e-12)");
    }
}

void check_phase_boundary(const QuasiDistribution &rho) {
    const auto nx = rho.grid.x.size();
    const auto np = rho.grid.p.size();
    double peak = 0.0;
    for (double v : rho.values) peak = std::max(peak, std::abs(v));
    double edge = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        edge = std::max({edge, std::abs(rho.at(i, 0)), std::abs(rho.at(i, np - 1))});
    }
    for (std::size_t j = 0; j < np; ++j) {
        edge = std::max({edge, std::abs(rho.at(0, j)), std::abs(rho.at(nx - 1, j))});
    }
    if (!(edge <= kBoundaryDecay * peak)) {
        throw Error(ErrorKind::grid_too_narrow,
                    "phase-space density at the grid boundary is " + value_text(edge / peak) +
                        " of its peak (limit 1e-12)");
    }
}

void normalize(QuasiDistribution &rho) {
    const double m = mass(rho);
    for (double &v : rho.values) v /= m;
}

}  // namespace

WaveField gaussian_wavefield(const AxisGrid &grid, double sigma_x, double x0, double p0,
                             double epsilon) {
    const GaussianPacket packet{sigma_x, x0, p0, 1.0};
    return superposed_wavefield(grid, std::span(&packet, 1), epsilon);
}

WaveField superposed_wavefield(const AxisGrid &grid, std::span<const GaussianPacket> packets,
                               double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
    if (packets.empty()) throw Error(ErrorKind::invalid_argument, "no packets given");
    for (const auto &pk : packets) {
        if (!(pk.sigma_x > 0.0)) throw Error(ErrorKind::invalid_argument, "sigma_x must be positive");
    }
    WaveField psi{grid, std::vector<cplx>(grid.size()), epsilon, 0.0};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid.point(k);
        cplx sum = 0.0;
        for (const auto &pk : packets) {
            const double d = x - pk.x0;
            sum += pk.amplitude * std::exp(cplx(-d * d / (4.0 * pk.sigma_x * pk.sigma_x),
                                                pk.p0 * d / epsilon));
        }
        psi.values[k] = sum;
    }
    check_wave_boundary(psi);
    const double scale = 1.0 / std::sqrt(norm_squared(psi));
    for (auto &v : psi.values) v *= scale;
    return psi;
}

WaveField cat_wavefield(const AxisGrid &grid, double sigma_x, double separation, double x0,
                        double p0, double epsilon) {
    const GaussianPacket packets[] = {{sigma_x, x0 - 0.5 * separation, p0, 1.0},
                                      {sigma_x, x0 + 0.5 * separation, p0, 1.0}};
    return superposed_wavefield(grid, packets, epsilon);
}

QuasiDistribution gaussian_quasidist(const PhaseGrid &grid, double sigma_x, double sigma_p,
                                     double sigma_xp, double x0, double p0,
                                     DistributionKind kind) {
    const GaussianComponent c{1.0, sigma_x, sigma_p, sigma_xp, x0, p0};
    auto rho = gaussian_mixture_quasidist(grid, std::span(&c, 1));
    rho.kind = kind;
    return rho;
}

QuasiDistribution gaussian_mixture_quasidist(const PhaseGrid &grid,
                                             std::span<const GaussianComponent> components) {
    if (components.empty()) throw Error(ErrorKind::invalid_argument, "no mixture components");
    QuasiDistribution rho{grid, std::vector<double>(grid.size(), 0.0), 0.0,
                          DistributionKind::classical};
    for (const auto &c : components) {
        const double vxx = c.sigma_x * c.sigma_x;
        const double vpp = c.sigma_p * c.sigma_p;
        const double det = vxx * vpp - c.sigma_xp * c.sigma_xp;
        if (!(c.sigma_x > 0.0) || !(c.sigma_p > 0.0) || !(det > 0.0)) {
            throw Error(ErrorKind::non_positive_definite,
                        "covariance [[sx^2, sxp], [sxp, sp^2]] is not positive definite");
        }
        if (!(c.weight > 0.0)) throw Error(ErrorKind::invalid_argument, "mixture weight must be > 0");
        const double amp = c.weight / (2.0 * std::numbers::pi * std::sqrt(det));
        for (std::size_t i = 0; i < grid.x.size(); ++i) {
            const double dx = grid.x.point(i) - c.x0;
            for (std::size_t j = 0; j < grid.p.size(); ++j) {
                const double dp = grid.p.point(j) - c.p0;
                const double q = (vpp * dx * dx - 2.0 * c.sigma_xp * dx * dp + vxx * dp * dp) / det;
                rho.values[grid.index(i, j)] += amp * std::exp(-0.5 * q);
            }
        }
    }
    check_phase_boundary(rho);
    normalize(rho);
    return rho;
}

RayEnsemble sample_rays(const QuasiDistribution &rho, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorKind::invalid_count, "ray count must be at least 1");
    const double area = rho.grid.cell_area();
    double positive = 0.0;
    double negative = 0.0;
    std::vector<double> cdf(rho.values.size());
    for (std::size_t k = 0; k < rho.values.size(); ++k) {
        const double v = rho.values[k];
        if (v > 0.0) {
            positive += v * area;
        } else {
            negative -= v * area;
        }
        cdf[k] = positive;
    }
    if (!(positive > 0.0)) throw Error(ErrorKind::invalid_argument, "density has no positive mass");
    if (negative > kNegativeMassLimit * positive) {
        throw Error(ErrorKind::refuse_negative,
                    "negative mass " + value_text(negative / positive) +
                        " of total; this is a quasi-distribution, not a sampleable density");
    }

    RayEnsemble rays;
    rays.x.resize(n);
    rays.p.resize(n);
    rays.lost.assign(n, 0);
    rays.z = rho.z;
    rays.seed = seed;
    rays.clipped_mass = negative;

    std::mt19937_64 rng(seed);
    const std::size_t np = rho.grid.p.size();
    for (std::size_t r = 0; r < n; ++r) {
        // 53 random mantissa bits, so the stream is identical on every platform.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u * positive);
        if (it == cdf.end()) --it;
        const auto cell = static_cast<std::size_t>(it - cdf.begin());
        rays.x[r] = rho.grid.x.point(cell / np);
        rays.p[r] = rho.grid.p.point(cell % np);
    }
    return rays;
}

}  // namespace qlbeam
