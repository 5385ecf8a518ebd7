#pragma once

#include <cstdint>
#include <span>

#include "qlbeam/state.hpp"

namespace qlbeam {

/// One coherent Gaussian packet, exp(-(x-x0)^2/(4 sigma_x^2) + i p0 (x-x0)/epsilon).
struct GaussianPacket {
    double sigma_x;
    double x0 = 0.0;
    double p0 = 0.0;
    cplx amplitude = 1.0;
};

/// Peak-relative amplitude that the first and last grid points may not exceed.
inline constexpr double kBoundaryDecay = 1e-12;

WaveField gaussian_wavefield(const AxisGrid &grid, double sigma_x, double x0, double p0,
                             double epsilon);

/// Normalized coherent sum of packets. Throws Error(grid_too_narrow) when
/// |Psi| at either end of the grid exceeds kBoundaryDecay of its peak.
WaveField superposed_wavefield(const AxisGrid &grid, std::span<const GaussianPacket> packets,
                               double epsilon);

/// Two equal packets at x0 -/+ separation/2 (a "cat" state).
WaveField cat_wavefield(const AxisGrid &grid, double sigma_x, double separation, double x0,
                        double p0, double epsilon);

/// Bivariate Gaussian with covariance [[sx^2, sxp], [sxp, sp^2]], normalized on the grid.
QuasiDistribution gaussian_quasidist(const PhaseGrid &grid, double sigma_x, double sigma_p,
                                     double sigma_xp, double x0 = 0.0, double p0 = 0.0,
                                     DistributionKind kind = DistributionKind::classical);

struct GaussianComponent {
    double weight;
    double sigma_x;
    double sigma_p;
    double sigma_xp = 0.0;
    double x0 = 0.0;
    double p0 = 0.0;
};

/// Normalized positive mixture of bivariate Gaussians.
QuasiDistribution gaussian_mixture_quasidist(const PhaseGrid &grid,
                                             std::span<const GaussianComponent> components);

/// Negative mass (relative to total) above which sample_rays refuses a density.
inline constexpr double kNegativeMassLimit = 1e-6;

/// Name of the generator behind sample_rays, recorded in run metadata.
inline constexpr const char *kRngAlgorithm = "mt19937_64";

/// Draws n rays from the grid density. The grid is read as the discrete measure
/// sum_ij rho_ij dx dp delta(x - x_i) delta(p - p_j) implied by the midpoint rule,
/// so rays land on grid nodes and ensemble moments are unbiased for the
/// quadrature moments. Negative cells are clipped (clipped mass recorded) unless
/// their total exceeds kNegativeMassLimit, in which case Error(refuse_negative).
RayEnsemble sample_rays(const QuasiDistribution &rho, std::size_t n, std::uint64_t seed);

}  // namespace qlbeam
