#pragma once

#include <optional>

#include "qlbeam/potentials.hpp"
#include "qlbeam/state.hpp"

namespace qlbeam {

/// Central second-order moments of a beam at fixed z.
struct BeamMoments {
    double z = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    double sigma_xp = 0.0;
    double emittance_rms = 0.0;

    double uncertainty_product() const noexcept { return sigma_x * sigma_p; }
};

/// Builds moments from central second moments; emittance_rms =
/// 2 sqrt(vxx vpp - vxp^2) with the radicand clamped at zero.
BeamMoments make_moments(double z, double mean_x, double mean_p, double var_x, double var_p,
                         double cov_xp);

/// Relative mass error above which moments_of rejects a grid state.
inline constexpr double kNormalizationTolerance = 1e-6;

BeamMoments moments_of(const QuasiDistribution &rho);
/// sigma_p from the momentum representation, sigma_xp from the epsilon-scaled
/// probability current epsilon Im(conj(Psi) dPsi/dx).
BeamMoments moments_of(const WaveField &psi);
/// Sample moments over rays not flagged lost; needs at least two of them.
BeamMoments moments_of(const RayEnsemble &rays);

struct ThermalEmittance {
    double epsilon;
    double eta;
    bool paraxial_warning;
};

/// epsilon = 2 (v_th/c) sigma0 and eta = v_th/c; warns when v_th/c > 0.1.
ThermalEmittance emittance_from_thermal(double vth_over_c, double sigma0);

struct UncertaintyReport {
    double product;
    double bound;
    bool satisfied;
};

/// sigma_x sigma_p against epsilon/2, with relative slack 1e-9.
UncertaintyReport uncertainty_check(const BeamMoments &m, double epsilon);

struct NegativityReport {
    double min_value;
    double negative_mass;
    double negativity_volume;
};

NegativityReport negativity(const QuasiDistribution &rho);

/// r3 = ||(G - G1) rho~|| / ||G1 rho~|| over the (x, y) grid, where rho~ is rho
/// transformed along p, G the full Moyal generator and G1 its first-order
/// truncation. Empty when the denominator vanishes (force-free state).
std::optional<double> truncation_ratio(const QuasiDistribution &rho, const PotentialSpec &spec,
                                       double epsilon, double z);

}  // namespace qlbeam
