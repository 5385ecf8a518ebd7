#pragma once

#include <vector>

#include "qlbeam/state.hpp"

namespace qlbeam {

/// Default tolerance of the marginal identities checked by wigner_transform.
inline constexpr double kMarginalTolerance = 1e-10;

/// Wigner transform of a pure state onto (psi.grid, p_axis):
///
///   rho_w(x, p) = 1/(pi eps) int Psi(x + s) conj(Psi(x - s)) exp(-2 i p s / eps) ds.
///
/// Evaluated as rho~(x, y) = Psi(x - eps y/2) conj(Psi(x + eps y/2)) on the grid
/// conjugate to p_axis (shifts by spectral interpolation), then one inverse FFT per x.
/// Throws Error(p_axis_too_coarse) when int rho_w dx differs from |Phi_eps(p)|^2
/// by more than marginal_tolerance anywhere on p_axis.
QuasiDistribution wigner_transform(const WaveField &psi, const AxisGrid &p_axis,
                                   double marginal_tolerance = kMarginalTolerance);

/// Phi_eps(p) = (2 pi eps)^(-1/2) int Psi(x) exp(-i p x / eps) dx on a momentum axis.
struct MomentumField {
    AxisGrid p_axis;
    std::vector<cplx> values;
    double epsilon;
};

/// On the native axis p = eps k (n points, spacing 2 pi eps / length, centered at 0), via FFT.
MomentumField momentum_wavefield(const WaveField &psi);
/// On an arbitrary axis, by direct midpoint quadrature.
MomentumField momentum_wavefield(const WaveField &psi, const AxisGrid &p_axis);

/// int rho dp, one value per x.
std::vector<double> x_marginal(const QuasiDistribution &rho);
/// int rho dx, one value per p.
std::vector<double> p_marginal(const QuasiDistribution &rho);

/// Marginal density of X = mu x + nu p.
struct Tomogram {
    double mu;
    double nu;
    AxisGrid axis;
    std::vector<double> values;
};

/// w(X) = int int rho(x, p) delta(X - mu x - nu p) dx dp. Computed through its
/// Fourier transform along X, which is the 2-D transform of rho on the line
/// (kappa mu, kappa nu); frequencies beyond the Nyquist limit of either the
/// input grid or the output axis are dropped. Throws Error(degenerate_parameters)
/// for (mu, nu) = (0, 0).
Tomogram tomogram(const QuasiDistribution &rho, double mu, double nu, const AxisGrid &axis);

}  // namespace qlbeam
