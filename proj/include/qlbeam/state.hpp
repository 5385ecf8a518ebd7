#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qlbeam/grid.hpp"

namespace qlbeam {

using cplx = std::complex<double>;

/// Beam wavefunction Psi(x) at a fixed z. epsilon plays the role of hbar.
struct WaveField {
    AxisGrid grid;
    std::vector<cplx> values;
    double epsilon;
    double z = 0.0;
};

enum class DistributionKind { classical, wigner };

std::string_view to_string(DistributionKind kind);

/// Real phase-space density rho(x, p) at fixed z. Classical densities and
/// Wigner quasi-distributions share this container and are told apart by `kind`.
struct QuasiDistribution {
    PhaseGrid grid;
    std::vector<double> values;
    double z = 0.0;
    DistributionKind kind = DistributionKind::classical;

    double at(std::size_t ix, std::size_t ip) const { return values[grid.index(ix, ip)]; }
};

/// Classical rays (x_i, p_i). Rays whose coordinates went non-finite while
/// tracing are flagged in `lost` and left out of every moment.
struct RayEnsemble {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<std::uint8_t> lost;
    double z = 0.0;
    std::uint64_t seed = 0;
    double clipped_mass = 0.0;

    std::size_t count() const noexcept { return x.size(); }
    std::size_t lost_count() const noexcept;
};

/// sigma0 and epsilon together with eta = epsilon / (2 sigma0).
class ScaleContext {
  public:
    ScaleContext(double sigma0, double epsilon);

    double sigma0() const noexcept { return sigma0_; }
    double epsilon() const noexcept { return epsilon_; }
    double eta() const noexcept { return eta_; }

  private:
    double sigma0_;
    double epsilon_;
    double eta_;
};

/// x -> x / (2 sigma0); the same scaling applies to z.
double to_scaled(double length, const ScaleContext &ctx) noexcept;
double from_scaled(double scaled, const ScaleContext &ctx) noexcept;

double norm_squared(const WaveField &psi);
double mass(const QuasiDistribution &rho);

/// Throws Error(grid_mismatch) unless the two distributions share a grid.
void require_same_grid(const QuasiDistribution &a, const QuasiDistribution &b);
/// max |a - b| over the shared grid.
double linf_distance(const QuasiDistribution &a, const QuasiDistribution &b);
double max_abs(const QuasiDistribution &rho);

}  // namespace qlbeam
