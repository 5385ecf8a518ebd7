#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "qlbeam/diagnostics.hpp"
#include "qlbeam/phase_space.hpp"
#include "qlbeam/potentials.hpp"
#include "qlbeam/state.hpp"

namespace qlbeam {

/// Split-step propagator for i eps dPsi/dz = -(eps^2/2) d2Psi/dx2 + U(x, z) Psi.
/// Each step applies half a potential phase, the full kinetic phase
/// exp(-i eps k^2 dz / 2) and another half potential phase, with U sampled at
/// the step midpoint. epsilon comes from the wavefield.
class TwmStepper {
  public:
    /// Throws Error(kinetic_phase_aliasing) when eps k_max^2 dz / 2 >= pi.
    TwmStepper(const AxisGrid &grid, PotentialSpec spec, double epsilon, double dz);
    ~TwmStepper();
    TwmStepper(TwmStepper &&) noexcept;
    TwmStepper &operator=(TwmStepper &&) noexcept;

    /// Throws Error(non_finite) if the result contains NaN or infinity.
    WaveField step(const WaveField &psi);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

WaveField step_twm(const WaveField &psi, const PotentialSpec &spec, double dz);

struct WaveTrajectory {
    std::vector<WaveField> snapshots;
    std::vector<BeamMoments> moments;

    const WaveField &final_state() const { return snapshots.back(); }
};

using WaveObserver = std::function<void(std::size_t, const WaveField &)>;

/// Same snapshot rules as evolve_phase_space. plan.mode is ignored.
WaveTrajectory evolve_twm(const WaveField &psi, const PotentialSpec &spec, const StepPlan &plan,
                          std::size_t snapshot_every, const WaveObserver &observer = {});

/// Stationary rms width in a linear lens, sqrt(eps / (2 sqrt K)). Throws
/// Error(non_focusing) unless spec is a z-independent quadratic with K > 0.
double matched_width(const PotentialSpec &spec, double epsilon);

/// sigma0 sqrt(1 + (eps z / (2 sigma0^2))^2)
double free_gaussian_sigma(double sigma0, double epsilon, double z);

/// <-(eps^2/2) d2/dx2 + U(x, z)>
double twm_energy(const WaveField &psi, const PotentialSpec &spec, double z);

}  // namespace qlbeam
