#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "qlbeam/diagnostics.hpp"
#include "qlbeam/potentials.hpp"
#include "qlbeam/state.hpp"

namespace qlbeam {

/// Which generator drives the momentum kick. truncated(1) is the classical
/// Liouville equation; full() is the deformed (Moyal) equation.
class GeneratorMode {
  public:
    static GeneratorMode full() noexcept { return GeneratorMode(-1); }
    /// Throws Error(even_order) unless order is odd and >= 1.
    static GeneratorMode truncated(int order);

    bool is_full() const noexcept { return order_ < 0; }
    /// -1 for full.
    int order() const noexcept { return order_; }
    bool operator==(const GeneratorMode &) const = default;

  private:
    explicit GeneratorMode(int order) noexcept : order_(order) {}
    int order_;
};

/// Strang splitting is the only scheme; the plan fixes step size, count and generator.
struct StepPlan {
    double dz;
    std::size_t n_steps;
    GeneratorMode mode = GeneratorMode::full();
};

void validate(const StepPlan &plan);

struct StepStats {
    double imaginary_residue = 0.0;  ///< max |Im| / max |rho| after the step
    double max_kick_phase = 0.0;     ///< max |dz G| over the grid
};

/// Limit on the imaginary residue left by a step, relative to max |rho|.
inline constexpr double kImaginaryResidueLimit = 1e-8;

/// One Strang step for rho(x, p): half drift, kick, half drift.
///
/// The drift rho(x, p) <- rho(x - p dz/2, p) is a phase shift per p-row in the
/// x-conjugate variable. The kick transforms p -> y with
/// rho~(x, y) = sum_p rho(x, p) exp(-i p y) dp, multiplies by exp(+i dz G(x, y, z + dz/2))
/// and transforms back; with this transform convention the + sign is what makes
/// dp/dz = -dU/dx. Nyquist bins take the real part of the phase factor so
/// real input stays real.
///
/// Holds FFT plans and cached phase tables, so reuse one stepper for a run.
class PhaseSpaceStepper {
  public:
    PhaseSpaceStepper(const PhaseGrid &grid, PotentialSpec spec, double epsilon, double dz,
                      GeneratorMode mode);
    ~PhaseSpaceStepper();
    PhaseSpaceStepper(PhaseSpaceStepper &&) noexcept;
    PhaseSpaceStepper &operator=(PhaseSpaceStepper &&) noexcept;

    /// Throws Error(kick_phase_overflow) when max |dz G| >= pi and
    /// Error(imaginary_residue) when the residue exceeds kImaginaryResidueLimit.
    QuasiDistribution step(const QuasiDistribution &state, StepStats *stats = nullptr);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

QuasiDistribution step_phase_space(const QuasiDistribution &state, const PotentialSpec &spec,
                                   double epsilon, double dz, GeneratorMode mode);

struct PhaseSpaceTrajectory {
    std::vector<QuasiDistribution> snapshots;
    std::vector<BeamMoments> moments;  ///< initial state plus one entry per step
    double max_imaginary_residue = 0.0;
    double max_kick_phase = 0.0;

    const QuasiDistribution &final_state() const { return snapshots.back(); }
};

/// Called after every step with the step count so far and the new state.
using StepObserver = std::function<void(std::size_t, const QuasiDistribution &)>;

/// Snapshots hold the input, every snapshot_every-th step (0 disables the
/// cadence) and the final state. Solver errors are rethrown with the step index.
PhaseSpaceTrajectory evolve_phase_space(const QuasiDistribution &state, const PotentialSpec &spec,
                                        double epsilon, const StepPlan &plan,
                                        std::size_t snapshot_every,
                                        const StepObserver &observer = {});

struct RayTrajectory {
    std::vector<RayEnsemble> snapshots;
    std::vector<BeamMoments> moments;

    const RayEnsemble &final_state() const { return snapshots.back(); }
};

/// Kick-drift-kick leapfrog for dx/dz = p, dp/dz = -dU/dx, with the force
/// sampled at the step midpoint. Rays that turn non-finite are flagged lost.
RayTrajectory trace_rays(const RayEnsemble &ensemble, const PotentialSpec &spec,
                         const StepPlan &plan, std::size_t snapshot_every);

}  // namespace qlbeam
