#include "qlbeam/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "qlbeam/error.hpp"
#include "qlbeam/fft.hpp"
#include "spectral.hpp"

namespace qlbeam {

GeneratorMode GeneratorMode::truncated(int order) {
    if (order < 1 || order % 2 == 0) {
        throw Error(ErrorKind::even_order,
                    "truncation order must be odd and >= 1, got " + std::to_string(order));
    }
    return GeneratorMode(order);
}

void validate(const StepPlan &plan) {
    if (!(plan.dz > 0.0) || !std::isfinite(plan.dz)) {
        throw Error(ErrorKind::invalid_argument, "step size dz must be positive and finite");
    }
}

struct PhaseSpaceStepper::Impl {
    PhaseGrid grid;
    PotentialSpec spec;
    double epsilon;
    double dz;
    GeneratorMode mode;
    FftBatch along_x;
    FftBatch along_p;
    std::vector<cplx> drift;  // half-step shear, laid out like the x-transformed buffer
    std::vector<cplx> kick;
    std::optional<double> kick_z;  // midpoint the kick table was built for
    double max_kick_phase = 0.0;
    std::vector<cplx> work;

    Impl(const PhaseGrid &g, PotentialSpec s, double eps, double h, GeneratorMode m)
        : grid(g),
          spec(std::move(s)),
          epsilon(eps),
          dz(h),
          mode(m),
          along_x(g.x.size(), g.p.size(), g.p.size(), 1),
          along_p(g.p.size(), g.x.size(), 1, g.p.size()),
          drift(g.size()),
          kick(g.size()),
          work(g.size()) {
        const std::size_t nx = grid.x.size();
        const std::size_t np = grid.p.size();
        const double inv_nx = 1.0 / static_cast<double>(nx);
        for (std::size_t m = 0; m < nx; ++m) {
            const double k = grid.x.frequency(m);
            const bool nyq = detail::is_nyquist(m, nx);
            for (std::size_t j = 0; j < np; ++j) {
                drift[m * np + j] = detail::bin_phase(-k * grid.p.point(j) * 0.5 * dz, nyq) * inv_nx;
            }
        }
    }

    void build_kick(double z_mid) {
        if (kick_z && (spec.is_z_independent() || *kick_z == z_mid)) return;
        const std::size_t nx = grid.x.size();
        const std::size_t np = grid.p.size();
        const double inv_np = 1.0 / static_cast<double>(np);
        const auto u = spec.at(z_mid);
        double worst = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = grid.x.point(i);
            for (std::size_t m = 0; m < np; ++m) {
                const double phase = dz * u.generator(x, grid.p.frequency(m), epsilon, mode.order());
                worst = std::max(worst, std::abs(phase));
                kick[i * np + m] = detail::bin_phase(phase, detail::is_nyquist(m, np)) * inv_np;
            }
        }
        if (!(worst < std::numbers::pi)) {
            throw Error(ErrorKind::kick_phase_overflow,
                        "max |dz G| = " + value_text(worst) +
                            " reaches pi; reduce dz or the momentum resolution");
        }
        max_kick_phase = worst;
        kick_z = z_mid;
    }

    void half_drift() {
        along_x.forward(work.data());
        for (std::size_t k = 0; k < work.size(); ++k) work[k] *= drift[k];
        along_x.backward(work.data());
    }

    void apply_kick() {
        along_p.forward(work.data());
        for (std::size_t k = 0; k < work.size(); ++k) work[k] *= kick[k];
        along_p.backward(work.data());
    }
};

PhaseSpaceStepper::PhaseSpaceStepper(const PhaseGrid &grid, PotentialSpec spec, double epsilon,
                                     double dz, GeneratorMode mode)
    : impl_(std::make_unique<Impl>(grid, std::move(spec), epsilon, dz, mode)) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
    validate(StepPlan{dz, 1, mode});
}

PhaseSpaceStepper::~PhaseSpaceStepper() = default;
PhaseSpaceStepper::PhaseSpaceStepper(PhaseSpaceStepper &&) noexcept = default;
PhaseSpaceStepper &PhaseSpaceStepper::operator=(PhaseSpaceStepper &&) noexcept = default;

QuasiDistribution PhaseSpaceStepper::step(const QuasiDistribution &state, StepStats *stats) {
    auto &s = *impl_;
    if (!(state.grid == s.grid)) {
        throw Error(ErrorKind::grid_mismatch, "state grid differs from the stepper grid");
    }
    s.build_kick(state.z + 0.5 * s.dz);
    std::copy(state.values.begin(), state.values.end(), s.work.begin());
    s.half_drift();
    s.apply_kick();
    s.half_drift();

    QuasiDistribution out{state.grid, std::vector<double>(state.values.size()), state.z + s.dz,
                          state.kind};
    double peak = 0.0, residue = 0.0;
    for (std::size_t k = 0; k < s.work.size(); ++k) {
        out.values[k] = s.work[k].real();
        peak = std::max(peak, std::abs(s.work[k].real()));
        residue = std::max(residue, std::abs(s.work[k].imag()));
    }
    if (!std::isfinite(peak)) throw Error(ErrorKind::non_finite, "phase-space state became non-finite");
    const double relative = peak > 0.0 ? residue / peak : residue;
    if (relative > kImaginaryResidueLimit) {
        throw Error(ErrorKind::imaginary_residue,
                    "imaginary residue " + value_text(relative) + " of max |rho| after step");
    }
    if (stats) *stats = {relative, s.max_kick_phase};
    return out;
}

QuasiDistribution step_phase_space(const QuasiDistribution &state, const PotentialSpec &spec,
                                   double epsilon, double dz, GeneratorMode mode) {
    PhaseSpaceStepper stepper(state.grid, spec, epsilon, dz, mode);
    return stepper.step(state);
}

PhaseSpaceTrajectory evolve_phase_space(const QuasiDistribution &state, const PotentialSpec &spec,
                                        double epsilon, const StepPlan &plan,
                                        std::size_t snapshot_every, const StepObserver &observer) {
    validate(plan);
    PhaseSpaceTrajectory traj;
    traj.snapshots.push_back(state);
    traj.moments.push_back(moments_of(state));
    if (plan.n_steps == 0) return traj;

    PhaseSpaceStepper stepper(state.grid, spec, epsilon, plan.dz, plan.mode);
    QuasiDistribution current = state;
    for (std::size_t s = 1; s <= plan.n_steps; ++s) {
        StepStats stats;
        try {
            current = stepper.step(current, &stats);
            current.z = state.z + static_cast<double>(s) * plan.dz;
            traj.moments.push_back(moments_of(current));
        } catch (const Error &e) {
            throw Error(e.kind(), "step " + std::to_string(s) + ": " + e.what());
        }
        traj.max_imaginary_residue = std::max(traj.max_imaginary_residue, stats.imaginary_residue);
        traj.max_kick_phase = std::max(traj.max_kick_phase, stats.max_kick_phase);
        if (observer) observer(s, current);
        const bool cadence = snapshot_every != 0 && s % snapshot_every == 0;
        if (cadence || s == plan.n_steps) traj.snapshots.push_back(current);
    }
    return traj;
}

RayTrajectory trace_rays(const RayEnsemble &ensemble, const PotentialSpec &spec,
                         const StepPlan &plan, std::size_t snapshot_every) {
    validate(plan);
    if (ensemble.count() == 0) throw Error(ErrorKind::invalid_count, "empty ray ensemble");
    RayTrajectory traj;
    traj.snapshots.push_back(ensemble);
    traj.moments.push_back(moments_of(ensemble));

    RayEnsemble rays = ensemble;
    const double h = plan.dz;
    for (std::size_t s = 1; s <= plan.n_steps; ++s) {
        const auto u = spec.at(rays.z + 0.5 * h);
        for (std::size_t r = 0; r < rays.count(); ++r) {
            if (rays.lost[r]) continue;
            double x = rays.x[r];
            double p = rays.p[r];
            p -= 0.5 * h * u.gradient(x);
            x += h * p;
            p -= 0.5 * h * u.gradient(x);
            if (!std::isfinite(x) || !std::isfinite(p)) {
                rays.lost[r] = 1;
                continue;
            }
            rays.x[r] = x;
            rays.p[r] = p;
        }
        rays.z = ensemble.z + static_cast<double>(s) * h;
        traj.moments.push_back(moments_of(rays));
        const bool cadence = snapshot_every != 0 && s % snapshot_every == 0;
        if (cadence || s == plan.n_steps) traj.snapshots.push_back(rays);
    }
    return traj;
}

}  // namespace qlbeam
