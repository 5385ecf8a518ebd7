#include "qlbeam/twm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "qlbeam/error.hpp"
#include "qlbeam/fft.hpp"
#include "spectral.hpp"

namespace qlbeam {

struct TwmStepper::Impl {
    AxisGrid grid;
    PotentialSpec spec;
    double epsilon;
    double dz;
    FftBatch fft;
    std::vector<cplx> kinetic;
    std::vector<cplx> half_potential;
    std::optional<double> potential_z;
    std::vector<cplx> work;

    Impl(const AxisGrid &g, PotentialSpec s, double eps, double h)
        : grid(g),
          spec(std::move(s)),
          epsilon(eps),
          dz(h),
          fft(g.size(), 1, 1, g.size()),
          kinetic(g.size()),
          half_potential(g.size()),
          work(g.size()) {
        const double kmax = grid.nyquist();
        const double worst = 0.5 * epsilon * kmax * kmax * dz;
        if (!(worst < std::numbers::pi)) {
            throw Error(ErrorKind::kinetic_phase_aliasing,
                        "kinetic phase eps k_max^2 dz / 2 = " + value_text(worst) +
                            " reaches pi; reduce dz or coarsen the x grid");
        }
        const double inv_n = 1.0 / static_cast<double>(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double kk = grid.frequency(k);
            kinetic[k] = std::polar(inv_n, -0.5 * epsilon * kk * kk * dz);
        }
    }

    void build_potential(double z_mid) {
        if (potential_z && (spec.is_z_independent() || *potential_z == z_mid)) return;
        const auto u = spec.at(z_mid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            half_potential[k] = std::polar(1.0, -u.value(grid.point(k)) * dz / (2.0 * epsilon));
        }
        potential_z = z_mid;
    }
};

TwmStepper::TwmStepper(const AxisGrid &grid, PotentialSpec spec, double epsilon, double dz) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
    validate(StepPlan{dz, 1});
    impl_ = std::make_unique<Impl>(grid, std::move(spec), epsilon, dz);
}

TwmStepper::~TwmStepper() = default;
TwmStepper::TwmStepper(TwmStepper &&) noexcept = default;
TwmStepper &TwmStepper::operator=(TwmStepper &&) noexcept = default;

WaveField TwmStepper::step(const WaveField &psi) {
    auto &s = *impl_;
    if (!(psi.grid == s.grid)) throw Error(ErrorKind::grid_mismatch, "wavefield grid differs from stepper grid");
    s.build_potential(psi.z + 0.5 * s.dz);
    const std::size_t n = s.grid.size();
    for (std::size_t k = 0; k < n; ++k) s.work[k] = psi.values[k] * s.half_potential[k];
    s.fft.forward(s.work.data());
    for (std::size_t k = 0; k < n; ++k) s.work[k] *= s.kinetic[k];
    s.fft.backward(s.work.data());
    WaveField out{psi.grid, std::vector<cplx>(n), psi.epsilon, psi.z + s.dz};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = s.work[k] * s.half_potential[k];
        if (!std::isfinite(out.values[k].real()) || !std::isfinite(out.values[k].imag())) {
            throw Error(ErrorKind::non_finite, "wavefield became non-finite");
        }
    }
    return out;
}

WaveField step_twm(const WaveField &psi, const PotentialSpec &spec, double dz) {
    TwmStepper stepper(psi.grid, spec, psi.epsilon, dz);
    return stepper.step(psi);
}

WaveTrajectory evolve_twm(const WaveField &psi, const PotentialSpec &spec, const StepPlan &plan,
                          std::size_t snapshot_every, const WaveObserver &observer) {
    validate(plan);
    WaveTrajectory traj;
    traj.snapshots.push_back(psi);
    traj.moments.push_back(moments_of(psi));
    if (plan.n_steps == 0) return traj;

    TwmStepper stepper(psi.grid, spec, psi.epsilon, plan.dz);
    WaveField current = psi;
    for (std::size_t s = 1; s <= plan.n_steps; ++s) {
        try {
            current = stepper.step(current);
            current.z = psi.z + static_cast<double>(s) * plan.dz;
            traj.moments.push_back(moments_of(current));
        } catch (const Error &e) {
            throw Error(e.kind(), "step " + std::to_string(s) + ": " + e.what());
        }
        if (observer) observer(s, current);
        const bool cadence = snapshot_every != 0 && s % snapshot_every == 0;
        if (cadence || s == plan.n_steps) traj.snapshots.push_back(current);
    }
    return traj;
}

double matched_width(const PotentialSpec &spec, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
    double K = 0.0;
    for (const auto &t : spec.terms()) {
        const auto *c = std::get_if<ConstantProfile>(&t.coefficient);
        if (!c) throw Error(ErrorKind::non_focusing, "matched width needs z-independent focusing");
        if (t.power == 2) {
            K = 2.0 * c->value;
        } else if (t.power != 0 && c->value != 0.0) {
            throw Error(ErrorKind::non_focusing, "matched width needs a purely quadratic lens");
        }
    }
    if (!(K > 0.0)) throw Error(ErrorKind::non_focusing, "lens strength K must be positive");
    return std::sqrt(epsilon / (2.0 * std::sqrt(K)));
}

double free_gaussian_sigma(double sigma0, double epsilon, double z) {
    if (!(sigma0 > 0.0)) throw Error(ErrorKind::invalid_argument, "sigma0 must be positive");
    const double r = epsilon * z / (2.0 * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + r * r);
}

double twm_energy(const WaveField &psi, const PotentialSpec &spec, double z) {
    const std::size_t n = psi.grid.size();
    FftBatch fft(n, 1, 1, n);
    std::vector<cplx> spec_values(psi.values);
    fft.forward(spec_values.data());
    double w = 0.0, k2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double pk = std::norm(spec_values[k]);
        const double kk = psi.grid.frequency(k);
        w += pk;
        k2 += pk * kk * kk;
    }
    const auto u = spec.at(z);
    double pot = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = std::norm(psi.values[k]);
        pot += d * u.value(psi.grid.point(k));
        norm += d;
    }
    return 0.5 * psi.epsilon * psi.epsilon * k2 / w + pot / norm;
}

}  // namespace qlbeam
