#include "qlbeam/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qlbeam/error.hpp"
#include "qlbeam/fft.hpp"
#include "spectral.hpp"

namespace qlbeam {

namespace {

constexpr double kWignerResidueLimit = 1e-10;

}  // namespace

QuasiDistribution wigner_transform(const WaveField &psi, const AxisGrid &p_axis,
                                   double marginal_tolerance) {
    if (!(psi.epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
    const AxisGrid &x_axis = psi.grid;
    const std::size_t nx = x_axis.size();
    const std::size_t np = p_axis.size();
    const double eps = psi.epsilon;
    const double dy = p_axis.conjugate_spacing();
    const double p0 = p_axis.first();

    FftBatch along_x(nx, 1, 1, nx);
    std::vector<cplx> spectrum(psi.values);
    along_x.forward(spectrum.data());

    // Column m of `table` holds rho~(x, y_m) exp(i p0 y_m), with y_m the signed
    // frequency of bin m. rho~(x, -y) = conj(rho~(x, y)) fills negative bins.
    std::vector<cplx> table(nx * np);
    std::vector<cplx> minus(nx), plus(nx);
    for (std::size_t m = 0; m <= np / 2; ++m) {
        const double y = static_cast<double>(m) * dy;
        const double d = 0.5 * eps * y;
        detail::shifted_samples(x_axis, spectrum, -d, minus, along_x);
        detail::shifted_samples(x_axis, spectrum, d, plus, along_x);
        const cplx phase = std::polar(1.0, p0 * y);
        for (std::size_t i = 0; i < nx; ++i) {
            const cplx v = minus[i] * std::conj(plus[i]) * phase;
            if (m == 0) {
                table[i * np] = v;
            } else if (m < np / 2) {
                table[i * np + m] = v;
                table[i * np + (np - m)] = std::conj(v);
            } else {
                table[i * np + m] = v.real();
            }
        }
    }
    FftBatch along_p(np, nx, 1, np);
    along_p.backward(table.data());

    QuasiDistribution rho{PhaseGrid{x_axis, p_axis}, std::vector<double>(nx * np), psi.z,
                          DistributionKind::wigner};
    const double scale = dy / (2.0 * std::numbers::pi);
    double peak = 0.0, residue = 0.0;
    for (std::size_t k = 0; k < table.size(); ++k) {
        rho.values[k] = table[k].real() * scale;
        peak = std::max(peak, std::abs(rho.values[k]));
        residue = std::max(residue, std::abs(table[k].imag() * scale));
    }
    if (residue > kWignerResidueLimit * std::max(peak, 1.0)) {
        throw Error(ErrorKind::imaginary_residue,
                    "Wigner transform left an imaginary residue of " + value_text(residue));
    }

    const auto marginal = p_marginal(rho);
    const auto phi = momentum_wavefield(psi, p_axis);
    double worst = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
        worst = std::max(worst, std::abs(marginal[j] - std::norm(phi.values[j])));
    }
    if (!(worst <= marginal_tolerance)) {
        throw Error(ErrorKind::p_axis_too_coarse,
                    "momentum marginal misses |Phi|^2 by " + value_text(worst) +
                        "; the p axis must lie within +-eps pi / dx and x_length must exceed eps pi / dp plus the beam extent");
    }
    return rho;
}

MomentumField momentum_wavefield(const WaveField &psi) {
    const AxisGrid &g = psi.grid;
    const std::size_t n = g.size();
    const double eps = psi.epsilon;
    std::vector<cplx> spectrum(psi.values);
    FftBatch fft(n, 1, 1, n);
    fft.forward(spectrum.data());

    AxisGrid p_axis(n, eps * g.conjugate_spacing() * static_cast<double>(n), 0.0);
    MomentumField out{p_axis, std::vector<cplx>(n), eps};
    const double pref = g.spacing() / std::sqrt(2.0 * std::numbers::pi * eps);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t m = (j + n / 2) % n;  // bin holding p = (j - n/2) eps dk
        const double k = g.frequency(m);
        out.values[j] = pref * std::polar(1.0, -k * g.first()) * spectrum[m];
    }
    return out;
}

MomentumField momentum_wavefield(const WaveField &psi, const AxisGrid &p_axis) {
    const AxisGrid &g = psi.grid;
    const double eps = psi.epsilon;
    const double pref = g.spacing() / std::sqrt(2.0 * std::numbers::pi * eps);
    MomentumField out{p_axis, std::vector<cplx>(p_axis.size()), eps};
    for (std::size_t j = 0; j < p_axis.size(); ++j) {
        const double p = p_axis.point(j);
        // exp(-i p x_k / eps) advanced by a fixed rotation per grid point
        const cplx step = std::polar(1.0, -p * g.spacing() / eps);
        cplx rot = std::polar(1.0, -p * g.first() / eps);
        cplx sum = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (k % 64 == 0) rot = std::polar(1.0, -p * g.point(k) / eps);
            sum += psi.values[k] * rot;
            rot *= step;
        }
        out.values[j] = pref * sum;
    }
    return out;
}

std::vector<double> x_marginal(const QuasiDistribution &rho) {
    const auto &g = rho.grid;
    std::vector<double> out(g.x.size(), 0.0);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.p.size(); ++j) out[i] += rho.at(i, j);
        out[i] *= g.p.spacing();
    }
    return out;
}

std::vector<double> p_marginal(const QuasiDistribution &rho) {
    const auto &g = rho.grid;
    std::vector<double> out(g.p.size(), 0.0);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.p.size(); ++j) out[j] += rho.at(i, j);
    }
    for (double &v : out) v *= g.x.spacing();
    return out;
}

Tomogram tomogram(const QuasiDistribution &rho, double mu, double nu, const AxisGrid &axis) {
    if (mu == 0.0 && nu == 0.0) {
        throw Error(ErrorKind::degenerate_parameters, "tomogram needs (mu, nu) != (0, 0)");
    }
    const auto &g = rho.grid;
    const std::size_t nx = g.x.size();
    const std::size_t np = g.p.size();
    const std::size_t nX = axis.size();
    const double dk = axis.conjugate_spacing();
    const double x_limit = g.x.nyquist();
    const double p_limit = g.p.nyquist();
    const double pref = g.cell_area() / axis.length();

    std::vector<cplx> bins(nX, 0.0);
    std::vector<cplx> ex(nx), ep(np);
    for (std::size_t m = 0; m <= nX / 2; ++m) {
        const double kappa = static_cast<double>(m) * dk;
        if (!(std::abs(kappa * mu) < x_limit) || !(std::abs(kappa * nu) < p_limit)) continue;
        for (std::size_t i = 0; i < nx; ++i) ex[i] = std::polar(1.0, -kappa * mu * g.x.point(i));
        for (std::size_t j = 0; j < np; ++j) ep[j] = std::polar(1.0, -kappa * nu * g.p.point(j));
        cplx total = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            cplx row = 0.0;
            const double *r = rho.values.data() + i * np;
            for (std::size_t j = 0; j < np; ++j) row += r[j] * ep[j];
            total += row * ex[i];
        }
        const cplx v = pref * total * std::polar(1.0, kappa * axis.first());
        if (m == 0) {
            bins[0] = v;
        } else if (m < nX / 2) {
            bins[m] = v;
            bins[nX - m] = std::conj(v);
        } else {
            bins[m] = v.real();
        }
    }
    FftBatch fft(nX, 1, 1, nX);
    fft.backward(bins.data());

    Tomogram out{mu, nu, axis, std::vector<double>(nX)};
    for (std::size_t k = 0; k < nX; ++k) out.values[k] = bins[k].real();
    return out;
}

}  // namespace qlbeam
