#include "qlbeam/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qlbeam/error.hpp"
#include "qlbeam/fft.hpp"
#include "spectral.hpp"

namespace qlbeam {

namespace {

void require_normalized(double m, const char *what) {
    if (!(std::abs(m - 1.0) <= kNormalizationTolerance)) {
        throw Error(ErrorKind::non_normalized,
                    std::string(what) + " is not normalized (mass " + value_text(m) + ")");
    }
}

}  // namespace

BeamMoments make_moments(double z, double mean_x, double mean_p, double var_x, double var_p,
                         double cov_xp) {
    BeamMoments m;
    m.z = z;
    m.mean_x = mean_x;
    m.mean_p = mean_p;
    m.sigma_x = std::sqrt(std::max(var_x, 0.0));
    m.sigma_p = std::sqrt(std::max(var_p, 0.0));
    m.sigma_xp = cov_xp;
    m.emittance_rms = 2.0 * std::sqrt(std::max(var_x * var_p - cov_xp * cov_xp, 0.0));
    return m;
}

BeamMoments moments_of(const QuasiDistribution &rho) {
    const auto &g = rho.grid;
    const double area = g.cell_area();
    double m0 = 0.0, sx = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double x = g.x.point(i);
        for (std::size_t j = 0; j < g.p.size(); ++j) {
            const double v = rho.at(i, j);
            m0 += v;
            sx += v * x;
            sp += v * g.p.point(j);
        }
    }
    require_normalized(m0 * area, "phase-space state");
    const double mx = sx / m0;
    const double mp = sp / m0;
    double vxx = 0.0, vpp = 0.0, vxp = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double dx = g.x.point(i) - mx;
        for (std::size_t j = 0; j < g.p.size(); ++j) {
            const double dp = g.p.point(j) - mp;
            const double v = rho.at(i, j);
            vxx += v * dx * dx;
            vpp += v * dp * dp;
            vxp += v * dx * dp;
        }
    }
    return make_moments(rho.z, mx, mp, vxx / m0, vpp / m0, vxp / m0);
}

BeamMoments moments_of(const WaveField &psi) {
    const auto &g = psi.grid;
    const std::size_t n = g.size();
    const double norm = norm_squared(psi);
    require_normalized(norm, "wavefield");
    const double h = g.spacing();

    double mx = 0.0;
    for (std::size_t k = 0; k < n; ++k) mx += std::norm(psi.values[k]) * g.point(k);
    mx *= h / norm;
    double vxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = g.point(k) - mx;
        vxx += std::norm(psi.values[k]) * d * d;
    }
    vxx *= h / norm;

    FftBatch plan(n, 1, 1, n);
    std::vector<cplx> spec(psi.values);
    plan.forward(spec.data());
    double w = 0.0, k1 = 0.0, k2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double pk = std::norm(spec[k]);
        const double kk = g.frequency(k);
        w += pk;
        if (!detail::is_nyquist(k, n)) k1 += pk * kk;
        k2 += pk * kk * kk;
    }
    const double eps = psi.epsilon;
    const double mp = eps * k1 / w;
    const double vpp = eps * eps * k2 / w - mp * mp;

    // <x p>_sym = int x eps Im(conj(Psi) Psi') dx
    std::vector<cplx> deriv(n);
    for (std::size_t k = 0; k < n; ++k) {
        deriv[k] = detail::is_nyquist(k, n) ? cplx(0.0)
                                            : spec[k] * cplx(0.0, g.frequency(k)) / double(n);
    }
    plan.backward(deriv.data());
    double xp = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        xp += (g.point(k) - mx) * (std::conj(psi.values[k]) * deriv[k]).imag();
    }
    xp *= eps * h / norm;
    // x is already centered, so <(x - mx)(p - mp)> = <(x - mx) p>.
    return make_moments(psi.z, mx, mp, vxx, vpp, xp);
}

BeamMoments moments_of(const RayEnsemble &rays) {
    std::size_t live = 0;
    double sx = 0.0, sp = 0.0;
    for (std::size_t r = 0; r < rays.count(); ++r) {
        if (rays.lost[r]) continue;
        ++live;
        sx += rays.x[r];
        sp += rays.p[r];
    }
    if (live < 2) throw Error(ErrorKind::invalid_count, "need at least two live rays for moments");
    const double n = static_cast<double>(live);
    const double mx = sx / n;
    const double mp = sp / n;
    double vxx = 0.0, vpp = 0.0, vxp = 0.0;
    for (std::size_t r = 0; r < rays.count(); ++r) {
        if (rays.lost[r]) continue;
        const double dx = rays.x[r] - mx;
        const double dp = rays.p[r] - mp;
        vxx += dx * dx;
        vpp += dp * dp;
        vxp += dx * dp;
    }
    return make_moments(rays.z, mx, mp, vxx / n, vpp / n, vxp / n);
}

ThermalEmittance emittance_from_thermal(double vth_over_c, double sigma0) {
    if (!(vth_over_c > 0.0) || !(sigma0 > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "v_th/c and sigma0 must be positive");
    }
    return {2.0 * vth_over_c * sigma0, vth_over_c, vth_over_c > 0.1};
}

UncertaintyReport uncertainty_check(const BeamMoments &m, double epsilon) {
    const double product = m.uncertainty_product();
    const double bound = 0.5 * epsilon;
    return {product, bound, product >= bound * (1.0 - 1e-9)};
}

NegativityReport negativity(const QuasiDistribution &rho) {
    double min_value = std::numeric_limits<double>::infinity();
    double total = 0.0, absolute = 0.0, negative = 0.0;
    for (double v : rho.values) {
        min_value = std::min(min_value, v);
        total += v;
        absolute += std::abs(v);
        if (v < 0.0) negative -= v;
    }
    const double area = rho.grid.cell_area();
    return {min_value, negative * area, (absolute - total) / total};
}

std::optional<double> truncation_ratio(const QuasiDistribution &rho, const PotentialSpec &spec,
                                       double epsilon, double z) {
    const auto &g = rho.grid;
    const std::size_t nx = g.x.size();
    const std::size_t np = g.p.size();
    std::vector<cplx> work(rho.values.begin(), rho.values.end());
    FftBatch along_p(np, nx, 1, np);
    along_p.forward(work.data());

    const auto u = spec.at(z);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = g.x.point(i);
        const double force = u.gradient(x);
        for (std::size_t m = 0; m < np; ++m) {
            const double y = g.p.frequency(m);
            const double a = std::norm(work[i * np + m]);
            const double g1 = force * y;
            const double rest = u.generator_remainder(x, y, epsilon);
            den += g1 * g1 * a;
            num += rest * rest * a;
        }
    }
    if (!(den > 0.0) || !std::isfinite(den)) return std::nullopt;
    return std::sqrt(num / den);
}

}  // namespace qlbeam
