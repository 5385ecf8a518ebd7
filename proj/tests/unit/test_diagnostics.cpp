#include <gtest/gtest.h>

#include <cmath>

#include "qlbeam/diagnostics.hpp"
#include "qlbeam/error.hpp"
#include "qlbeam/initial.hpp"
#include "qlbeam/phase_space.hpp"
#include "qlbeam/transforms.hpp"

using namespace qlbeam;

namespace {

PhaseGrid beam_grid() { return {AxisGrid(128, 16.0), AxisGrid(128, 0.8)}; }

}  // namespace

TEST(Moments, CorrelatedGaussianEmittance) {
    const auto rho = gaussian_quasidist(beam_grid(), 1.0, 0.05, 0.03);
    const auto m = moments_of(rho);
    EXPECT_NEAR(m.sigma_xp, 0.03, 1e-10);
    // 2 sqrt(1 * 0.0025 - 0.0009) = 0.08
    EXPECT_NEAR(m.emittance_rms, 0.08, 1e-9);
}

TEST(Moments, CentralAboutTheMean) {
    const PhaseGrid g{AxisGrid(128, 24.0), AxisGrid(128, 1.2)};
    const auto rho = gaussian_quasidist(g, 1.0, 0.05, 0.0, 2.0, 0.1);
    const auto m = moments_of(rho);
    EXPECT_NEAR(m.mean_x, 2.0, 1e-10);
    EXPECT_NEAR(m.mean_p, 0.1, 1e-10);
    EXPECT_NEAR(m.sigma_x, 1.0, 1e-10);
}

TEST(Moments, UnnormalizedStateRejected) {
    auto rho = gaussian_quasidist(beam_grid(), 1.0, 0.05, 0.0);
    for (double &v : rho.values) v *= 1.01;
    try {
        moments_of(rho);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_normalized);
    }
}

TEST(Moments, RaysNeedTwo) {
    RayEnsemble one{{1.0}, {0.0}, {0}, 0.0, 0, 0.0};
    EXPECT_THROW(moments_of(one), Error);
    RayEnsemble two{{1.0, -1.0}, {0.5, -0.5}, {0, 0}, 0.0, 0, 0.0};
    const auto m = moments_of(two);
    EXPECT_DOUBLE_EQ(m.sigma_x, 1.0);
    EXPECT_DOUBLE_EQ(m.sigma_xp, 0.5);
    EXPECT_DOUBLE_EQ(m.emittance_rms, 0.0);
}

TEST(Thermal, Examples) {
    const auto a = emittance_from_thermal(0.01, 1.0);
    EXPECT_DOUBLE_EQ(a.epsilon, 0.02);
    EXPECT_DOUBLE_EQ(a.eta, 0.01);
    EXPECT_FALSE(a.paraxial_warning);
    const auto b = emittance_from_thermal(0.05, 2.0);
    EXPECT_DOUBLE_EQ(b.epsilon, 0.2);
    EXPECT_DOUBLE_EQ(b.eta, 0.05);
    const auto c = emittance_from_thermal(0.5, 1.0);
    EXPECT_DOUBLE_EQ(c.epsilon, 1.0);
    EXPECT_TRUE(c.paraxial_warning);
    EXPECT_THROW(emittance_from_thermal(0.0, 1.0), Error);
    EXPECT_THROW(emittance_from_thermal(0.1, -1.0), Error);
}

TEST(Uncertainty, EqualityAndViolation) {
    const auto m = make_moments(0.0, 0.0, 0.0, 1.0, 0.0025, 0.0);
    const auto ok = uncertainty_check(m, 0.1);
    EXPECT_DOUBLE_EQ(ok.product, 0.05);
    EXPECT_DOUBLE_EQ(ok.bound, 0.05);
    EXPECT_TRUE(ok.satisfied);
    const auto bad = uncertainty_check(make_moments(0.0, 0.0, 0.0, 1.0, 0.0024, 0.0), 0.1);
    EXPECT_FALSE(bad.satisfied);
}

TEST(Negativity, GaussianAndCat) {
    const AxisGrid gx(256, 24.0);
    const AxisGrid gp(256, 32.0);
    const auto g = wigner_transform(gaussian_wavefield(gx, 0.5, 0.0, 0.0, 0.5), gp);
    EXPECT_LE(negativity(g).negativity_volume, 1e-12);
    const auto cat = wigner_transform(cat_wavefield(gx, 0.5, 2.0, 0.0, 0.0, 0.5), gp);
    const auto r = negativity(cat);
    EXPECT_GT(r.negativity_volume, 0.0);
    EXPECT_LT(r.min_value, 0.0);
    EXPECT_NEAR(r.negativity_volume, 2.0 * r.negative_mass, 1e-12);
    // Closed-form cat Wigner function sampled on this 256 x 256 grid; the continuum
    // value is about 0.20824.
    constexpr double kCatNegativityVolume = 0.20987612538424616;
    EXPECT_NEAR(r.negativity_volume, kCatNegativityVolume, 1e-8);
}

TEST(TruncationRatio, QuadraticAndFreeSpace) {
    const PhaseGrid g{AxisGrid(64, 12.0), AxisGrid(64, 12.0)};
    const auto rho = gaussian_quasidist(g, 0.7, 0.5, 0.0, 0.5, 0.0);
    EXPECT_EQ(truncation_ratio(rho, PotentialSpec::linear_lens(1.0), 0.2, 0.0), 0.0);
    EXPECT_FALSE(truncation_ratio(rho, PotentialSpec::free_space(), 0.2, 0.0).has_value());
}

TEST(TruncationRatio, ScalesAsEpsilonSquared) {
    const PhaseGrid g{AxisGrid(64, 12.0), AxisGrid(64, 12.0)};
    const auto rho = gaussian_quasidist(g, 0.7, 0.5, 0.0, 0.5, 0.0);
    const auto spec = PotentialSpec::quartic(1.0, 0.1);
    const double r1 = *truncation_ratio(rho, spec, 0.2, 0.0);
    const double r2 = *truncation_ratio(rho, spec, 0.1, 0.0);
    EXPECT_GT(r1, 0.0);
    EXPECT_NEAR(r1 / r2, 4.0, 0.4);
}
