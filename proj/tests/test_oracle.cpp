#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pshlab/catalog.hpp"
#include "pshlab/fiber.hpp"
#include "pshlab/oracle.hpp"

using namespace pshlab;

namespace {

bool smooth(const FunctionSpec& f) { return f.smooth_off_origin && f.kind != Kind::MaxOfLogs; }

const double kPi2 = kPi * kPi;

}  // namespace

TEST(Oracle, DensityExamples) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Point p = random_point(rng, 0.05, 0.95);
        EXPECT_NEAR(ma_density(builtin("abs2"), p), 8.0, 1e-5);
        EXPECT_NEAR(ma_density(builtin("log-z"), p), 0.0, 1e-10);
    }
    EXPECT_NEAR(ma_density(builtin("u1-n5"), Point::from(0.1, 0.2)), 0.0, 1e-8);
    EXPECT_THROW(ma_density(builtin("max-demailly-m2"), Point::from(0.1, 0.2)), SmoothnessError);
    EXPECT_THROW(ma_density(builtin("log-z"), Point{}), DomainError);
    EXPECT_THROW(ma_density(builtin("log-z"), Point::from(1.0, 0.5)), DomainError);
}

TEST(Oracle, ComplexHessianDeterminant) {
    // u = |z1|^2 + 2|z2|^2: u_{1 1bar} = 1, u_{2 2bar} = 2
    Mat4 H{};
    H[0][0] = H[1][1] = 2;
    H[2][2] = H[3][3] = 4;
    EXPECT_DOUBLE_EQ(complex_hessian_det(H), 2.0);
}

TEST(Oracle, MassBallExamples) {
    auto m = ma_mass_ball(builtin("abs2"), 0.5);
    EXPECT_NEAR(m.value, kPi2 / 4, 1e-6 * kPi2);
    EXPECT_EQ(m.method, MassMethod::Grid4D);
    for (double r : {0.1, 0.5, 0.9}) {
        m = ma_mass_ball(builtin("log-z"), r);
        EXPECT_NEAR(m.value, kPi2, 1e-8 * kPi2) << r;
        EXPECT_TRUE(m.atomic_shortcut);
    }
    m = ma_mass_ball(builtin("u1-n5"), 0.3);
    EXPECT_NEAR(m.value, kPi2 / 5, 0.01 * kPi2 / 5);
    EXPECT_THROW(ma_mass_ball(builtin("log-z"), 1.0), DomainError);
    EXPECT_THROW(ma_mass_ball(builtin("max-demailly-m2"), 0.5), SmoothnessError);
}

TEST(Oracle, MassBallMonteCarloReproducible) {
    MassOptions opt;
    opt.mc_samples = 20000;
    opt.seed = 11;
    const auto a = ma_mass_ball(builtin("abs2"), 0.5, MassMethod::MonteCarlo, opt);
    const auto b = ma_mass_ball(builtin("abs2"), 0.5, MassMethod::MonteCarlo, opt);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.seed, 11u);
    EXPECT_NEAR(a.value, kPi2 / 4, std::max(a.error, 1e-3));
}

TEST(Oracle, StokesFlux) {
    for (double r : {0.2, 0.7}) {
        EXPECT_NEAR(stokes_flux(builtin("log-z"), r).value, kPi2, 1e-9 * kPi2);
        EXPECT_NEAR(stokes_flux(builtin("radial-a2"), r).value, 4 * kPi2, 1e-9 * kPi2);
        EXPECT_NEAR(stokes_flux(builtin("abs2"), r).value, 4 * kPi2 * std::pow(r, 4), 1e-6 * kPi2 * std::pow(r, 4));
    }
}

TEST(Oracle, ToricExamples) {
    // abs2 is differentiated by stencils; h^2 truncation is about 1e-8 relative
    auto m = toric_mass(builtin("abs2"), 0.5);
    EXPECT_NEAR(m.total, kPi2 / 4, 1e-7 * kPi2 / 4);
    m = toric_mass(make_smoothed_max("sq", 1.0, 2.0, 2.0), 0.5);
    EXPECT_NEAR(m.total, 4 * kPi2, 1e-8);
    m = toric_mass(builtin("demailly-m2"), std::exp(-2.0));
    EXPECT_NEAR(m.shell, 0.0, 1e-8);
    EXPECT_NEAR(m.boundary, kPi2, 0.01 * kPi2);
    for (double a : {0.5, 1.0, 2.0}) EXPECT_NEAR(toric_mass(make_radial("r", a), 0.5).total, a * a * kPi2, 1e-9);
    EXPECT_THROW(toric_mass(builtin("u1-n5"), 0.5), ArgumentError);
    EXPECT_THROW(toric_mass(builtin("abs2"), 0.5, 64, 0.6), DomainError);
}

TEST(Oracle, ResidualMassExamples) {
    auto sched = [](const char* n) { return default_schedule(builtin(n)); };
    auto e = residual_mass(builtin("log-z"), sched("log-z"));
    EXPECT_NEAR(e.value, 1.0, 1e-12);
    EXPECT_EQ(e.method, TauMethod::BoundaryK);
    e = residual_mass(builtin("demailly-m2"), sched("demailly-m2"));
    EXPECT_NEAR(e.value, 1.0, 0.01);
    EXPECT_LE(e.lower, e.value);
    EXPECT_GE(e.upper, e.value);
    e = residual_mass(builtin("u2-n5"), sched("u2-n5"));
    EXPECT_NEAR(e.value, 1.0, 0.01);
    EXPECT_THROW(residual_mass(builtin("coman-guedj-n5"), {-5, -20}, 64, 128, true), InvarianceError);
    EXPECT_THROW(residual_mass(builtin("log-z"), {-20, -5}), ArgumentError);
    EXPECT_THROW(residual_mass(builtin("max-demailly-m2"), {-5, -20}), SmoothnessError);
}

TEST(Oracle, VerifyBoundsExamples) {
    auto r = verify_bounds(builtin("demailly-m2"));
    EXPECT_NEAR(r.tau.value, 1.0, 0.01);
    EXPECT_NEAR(r.upper_bound, 2.25, 1e-3);
    EXPECT_TRUE(r.verdict_lower);
    EXPECT_TRUE(r.verdict_upper);
    EXPECT_TRUE(r.upper_applicable);
    r = verify_bounds(builtin("u1-n5"));
    EXPECT_NEAR(r.tau.value, 0.2, 1e-3);
    EXPECT_NEAR(r.upper_bound, 0.44, 1e-2);
    EXPECT_TRUE(r.verdict_upper);
    r = verify_bounds(builtin("max-demailly-m2"));
    EXPECT_TRUE(r.skipped);
}

TEST(Oracle, VerifyBoundsComanGuedj) {
    const auto r = verify_bounds(builtin("coman-guedj-n5"));
    EXPECT_FALSE(r.s1.invariant);
    EXPECT_FALSE(r.upper_applicable);
    EXPECT_EQ(r.tau.method, TauMethod::VolumeOracle);
    EXPECT_NEAR(r.tau.value, 1.0, 0.05);
    EXPECT_NEAR(r.upper_bound, 0.44, 1e-2);
    EXPECT_FALSE(r.verdict_upper);
    EXPECT_TRUE(r.verdict_lower);
    EXPECT_NE(r.note.find("not S^1-invariant"), std::string::npos);
}

TEST(OracleProperty, DensityNonnegative) {
    std::mt19937_64 rng(17);
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!smooth(f)) continue;
        // Roundoff in det scales with |Hessian|^2; (Delta u)^2 / 8 bounds 8 det from above.
        for (int i = 0; i < 500; ++i) {
            const Point p = random_point(rng, 0.01, 0.99);
            const auto d = real_derivs(f, {p.z1_re, p.z1_im, p.z2_re, p.z2_im});
            const double lap = d.H[0][0] + d.H[1][1] + d.H[2][2] + d.H[3][3];
            ASSERT_GE(ma_density(f, p), -1e-9 - 1e-12 * lap * lap / 8) << n << " |p|=" << p.norm();
        }
    }
}

TEST(OracleProperty, LowerBoundAndBoundaryVersusVolume) {
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!smooth(f) || !f.s1_invariant) continue;
        const auto r = verify_bounds(f);
        EXPECT_TRUE(r.verdict_lower) << n;
        EXPECT_TRUE(r.verdict_upper) << n;
        EXPECT_NEAR(r.tau.check_boundary, r.tau.check_volume, 0.01 * std::max(std::abs(r.tau.check_volume), 1e-6))
            << n;
    }
}

TEST(OracleProperty, HomogeneousMembersHaveConstantK) {
    for (const char* n : {"log-z", "radial-a0.5", "radial-a2"}) {
        const auto f = builtin(n);
        const auto g = make_adapted_grid(f, -30);
        const double k0 = functionals_at(f, -1, g).K;
        for (double t : {-5.0, -15.0, -30.0}) EXPECT_NEAR(functionals_at(f, t, g).K, k0, 1e-6) << n;
    }
}

TEST(OracleProperty, ToricAgreesWithGenericPath) {
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!smooth(f) || !f.toric) continue;
        const double r = std::exp(-2.0);
        const double a = toric_mass(f, r).total, b = ma_mass_ball(f, r).value;
        EXPECT_NEAR(a, b, 1e-6 * std::max(1.0, std::abs(b))) << n;
    }
}
