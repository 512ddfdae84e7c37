#include <gtest/gtest.h>

#include <cmath>

#include "pshlab/catalog.hpp"
#include "pshlab/quadrature.hpp"
#include "pshlab/ray.hpp"

using namespace pshlab;

namespace {

bool invariant_smooth(const FunctionSpec& f) {
    return f.smooth_off_origin && f.kind != Kind::MaxOfLogs && f.s1_invariant;
}

RayTrace trace_adapted(const FunctionSpec& f, double t_min, double t_max, double step) {
    return trace(f, t_range(t_min, t_max, step), make_adapted_grid(f, t_min));
}

}  // namespace

TEST(Ray, TraceExamples) {
    const auto g = make_grid(16, 32);
    auto tr = trace(builtin("log-z"), {-3, -2, -1}, g);
    ASSERT_EQ(tr.records.size(), 3u);
    EXPECT_EQ(tr.f_name, "log-z");
    EXPECT_EQ(tr.n_theta, 16);
    for (const auto& r : tr.records) {
        EXPECT_NEAR(r.I, kPi, 1e-12);
        EXPECT_NEAR(r.J, kPi, 1e-12);
        EXPECT_NEAR(r.K, kPi, 1e-12);
        EXPECT_NEAR(r.E, 0.0, 1e-12);
    }
    tr = trace(builtin("abs2"), {-3, -2, -1}, g);
    for (std::size_t i = 0; i < 3; ++i) {
        const double k = 4 * kPi * std::exp(4 * tr.records[i].t);
        EXPECT_NEAR(tr.records[i].K, k, 1e-7 * k);
        if (i > 0) EXPECT_GT(tr.records[i].K, tr.records[i - 1].K);
    }
    const auto f = builtin("demailly-m2");
    tr = trace_adapted(f, -30, -2.5, 2.5);
    for (std::size_t i = 1; i < tr.records.size(); ++i) EXPECT_GE(tr.records[i].I, tr.records[i - 1].I - 1e-12);
    EXPECT_GT(tr.records.back().I, tr.records.front().I + 1e-6);
    EXPECT_NEAR(tr.records.front().I, 0.5 * kPi, 1e-9);
}

TEST(Ray, TraceErrors) {
    const auto g = make_grid(8, 8);
    const auto f = builtin("log-z");
    EXPECT_THROW(trace(f, {}, g), ArgumentError);
    EXPECT_THROW(trace(f, {-2, 0}, g), DomainError);
    EXPECT_THROW(trace(f, {-1, -2}, g), ArgumentError);
    EXPECT_THROW(t_range(-1, -2, 0.1), ArgumentError);
    EXPECT_EQ(t_range(-2, -1, 0.25).size(), 5u);
}

TEST(Ray, DecompositionIdentityExamples) {
    auto c = check_decomposition_identity(trace(builtin("log-z"), t_range(-5, -1, 0.5), make_grid(16, 32)));
    EXPECT_LE(c.max_relative, 1e-10);
    EXPECT_EQ(c.t.size(), 7u);
    c = check_decomposition_identity(trace(builtin("abs2"), t_range(-5, -1, 0.5), make_grid(16, 32)));
    EXPECT_LE(c.max_relative, 1e-6);
    const auto f = builtin("demailly-m2");
    const auto c1 = check_decomposition_identity(trace_adapted(f, -10, -2, 0.1));
    EXPECT_LE(c1.max_relative, 1e-3);
    const auto c2 = check_decomposition_identity(trace_adapted(f, -10, -2, 0.05));
    EXPECT_LE(c2.max_relative, 1e-3);
    if (c1.max_relative > 1e-7) EXPECT_GE(c1.max_relative / c2.max_relative, 3.0);
    EXPECT_THROW(check_decomposition_identity(trace(f, {-3, -2}, make_grid(8, 8))), ArgumentError);
}

TEST(Ray, ConvexityExamples) {
    const auto g = make_grid(16, 32);
    auto v = check_convexity(trace(builtin("log-z"), t_range(-5, -1, 0.5), g));
    EXPECT_TRUE(v.pass);
    EXPECT_LE(v.max_abs_second, 1e-12);
    EXPECT_EQ(v.primitive.back(), 0.0);
    const auto u1 = builtin("u1-n5");
    v = check_convexity(trace_adapted(u1, -8, -1, 0.5));
    EXPECT_TRUE(v.pass);
    EXPECT_LE(v.max_abs_second, 1e-6);
    v = check_convexity(trace(builtin("abs2"), t_range(-3, -0.5, 0.25), g));
    EXPECT_TRUE(v.pass);
    EXPECT_GT(v.min_second, 0.0);
    EXPECT_THROW(check_convexity(trace(builtin("log-z"), {-4, -3, -2.5, -1}, g)), ArgumentError);
    EXPECT_THROW(check_convexity(trace(builtin("log-z"), {-3, -2, -1}, g)), ArgumentError);
}

TEST(Ray, LiminfIprime) {
    const auto g = make_grid(16, 32);
    EXPECT_EQ(liminf_Iprime(trace(builtin("log-z"), t_range(-20, -1, 1), g)), 0.0);
    const auto f = builtin("demailly-m2");
    const double deep = liminf_Iprime(trace_adapted(f, -30, -2, 0.5));
    EXPECT_LE(deep, 1e-3);
    EXPECT_GE(deep, -1e-9);
    const double shallow = liminf_Iprime(trace_adapted(f, -20, -2, 0.5));
    EXPECT_LE(deep, shallow);
    // I = 2 pi e^{2t}: the forward difference at t_min is 2 pi e^{2t}(e^{2h} - 1)/h -> 4 pi e^{2 t_min}
    const double h = 0.5, t0 = -20;
    const double l = liminf_Iprime(trace(builtin("abs2"), t_range(t0, -1, h), g));
    const double exact = 2 * kPi * std::exp(2 * t0) * std::expm1(2 * h) / h;
    EXPECT_NEAR(l, exact, 1e-7 * exact);
    EXPECT_THROW(liminf_Iprime(trace(builtin("log-z"), t_range(-10, -1, 1), g)), ArgumentError);
}

TEST(Ray, MassBoundExamples) {
    const auto g = make_grid(16, 32);
    for (double a : {0.5, 1.0, 2.0}) {
        const auto v = mass_bound_along_ray(trace(make_radial("r", a), t_range(-6, -1, 0.5), g), make_radial("r", a), 2);
        EXPECT_TRUE(v.pass);
        EXPECT_NEAR(v.M_A, a, 1e-12);
        EXPECT_NEAR(v.min_slack, 2 * a * a * kPi, 1e-9);
        EXPECT_EQ(v.checked, 8);
    }
    const auto f = builtin("demailly-m2");
    const auto v = mass_bound_along_ray(trace_adapted(f, -30, -1, 0.5), f, 2);
    EXPECT_TRUE(v.pass);
    EXPECT_NEAR(v.M_A, 2.0, 1e-3);
    EXPECT_THROW(mass_bound_along_ray(trace(f, t_range(-6, -1, 1), g), f, 0), ArgumentError);
    EXPECT_THROW(mass_bound_along_ray(trace(f, t_range(-3, -1, 1), g), f, 5), ArgumentError);
}

TEST(Ray, GeodesicDetector) {
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!invariant_smooth(f)) continue;
        const auto v = detect_geodesic(trace_adapted(f, -6, -1, 1), f);
        const bool expect = n != "abs2" && n != "log-plus-abs2";
        EXPECT_TRUE(v.consistent) << n << " dK " << v.k_variation << " shell " << v.shell_mass;
        EXPECT_EQ(v.geodesic, expect) << n << " dK " << v.k_variation << " shell " << v.shell_mass;
    }
}

TEST(Ray, TailImplicationExamples) {
    const auto g = make_grid(16, 32);
    auto c = vanishing_tail(trace(builtin("abs2"), t_range(-20, -1, 0.5), g), builtin("abs2"), 1e-6);
    EXPECT_TRUE(c.premise);
    EXPECT_TRUE(c.conclusion);
    c = vanishing_tail(trace(builtin("log-z"), t_range(-20, -1, 0.5), g), builtin("log-z"), 1e-6);
    EXPECT_FALSE(c.premise);
    EXPECT_TRUE(c.holds());
    EXPECT_NEAR(c.M2, 1.0, 1e-12);
}

TEST(RayProperty, ScriptIConvexNondecreasing) {
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!invariant_smooth(f)) continue;
        const auto v = check_script_I(trace(f, t_range(-8, -1, 0.5), make_grid(32, 64)), 1e-8);
        EXPECT_TRUE(v.pass) << n << " first " << v.min_first << " second " << v.min_second;
    }
}

TEST(RayProperty, JMinusEConvexNondecreasing) {
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!invariant_smooth(f)) continue;
        const auto v = check_convexity(trace_adapted(f, -8, -1, 0.5), 1e-8);
        EXPECT_TRUE(v.pass) << n << " first " << v.min_first << " second " << v.min_second;
    }
}

TEST(RayProperty, TailImplicationHolds) {
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (!invariant_smooth(f)) continue;
        const auto tr = trace_adapted(f, -20, -1, 1);
        for (double d : {1e-2, 1e-4, 1e-6}) EXPECT_TRUE(vanishing_tail(tr, f, d).holds()) << n << " delta " << d;
    }
}
