#include <gtest/gtest.h>

#include <random>

#include "pshlab/hopf.hpp"
#include "pshlab/quadrature.hpp"

using namespace pshlab;

TEST(Hopf, PolesAndDiagonal) {
    auto h = hopf_from_point(Point::from(0.0, 0.5));
    EXPECT_DOUBLE_EQ(h.r, 0.5);
    EXPECT_DOUBLE_EQ(h.theta, 0.0);
    h = hopf_from_point(Point::from(0.5, 0.0));
    EXPECT_DOUBLE_EQ(h.theta, kPi);
    h = hopf_from_point(Point::from(0.3, 0.3));
    EXPECT_NEAR(h.r, 0.3 * std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(h.theta, kPi / 2, 1e-15);
    EXPECT_NEAR(h.phi, 0.0, 1e-15);
    EXPECT_NEAR(h.eta, 0.0, 1e-15);
    // eta = 2 arg z2 at the zeta = 0 pole
    h = hopf_from_point(Point::from(0.0, std::polar(0.5, 0.7)));
    EXPECT_NEAR(h.eta, 1.4, 1e-14);
}

TEST(Hopf, ZeroPointRejected) { EXPECT_THROW(hopf_from_point(Point{}), DomainError); }

TEST(Hopf, PointFromHopfExamples) {
    auto p = point_from_hopf({1, 0, 0, 0});
    EXPECT_NEAR(std::abs(p.z1()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.z2() - 1.0), 0.0, 1e-15);
    p = point_from_hopf({1, 0, kPi, 0});
    EXPECT_NEAR(std::abs(p.z1() - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.z2()), 0.0, 1e-15);
    p = point_from_hopf({2, kPi, kPi / 2, 0});
    const cplx want = std::sqrt(2.0) * cplx(0, 1);
    EXPECT_NEAR(std::abs(p.z1() - want), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(p.z2() - want), 0.0, 1e-14);
}

TEST(Hopf, RoundTripRandom) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1), lr(std::log(1e-6), 0.0);
    for (int i = 0; i < 10000; ++i) {
        Point p{u(rng), u(rng), u(rng), u(rng)};
        const double k = std::exp(lr(rng)) / p.norm();
        p = {p.z1_re * k, p.z1_im * k, p.z2_re * k, p.z2_im * k};
        const auto h = hopf_from_point(p);
        EXPECT_GE(h.eta, 0.0);
        EXPECT_LT(h.eta, 4 * kPi);
        const auto q = point_from_hopf(h);
        const double r = p.norm();
        ASSERT_NEAR(q.z1_re, p.z1_re, 1e-12 * r);
        ASSERT_NEAR(q.z1_im, p.z1_im, 1e-12 * r);
        ASSERT_NEAR(q.z2_re, p.z2_re, 1e-12 * r);
        ASSERT_NEAR(q.z2_im, p.z2_im, 1e-12 * r);
        ASSERT_NEAR(q.norm(), r, 1e-12 * r);
    }
}

TEST(Hopf, DirectionOfExamples) {
    auto d = direction_of({1, 0, 0, 0});
    EXPECT_EQ(d.chart, Chart::Zeta);
    EXPECT_EQ(std::abs(d.w()), 0.0);
    d = direction_of({1, 0, kPi, 0});
    EXPECT_EQ(d.chart, Chart::Xi);
    EXPECT_EQ(std::abs(d.w()), 0.0);
    d = direction_of({1, 0, kPi / 2, kPi / 3});
    EXPECT_EQ(d.chart, Chart::Zeta);
    EXPECT_NEAR(std::abs(d.w() - std::polar(1.0, kPi / 3)), 0.0, 1e-15);
    d = direction_of({1, 0, 2.5, 1.0});
    EXPECT_EQ(d.chart, Chart::Xi);
    EXPECT_NEAR(std::abs(d.w() - std::polar(1.0 / std::tan(1.25), -1.0)), 0.0, 1e-14);
}

TEST(Hopf, ProjectionIgnoresFiber) {
    for (double th : {0.2, 1.5, 2.9})
        for (double eta : {0.0, 1.0, 7.0, 12.0}) {
            const auto a = direction_of(hopf_from_point(point_from_hopf({0.4, eta, th, 0.8})));
            const auto b = direction_of({0.4, 0.0, th, 0.8});
            EXPECT_EQ(a.chart, b.chart);
            EXPECT_NEAR(std::abs(a.w() - b.w()), 0.0, 1e-13);
        }
}

TEST(Hopf, ChartHysteresis) {
    EXPECT_EQ(direction_from_zeta(0.95, Chart::Zeta).chart, Chart::Zeta);
    EXPECT_EQ(direction_from_zeta(1.05, Chart::Zeta).chart, Chart::Zeta);
    EXPECT_EQ(direction_from_zeta(0.95, Chart::Xi).chart, Chart::Xi);
    EXPECT_EQ(direction_from_zeta(1.2, Chart::Zeta).chart, Chart::Xi);
    EXPECT_EQ(direction_from_zeta(0.8, Chart::Xi).chart, Chart::Zeta);
}

TEST(Hopf, LinePointExamples) {
    auto p = line_point({Chart::Zeta, 0, 0}, std::log(0.5), 0);
    EXPECT_NEAR(std::abs(p.z1()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.z2() - 0.5), 0.0, 1e-15);
    p = line_point({Chart::Zeta, 1, 0}, 0.0, 0);
    EXPECT_NEAR(std::abs(p.z1()), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(p.z2()), 1 / std::sqrt(2.0), 1e-15);
    p = line_point({Chart::Xi, 0, 0}, std::log(0.25), 0);
    EXPECT_NEAR(std::abs(p.z1() - 0.25), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.z2()), 0.0, 1e-15);
    const Direction d{Chart::Zeta, 0.3, -0.4};
    p = line_point(d, -1.5, 2.0);
    EXPECT_NEAR(p.norm(), std::exp(-1.5), 1e-15);
    EXPECT_NEAR(std::abs(p.z1() / p.z2() - d.w()), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(direction_of(hopf_from_point(p)).w() - d.w()), 0.0, 1e-14);
}

TEST(Hopf, FubiniStudyWeight) {
    EXPECT_DOUBLE_EQ(fs_weight({Chart::Zeta, 0, 0}), 0.5);
    EXPECT_DOUBLE_EQ(fs_weight({Chart::Zeta, 0.6, 0.8}), 0.125);
    EXPECT_DOUBLE_EQ(fs_weight({Chart::Xi, 0, 1}), 0.125);
}

TEST(Hopf, FubiniStudyTotalMass) {
    // Integrate fs_weight over the zeta plane in polar coordinates with the
    // flat element i dzeta ^ d(conj zeta) = 2 dx dy, mapped to [0, 1) by rho = x / (1 - x).
    const auto [x, w] = gauss_legendre(200);
    double total = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = 0.5 * (x[i] + 1), rho = s / (1 - s), jac = 1 / ((1 - s) * (1 - s));
        total += 0.5 * w[i] * 2 * fs_weight({Chart::Zeta, rho, 0}) * rho * jac * 2 * kPi;
    }
    EXPECT_NEAR(total, kPi, 1e-10);
}

TEST(Hopf, AreaFormIsFourOmega) {
    // sin(theta) dtheta dphi against 4 omega pulled back by zeta = tan(theta/2) e^{i phi}
    for (double th = 0.05; th < kPi; th += 0.05) {
        const double rho = std::tan(th / 2), drho = 0.5 / (std::cos(th / 2) * std::cos(th / 2));
        const double pulled = 4 * 2 * fs_weight({Chart::Zeta, rho, 0}) * rho * drho;
        EXPECT_NEAR(pulled, std::sin(th), 1e-10);
    }
}
