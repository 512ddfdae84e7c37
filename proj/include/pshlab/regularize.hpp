#pragma once

// Mollification u_eps = u * rho_eps by a product rule on the unit ball of
// R^4, the Friedrichs commutator gap and the regularized slope bound.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <functional>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/lelong.hpp"
#include "pshlab/oracle.hpp"
#include "pshlab/parallel.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

inline double bump(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

/// Constant making c bump(|w|) a unit-mass density on R^4, by 1D quadrature
/// of 2 pi^2 int_0^1 bump(s) s^3 ds.
inline double bump_constant() {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double m = ts.integrate([](double s) { return bump(s) * s * s * s; }, 0.0, 1.0);
    return 1.0 / (2 * kPi * kPi * m);
}

struct Mollifier {
    double epsilon = 0.01;
    std::vector<Vec4> nodes;       // points of the unit ball
    std::vector<double> weights;   // quadrature weight times rho(node)
    double c_discrete = 0;         // normalization used: sum of weights = 1
    double c_continuous = 0;       // exact normalization of the kernel
};

/// n_radial Gauss-Legendre radii times an n_hopf^3 Hopf product rule on S^3
/// (Gauss-Legendre in cos(theta), uniform phi and eta). The kernel constant
/// is fixed on the discrete rule so constants are reproduced exactly.
inline Mollifier make_mollifier(double epsilon, int n_radial = 16, int n_hopf = 4) {
    if (!(epsilon > 0)) throw ArgumentError("mollifier: epsilon must be positive");
    if (n_radial < 2 || n_hopf < 2) throw ArgumentError("mollifier: rule too small");
    Mollifier m;
    m.epsilon = epsilon;
    const auto [xr, wr] = gauss_legendre(n_radial);
    const auto [xc, wc] = gauss_legendre(n_hopf);
    const double dphi = 2 * kPi / n_hopf, deta = 4 * kPi / n_hopf;
    double mass = 0;
    for (int a = 0; a < n_radial; ++a) {
        const double s = 0.5 * (xr[a] + 1.0), ws = 0.5 * wr[a] * s * s * s;
        for (int i = 0; i < n_hopf; ++i) {
            const double theta = std::acos(xc[i]);
            for (int j = 0; j < n_hopf; ++j)
                for (int k = 0; k < n_hopf; ++k) {
                    const Point p = point_from_hopf({s, (k + 0.5) * deta, theta, (j + 0.5) * dphi});
                    m.nodes.push_back({p.z1_re, p.z1_im, p.z2_re, p.z2_im});
                    const double w = ws * 0.125 * wc[i] * dphi * deta * bump(s);
                    m.weights.push_back(w);
                    mass += w;
                }
        }
    }
    for (double& w : m.weights) w /= mass;
    m.c_discrete = 1.0 / mass;
    m.c_continuous = bump_constant();
    return m;
}

/// Hopf order resolving the angular degree of f: 4 by default, 8 for
/// holomorphic pairs of degree above 4. Odd orders alias badly.
inline int hopf_order_for(const FunctionSpec& f) {
    return f.kind == Kind::HolomorphicPairLog && f.dmax() > 4 ? 8 : 4;
}

inline Mollifier make_mollifier_for(const FunctionSpec& f, double epsilon) {
    return make_mollifier(epsilon, 16, hopf_order_for(f));
}

/// Second moment s_2 = integral of |w|^2 rho(w) under the rule.
inline double second_moment(const Mollifier& m) {
    std::vector<double> v(m.nodes.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& w = m.nodes[i];
        v[i] = m.weights[i] * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
    }
    return pairwise_sum(v);
}

/// Phase of the dominant coordinate of p. Rotating the rule by it makes the
/// discrete convolution exactly invariant under the diagonal circle action.
inline cplx dominant_phase(const Point& p) {
    const cplx z = std::abs(p.z1()) >= std::abs(p.z2()) ? p.z1() : p.z2();
    return std::abs(z) > 0 ? z / std::abs(z) : cplx(1.0, 0.0);
}

inline Point shifted(const Point& p, const Vec4& w, double eps, cplx phase) {
    const cplx w1 = phase * cplx(w[0], w[1]), w2 = phase * cplx(w[2], w[3]);
    return Point::from(p.z1() - eps * w1, p.z2() - eps * w2);
}

inline void check_support(const Mollifier& m, const Point& p) {
    const double r = p.norm();
    if (!(m.epsilon < std::min(r, 1.0 - r)))
        throw DomainError("support: the eps-ball around the point leaves B_1 \\ {0}");
}

inline double mollified_eval(const FunctionSpec& f, const Mollifier& m, const Point& p) {
    check_support(m, p);
    const cplx ph = dominant_phase(p);
    std::vector<double> v(m.nodes.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m.weights[i] * eval(f, shifted(p, m.nodes[i], m.epsilon, ph));
    return pairwise_sum(v);
}

/// d/dt u(e^t q) at t = log|q|, i.e. r times the radial derivative at q.
inline double radial_slope(const FunctionSpec& f, const Point& q) {
    const double r = q.norm();
    const double t = std::log(r);
    const Cx<double> a(q.z1() / r), b(q.z2() / r);
    if (f.analytic()) {
        using J = Jet<1>;
        return eval_tq<J>(f, J::variable(t, 0), Cx<J>(J(a.re), J(a.im)), Cx<J>(J(b.re), J(b.im))).d[0];
    }
    const double h = kFiniteDifferenceStepT;
    return (eval_tq<double>(f, t + h, a, b) - eval_tq<double>(f, t - h, a, b)) / (2 * h);
}

inline constexpr double kMollifiedStepT = 1e-4;

/// |r d_r (u * rho_eps)(p) - r (d_r u * rho_eps)(p)|: the first term by central
/// differences of mollified_eval in t = log r, the second by mollifying the
/// analytic radial derivative.
inline double friedrichs_gap(const FunctionSpec& f, const Mollifier& m, const Point& p) {
    check_support(m, p);
    const double h = kMollifiedStepT;
    auto scaled = [&](double k) { return Point{k * p.z1_re, k * p.z1_im, k * p.z2_re, k * p.z2_im}; };
    const double lhs = (mollified_eval(f, m, scaled(std::exp(h))) - mollified_eval(f, m, scaled(std::exp(-h)))) / (2 * h);
    const double r = p.norm();
    const cplx ph = dominant_phase(p);
    std::vector<double> v(m.nodes.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point q = shifted(p, m.nodes[i], m.epsilon, ph);
        v[i] = m.weights[i] * radial_slope(f, q) * r / q.norm();
    }
    return std::abs(lhs - pairwise_sum(v));
}

struct MonteCarloValue {
    double value = 0;
    double std_error = 0;
    std::uint64_t seed = 0;
};

/// |grad u| at a point of R^4.
inline double gradient_norm(const FunctionSpec& f, const Vec4& x) {
    if (f.analytic()) {
        const auto d = real_derivs(f, x);
        return std::sqrt(d.g[0] * d.g[0] + d.g[1] * d.g[1] + d.g[2] * d.g[2] + d.g[3] * d.g[3]);
    }
    const double h = 1e-6 * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    double acc = 0;
    for (int i = 0; i < 4; ++i) {
        Vec4 a = x, b = x;
        a[i] += h;
        b[i] -= h;
        const double g = (eval_real(f, a) - eval_real(f, b)) / (2 * h);
        acc += g * g;
    }
    return std::sqrt(acc);
}

/// ||grad u||_{L^1(B_R)} by Monte Carlo with uniform samples in B_R.
inline MonteCarloValue gradient_l1_norm(const FunctionSpec& f, double R, int n = 100000, std::uint64_t seed = 4242) {
    if (!(R > 0 && R < 1)) throw DomainError("gradient_l1_norm: need 0 < R < 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<Vec4> pts(n);
    for (auto& p : pts) {
        const double rho = R * std::pow(U(rng), 0.25);
        double nn = 0;
        for (double& c : p) {
            c = N(rng);
            nn += c * c;
        }
        for (double& c : p) c *= rho / std::sqrt(nn);
    }
    std::vector<double> v(n), v2(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        v[i] = gradient_norm(f, pts[i]);
        v2[i] = v[i] * v[i];
    });
    const double vol = 0.5 * kPi * kPi * std::pow(R, 4);
    const double mean = pairwise_sum(v) / n;
    const double var = std::max(0.0, pairwise_sum(v2) / n - mean * mean);
    return {vol * mean, vol * std::sqrt(var / n), seed};
}

/// Admissible radius: min{(e^-A - e^-B)/2, beta e^-B / (1 + beta)}; beta = 1
/// gives the plain lemma.
inline double slope_epsilon0(double A, double B, double beta = 1.0) {
    return std::min(0.5 * (std::exp(-A) - std::exp(-B)), beta * std::exp(-B) / (1.0 + beta));
}

/// Maximal t-slope of u_eps at t = -B over grid directions and probes, by
/// central differences; fiber-averaged when f is not S^1-invariant.
inline double mollified_max_slope(const FunctionSpec& f, const Mollifier& m, double B, const DirectionGrid& g) {
    std::vector<Direction> dirs;
    for (const auto& nd : g.nodes) dirs.push_back(nd.dir);
    for (const auto& d : probe_directions(f)) dirs.push_back(d);
    const int n_eta = f.s1_invariant ? 1 : kFiberAngles;
    const double h = kMollifiedStepT;
    std::vector<double> slope(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t i) {
        const auto q = unit_vector(dirs[i]);
        double acc = 0;
        for (int k = 0; k < n_eta; ++k) {
            const cplx e = std::polar(1.0, 2 * kPi * k / n_eta);
            auto at = [&](double t) { return mollified_eval(f, m, Point::from(std::exp(t) * e * q[0], std::exp(t) * e * q[1])); };
            acc += (at(-B + h) - at(-B - h)) / (2 * h);
        }
        slope[i] = acc / n_eta;
    });
    return *std::max_element(slope.begin(), slope.end());
}

struct SlopeBoundCheck {
    double A = 0, B = 0, beta = 1, epsilon = 0, epsilon0 = 0;
    double M_A = 0;         // M_A(u)
    double M_B_eps = 0;     // M_B(u_eps)
    double C_fit = 0;
    double bound = 0;       // (1 + beta) M_A + C_fit eps
    std::vector<double> calibration_eps, calibration_slopes;
    bool pass = false;
};

/// M_B(u_eps) <= (1 + beta) M_A(u) + C eps. C is fitted from two larger
/// admissible eps (0.95 and 0.75 of eps0) and the bound is then checked at m.epsilon.
inline SlopeBoundCheck regularized_slope_bound(const FunctionSpec& f, double A, double B, const Mollifier& m,
                                               const DirectionGrid& g, double beta = 1.0) {
    if (!(B > A && A > 1)) throw ArgumentError("regularized_slope_bound: need B > A > 1");
    if (!(beta > 0 && beta <= 1)) throw ArgumentError("regularized_slope_bound: need 0 < beta <= 1");
    SlopeBoundCheck c;
    c.A = A;
    c.B = B;
    c.beta = beta;
    c.epsilon = m.epsilon;
    c.epsilon0 = slope_epsilon0(A, B, beta);
    if (!(m.epsilon < c.epsilon0)) throw ArgumentError("regularized_slope_bound: eps out of range (eps >= eps0)");
    c.M_A = max_directional(f, A, g);
    const double target = (1.0 + beta) * c.M_A;
    for (double k : {0.95, 0.75}) {
        Mollifier mk = m;
        mk.epsilon = k * c.epsilon0;
        const double s = mollified_max_slope(f, mk, B, g);
        c.calibration_eps.push_back(mk.epsilon);
        c.calibration_slopes.push_back(s);
        c.C_fit = std::max(c.C_fit, (s - target) / mk.epsilon);
    }
    c.M_B_eps = mollified_max_slope(f, m, B, g);
    c.bound = target + c.C_fit * m.epsilon;
    c.pass = c.M_B_eps <= c.bound;
    return c;
}

struct MonotonicityCheck {
    std::vector<double> epsilons;  // decreasing
    double min_excess = INFINITY;  // min of u_eps - u over points and eps
    double min_step = INFINITY;    // min of u_eps(k) - u_eps(k+1)
    int points = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

/// u_eps >= u and u_eps decreasing with eps at random points of the shell
/// 0.1 < |z| < 0.8, up to 1e-8.
inline MonotonicityCheck check_monotone(const FunctionSpec& f, std::vector<double> epsilons, int n = 100,
                                        std::uint64_t seed = 2024) {
    if (epsilons.empty()) throw ArgumentError("check_monotone: no epsilons");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    MonotonicityCheck c;
    c.epsilons = epsilons;
    c.points = n;
    c.seed = seed;
    std::vector<Mollifier> ms;
    for (double e : epsilons) ms.push_back(make_mollifier_for(f, e));
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, 0.1, 0.8));
    std::vector<double> excess(n), step(n, INFINITY);
    parallel_for(pts.size(), [&](std::size_t i) {
        const double u = eval(f, pts[i]);
        double prev = NAN, ex = INFINITY;
        for (const auto& m : ms) {
            const double ue = mollified_eval(f, m, pts[i]);
            ex = std::min(ex, ue - u);
            if (!std::isnan(prev)) step[i] = std::min(step[i], prev - ue);
            prev = ue;
        }
        excess[i] = ex;
    });
    c.min_excess = *std::min_element(excess.begin(), excess.end());
    c.min_step = *std::min_element(step.begin(), step.end());
    c.pass = c.min_excess >= -1e-8 && (ms.size() < 2 || c.min_step >= -1e-8);
    return c;
}

inline constexpr double kFriedrichsDelta = 0.1;

struct FriedrichsCheck {
    double epsilon = 0, delta = kFriedrichsDelta;
    double max_gap = 0;
    MonteCarloValue grad_l1;  // ||grad u|| in L^1(B_{1-delta})
    double bound = 0;         // 2 eps ||grad u||
    int points = 0;
    bool pass = false;
};

/// Gap at n random points of 0.1 < |p| < 1 - 2 delta against 2 eps ||grad u||_{L^1(B_{1-delta})}.
inline FriedrichsCheck check_friedrichs(const FunctionSpec& f, double epsilon, int n = 50, std::uint64_t seed = 2024,
                                        int mc_samples = 100000) {
    FriedrichsCheck c;
    c.epsilon = epsilon;
    c.points = n;
    if (!(epsilon < std::min(0.1, c.delta))) throw ArgumentError("check_friedrichs: need eps < min(0.1, delta)");
    const Mollifier m = make_mollifier_for(f, epsilon);
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, 0.1, 1.0 - 2 * c.delta));
    std::vector<double> gaps(n);
    parallel_for(pts.size(), [&](std::size_t i) { gaps[i] = friedrichs_gap(f, m, pts[i]); });
    c.max_gap = *std::max_element(gaps.begin(), gaps.end());
    c.grad_l1 = gradient_l1_norm(f, 1.0 - c.delta, mc_samples, seed);
    c.bound = 2 * epsilon * c.grad_l1.value;
    c.pass = c.max_gap <= c.bound;
    return c;
}

}  // namespace pshlab
