#pragma once

// Monge-Ampere masses computed without the decomposition formula: the
// determinant density in R^4, the Stokes flux of d^c u ^ dd^c u through S_r,
// the 4D shell integral, the toric reduction, and the residual mass tau.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/cubature.hpp"
#include "pshlab/fiber.hpp"
#include "pshlab/lelong.hpp"
#include "pshlab/parallel.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

/// Value, gradient and Hessian in real coordinates (x1, y1, x2, y2).
struct RealDerivs {
    double u = 0;
    Vec4 g{};
    Mat4 H{};
};

inline double eval_real(const FunctionSpec& f, const Vec4& x) {
    return eval_z<double>(f, Cx<double>(x[0], x[1]), Cx<double>(x[2], x[3]));
}

/// Closed-form kinds by automatic differentiation; Custom by central
/// differences with step h_rel |x|, second order or (fourth_order) fourth.
inline RealDerivs real_derivs(const FunctionSpec& f, const Vec4& x, double h_rel = 1e-4, bool fourth_order = false) {
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("function " + f.name + " is not C^2 off the origin");
    RealDerivs r;
    if (f.analytic()) {
        using J = Jet<4>;
        const J u = eval_z<J>(f, Cx<J>(J::variable(x[0], 0), J::variable(x[1], 1)),
                              Cx<J>(J::variable(x[2], 2), J::variable(x[3], 3)));
        r.u = u.v;
        for (int i = 0; i < 4; ++i) {
            r.g[i] = u.d[i];
            for (int j = 0; j < 4; ++j) r.H[i][j] = u.hess(i, j);
        }
        return r;
    }
    const double h = h_rel * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    auto at = [&](int i, double di, int j, double dj) {
        Vec4 y = x;
        y[i] += di;
        y[j] += dj;
        return eval_real(f, y);
    };
    r.u = eval_real(f, x);
    // Second-order stencils at step k*h.
    auto d1 = [&](int i, double k) { return (at(i, k * h, i, 0) - at(i, -k * h, i, 0)) / (2 * k * h); };
    auto d2 = [&](int i, double k) {
        return (at(i, k * h, i, 0) - 2 * r.u + at(i, -k * h, i, 0)) / (k * k * h * h);
    };
    auto dm = [&](int i, int j, double k) {
        const double s = k * h;
        return (at(i, s, j, s) - at(i, s, j, -s) - at(i, -s, j, s) + at(i, -s, j, -s)) / (4 * s * s);
    };
    // Richardson: (4 D(h) - D(2h)) / 3 removes the h^2 term.
    auto rich = [&](double a, double b) { return fourth_order ? (4 * a - b) / 3 : a; };
    for (int i = 0; i < 4; ++i) {
        r.g[i] = rich(d1(i, 1), fourth_order ? d1(i, 2) : 0.0);
        r.H[i][i] = rich(d2(i, 1), fourth_order ? d2(i, 2) : 0.0);
        for (int j = 0; j < i; ++j) r.H[i][j] = r.H[j][i] = rich(dm(i, j, 1), fourth_order ? dm(i, j, 2) : 0.0);
    }
    return r;
}

/// Determinant of the complex Hessian u_{j kbar} built from the real Hessian.
inline double complex_hessian_det(const Mat4& H) {
    // u_{j kbar} = (1/4)[(u_{xj xk} + u_{yj yk}) + i(u_{xj yk} - u_{yj xk})]
    auto entry = [&](int j, int k) {
        const int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
        return cplx(0.25 * (H[xj][xk] + H[yj][yk]), 0.25 * (H[xj][yk] - H[yj][xk]));
    };
    const cplx a = entry(0, 0), b = entry(0, 1), d = entry(1, 1);
    return a.real() * d.real() - std::norm(b);
}

/// Density of (dd^c u)^2 against Lebesgue measure at a point expressed in
/// the spec's own coordinates (frames included).
inline double ma_density_raw(const FunctionSpec& f, const Vec4& x) {
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("ma_density: " + f.name + " is not C^2 off the origin");
    if (f.kind == Kind::HolomorphicPairLog) {
        // c log|w|^2 with w = (f, g): Hessian c J^* A J, A = (|w|^2 I - w w^*)/|w|^4.
        const cplx z1(x[0], x[1]), z2(x[2], x[3]);
        const cplx w1 = f.f.eval(z1, z2), w2 = f.g.eval(z1, z2);
        const auto gf = f.f.grad(z1, z2), gg = f.g.grad(z1, z2);
        const double n1 = std::norm(w1), n2 = std::norm(w2), n = n1 + n2;
        if (!(n > 0)) throw DomainError("ma_density: common zero of the pair");
        const double detA = ((n - n1) * (n - n2) - n1 * n2) / (n * n * n * n);
        const double detJ2 = std::norm(gf[0] * gg[1] - gf[1] * gg[0]);
        return 8.0 * f.c * f.c * detJ2 * detA;
    }
    return 8.0 * complex_hessian_det(real_derivs(f, x).H);
}

inline double ma_density(const FunctionSpec& f, const Point& p) {
    const double r = p.norm();
    if (!(r > 0) || !(r < 1)) throw DomainError("ma_density: point must satisfy 0 < |z| < 1");
    return ma_density_raw(f, {p.z1_re, p.z1_im, p.z2_re, p.z2_im});
}

// ------------------------------------------------------------ Stokes flux

/// Frame and s-range that follow the boundary layer of f down to log-radius t.
struct LayerFrame {
    Frame frame{};
    double s_lo = -kTailWidth, s_hi = kTailWidth;
};

inline LayerFrame layer_frame(const FunctionSpec& f, double t) {
    LayerFrame lf;
    const auto fc = foci(f);
    if (fc.size() == 1) {
        lf.frame = Frame::focused_on(fc[0].dir);
        lf.s_lo = fc[0].rate * t - kLayerMargin;
    } else if (fc.size() == 2 && chordal(fc[0].dir, fc[1].dir) > 1.0 - 1e-9) {
        lf.frame = Frame::focused_on(fc[0].dir);
        lf.s_lo = fc[0].rate * t - kLayerMargin;
        lf.s_hi = -fc[1].rate * t + kLayerMargin;
    } else if (fc.size() > 2) {
        throw ArgumentError("layer_frame: more than one non-antipodal exceptional direction in " + f.name);
    }
    lf.s_lo = std::max(std::min(lf.s_lo, -kTailWidth), -kMaxLogDepth);
    lf.s_hi = std::min(std::max(lf.s_hi, kTailWidth), kMaxLogDepth);
    return lf;
}

struct FluxOptions {
    int n_phi = 32;   // uniform torus grid for S^1-invariant f
    int n_eta = 0;    // > 0 forces the uniform grid with this many fiber samples
    double rel_tol = 1e-11;
    int max_depth = 12;
    double cubature_rel_tol = 1e-6;  // functions without S^1 symmetry
    long max_evaluations = 8000000;
};

struct FluxResult {
    double value = 0;
    double error = 0;
};

/// (alpha ^ beta)(X_s, X_phi, X_eta) for alpha = d^c u, beta = dd^c u, on the torus
/// z = r (sigma(s) e^{i(eta+phi)/2}, sigma(-s) e^{i(eta-phi)/2}).
inline double flux_integrand(const FunctionSpec& framed, double r, double s, double phi, double eta) {
    const double sp = sigma(s), sm = sigma(-s);
    const double a1 = 0.5 * (eta + phi), a2 = 0.5 * (eta - phi);
    const double c1 = std::cos(a1), s1 = std::sin(a1), c2 = std::cos(a2), s2 = std::sin(a2);
    const Vec4 x{r * sp * c1, r * sp * s1, r * sm * c2, r * sm * s2};
    // Fourth-order differences with a wider step keep FD noise near 1e-10.
    const RealDerivs d = real_derivs(framed, x, 2e-3, true);
    // d sigma(s)/ds = sigma(s) sigma(-s)^2.
    const Vec4 Xs{r * sp * sm * sm * c1, r * sp * sm * sm * s1, -r * sm * sp * sp * c2, -r * sm * sp * sp * s2};
    const Vec4 Xa1{-r * sp * s1, r * sp * c1, 0, 0};
    const Vec4 Xa2{0, 0, -r * sm * s2, r * sm * c2};
    Vec4 Xp, Xe;
    for (int i = 0; i < 4; ++i) {
        Xp[i] = 0.5 * (Xa1[i] - Xa2[i]);
        Xe[i] = 0.5 * (Xa1[i] + Xa2[i]);
    }
    // alpha = (1/2) J grad u with J(v) = (-v_y1, v_x1, -v_y2, v_x2).
    auto Jv = [](const Vec4& v) { return Vec4{-v[1], v[0], -v[3], v[2]}; };
    const Vec4 jg = Jv(d.g);
    auto alpha = [&](const Vec4& v) { return 0.5 * (jg[0] * v[0] + jg[1] * v[1] + jg[2] * v[2] + jg[3] * v[3]); };
    // beta(V, W) = V^T B W, B = D - D^T, D = (1/2) H J^T.
    Mat4 D{};
    for (int i = 0; i < 4; ++i) {
        const Vec4 row = d.H[i];
        // (H J^T)_{ij} = sum_k H_ik J_jk, and J = [[0,-1,0,0],[1,0,0,0],[0,0,0,-1],[0,0,1,0]].
        D[i] = {-0.5 * row[1], 0.5 * row[0], -0.5 * row[3], 0.5 * row[2]};
    }
    auto beta = [&](const Vec4& v, const Vec4& w) {
        double acc = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) acc += v[i] * (D[i][j] - D[j][i]) * w[j];
        return acc;
    };
    return alpha(Xs) * beta(Xp, Xe) - alpha(Xp) * beta(Xs, Xe) + alpha(Xe) * beta(Xs, Xp);
}

/// Sign making (n, X_s, X_phi, X_eta) positively oriented, n the outward normal.
inline double torus_orientation() {
    const double s = 0.3, phi = 0.4, eta = 1.1;
    const double sp = sigma(s), sm = sigma(-s);
    const double a1 = 0.5 * (eta + phi), a2 = 0.5 * (eta - phi);
    const double c1 = std::cos(a1), s1 = std::sin(a1), c2 = std::cos(a2), s2 = std::sin(a2);
    Eigen::Matrix4d M;
    M.col(0) << sp * c1, sp * s1, sm * c2, sm * s2;
    M.col(1) << sp * sm * sm * c1, sp * sm * sm * s1, -sm * sp * sp * c2, -sm * sp * sp * s2;
    const Eigen::Vector4d a{-sp * s1, sp * c1, 0, 0}, b{0, 0, -sm * s2, sm * c2};
    M.col(2) = 0.5 * (a - b);
    M.col(3) = 0.5 * (a + b);
    return M.determinant() > 0 ? 1.0 : -1.0;
}

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

/// Adaptive Gauss-Kronrod with an absolute tolerance split evenly on bisection.
template <class F>
double adaptive_gk(const F& fn, double a, double b, double abs_tol, int depth, double& err) {
    double e = 0;
    const double v = GK15::integrate(fn, a, b, 0, 0.0, &e);
    if (e <= abs_tol || depth == 0) {
        err = e;
        return v;
    }
    const double m = 0.5 * (a + b);
    double e1 = 0, e2 = 0;
    const double v1 = adaptive_gk(fn, a, m, 0.5 * abs_tol, depth - 1, e1);
    const double v2 = adaptive_gk(fn, m, b, 0.5 * abs_tol, depth - 1, e2);
    err = e1 + e2;
    return v1 + v2;
}

/// Integral of d^c u ^ dd^c u over S_r = MA(u)(B_r) by Stokes. The 3-form is
/// assembled from the Euclidean gradient and Hessian of u; the s-direction
/// uses adaptive Gauss-Kronrod on unit panels. For S^1-invariant f the torus
/// is a uniform grid; otherwise the whole (s, phi, eta) box is integrated by
/// global adaptive cubature, since the mass can sit on thin ridges.
inline FluxResult stokes_flux(const FunctionSpec& f, double r, const FluxOptions& opt = {}) {
    if (!(r > 0 && r < 1)) throw DomainError("stokes_flux: need 0 < r < 1");
    if (opt.n_phi < 4) throw ArgumentError("stokes_flux: n_phi must be at least 4");
    const LayerFrame lf = layer_frame(f, std::log(r));
    const FunctionSpec framed = in_frame(f, lf.frame);
    const int n_phi = opt.n_phi;
    const bool uniform = f.s1_invariant || opt.n_eta > 0;
    const int n_eta = opt.n_eta > 0 ? opt.n_eta : 2;
    const double dphi = 2 * kPi / n_phi, deta = 4 * kPi / n_eta;
    const double sign = torus_orientation();
    // Finite-difference Hessians carry noise near 1e-10 relative.
    const double rel_tol = f.analytic() ? opt.rel_tol : std::max(opt.rel_tol, 1e-9);
    const int max_depth = f.analytic() ? opt.max_depth : std::min(opt.max_depth, 3);
    if (!uniform) {
        // Unit boxes in s times quarter periods in phi and eta.
        std::vector<Box3> boxes;
        const int ns = static_cast<int>(std::ceil(lf.s_hi - lf.s_lo));
        const double hs = 0.5 * (lf.s_hi - lf.s_lo) / ns, hp = kPi / 4, he = kPi / 2;
        for (int k = 0; k < ns; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    Box3 bx;
                    bx.center = {lf.s_lo + (2 * k + 1) * hs, (2 * i + 1) * hp, (2 * j + 1) * he};
                    bx.half = {hs, hp, he};
                    boxes.push_back(bx);
                }
        auto fn = [&](const Vec3& x) { return flux_integrand(framed, r, x[0], x[1], x[2]); };
        const auto c = adaptive_cubature(fn, std::move(boxes), std::max(rel_tol, opt.cubature_rel_tol), 0.0,
                                         opt.max_evaluations);
        return {sign * c.value, c.error};
    }
    auto torus = [&](double s) {
        std::vector<double> v(static_cast<std::size_t>(n_phi) * n_eta);
        for (int i = 0; i < n_phi; ++i)
            for (int j = 0; j < n_eta; ++j)
                v[i * n_eta + j] = flux_integrand(framed, r, s, (i + 0.5) * dphi, (j + 0.25) * deta);
        return sign * pairwise_sum(v) * dphi * deta;
    };
    const int panels = static_cast<int>(std::ceil(lf.s_hi - lf.s_lo));
    const double width = (lf.s_hi - lf.s_lo) / panels;
    std::vector<double> val(panels), err(panels), l1(panels);
    // First pass fixes the absolute tolerance; panels deep in the tails
    // would never meet a tolerance relative to their own size.
    parallel_for(static_cast<std::size_t>(panels), [&](std::size_t p) {
        const double a = lf.s_lo + p * width;
        double e = 0, L = 0;
        val[p] = GK15::integrate(torus, a, a + width, 0, 0.0, &e, &L);
        err[p] = e;
        l1[p] = L;
    });
    const double abs_tol = rel_tol * std::max(pairwise_sum(l1), 1e-300) / panels;
    parallel_for(static_cast<std::size_t>(panels), [&](std::size_t p) {
        if (err[p] <= abs_tol) return;
        const double a = lf.s_lo + p * width;
        double e = 0;
        val[p] = adaptive_gk(torus, a, a + width, abs_tol, max_depth, e);
        err[p] = e;
    });
    return {pairwise_sum(val), pairwise_sum(err)};
}

// ------------------------------------------------------------- mass in B_r

enum class MassMethod { Grid4D, MonteCarlo };

inline const char* method_name(MassMethod m) { return m == MassMethod::Grid4D ? "Grid4D" : "MonteCarlo"; }

struct MassOptions {
    double r0 = std::exp(-10.0);
    int n_phi = 16;
    int nodes_per_panel = 8;
    int mc_samples = 200000;
    std::uint64_t seed = 20240917;
    FluxOptions flux{};
};

struct MassEstimate {
    double value = 0;
    double error = 0;
    double shell = 0;          // density integral over r0 < |z| < r
    double boundary = 0;       // flux through S_{r0}, or S_r under the shortcut
    bool atomic_shortcut = false;
    MassMethod method = MassMethod::Grid4D;
    std::uint64_t seed = 0;
};

/// Density integral over the shell r0 < |z| < r in coordinates (t, s, phi, eta),
/// d lambda = rho^4 dt (1/8) sech^2(s) ds dphi deta. Also returns the
/// contribution of the innermost unit of t.
inline std::pair<double, double> shell_grid(const FunctionSpec& f, double r0, double r, int n_phi, int per_panel) {
    const double t0 = std::log(r0), t1 = std::log(r);
    const LayerFrame lf = layer_frame(f, t0);
    const FunctionSpec framed = in_frame(f, lf.frame);
    const int np = f.toric ? 4 : n_phi;
    const int ne = f.s1_invariant ? 2 : np;
    const auto [x, w] = gauss_legendre(per_panel);
    auto panel_nodes = [&](double lo, double hi, std::vector<double>& nodes, std::vector<double>& weights) {
        const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p)
            for (int i = 0; i < per_panel; ++i) {
                nodes.push_back(lo + p * width + 0.5 * width * (x[i] + 1.0));
                weights.push_back(0.5 * width * w[i]);
            }
    };
    std::vector<double> tn, tw, sn, sw;
    panel_nodes(t0, t1, tn, tw);
    panel_nodes(lf.s_lo, lf.s_hi, sn, sw);
    const double dphi = 2 * kPi / np, deta = 4 * kPi / ne;
    std::vector<double> slab(tn.size());
    parallel_for(tn.size(), [&](std::size_t it) {
        const double rho = std::exp(tn[it]);
        std::vector<double> acc(sn.size());
        for (std::size_t is = 0; is < sn.size(); ++is) {
            double sum = 0;
            for (int i = 0; i < np; ++i)
                for (int j = 0; j < ne; ++j) {
                    const auto q = frame_unit(sn[is], (i + 0.5) * dphi, (j + 0.25) * deta);
                    sum += ma_density_raw(framed, {rho * q[0].re, rho * q[0].im, rho * q[1].re, rho * q[1].im});
                }
            acc[is] = sum * sw[is] * 0.125 * sech2(sn[is]);
        }
        slab[it] = pairwise_sum(acc) * dphi * deta * std::pow(rho, 4) * tw[it];
    });
    double inner = 0;
    for (std::size_t it = 0; it < tn.size(); ++it)
        if (tn[it] < t0 + 1.0) inner += slab[it];
    return {pairwise_sum(slab), inner};
}

inline std::pair<double, double> shell_monte_carlo(const FunctionSpec& f, double r0, double r, int n,
                                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    const double a = std::pow(r0, 4), b = std::pow(r, 4);
    const double vol = 0.5 * kPi * kPi * (b - a);
    std::vector<Vec4> pts(n);
    for (auto& p : pts) {
        const double rho = std::pow(a + U(rng) * (b - a), 0.25);
        double nn = 0;
        for (double& c : p) {
            c = N(rng);
            nn += c * c;
        }
        for (double& c : p) c *= rho / std::sqrt(nn);
    }
    std::vector<double> v(n), v2(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        v[i] = ma_density_raw(f, pts[i]);
        v2[i] = v[i] * v[i];
    });
    const double mean = pairwise_sum(v) / n;
    const double var = std::max(0.0, pairwise_sum(v2) / n - mean * mean);
    return {vol * mean, vol * std::sqrt(var / n)};
}

/// MA(u)(B_r): shell integral over r0 < |z| < r plus the flux through S_{r0}.
/// When the shell carries no mass the value is the flux through S_r.
inline MassEstimate ma_mass_ball(const FunctionSpec& f, double r, MassMethod method = MassMethod::Grid4D,
                                 const MassOptions& opt = {}) {
    if (!(r > 0 && r < 1)) throw DomainError("ma_mass_ball: need 0 < r < 1");
    if (!(opt.r0 > 0 && opt.r0 < r)) throw ArgumentError("ma_mass_ball: need 0 < r0 < r");
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("ma_mass_ball: " + f.name + " is not C^2 off the origin");
    MassEstimate m;
    m.method = method;
    double shell_err = 0;
    if (method == MassMethod::Grid4D) {
        const auto [fine, inner] = shell_grid(f, opt.r0, r, opt.n_phi, opt.nodes_per_panel);
        const auto coarse = shell_grid(f, opt.r0, r, opt.n_phi, std::max(2, opt.nodes_per_panel / 2)).first;
        m.shell = fine;
        shell_err = std::abs(fine - coarse);
        if (std::abs(fine) > 1e-9 && inner > 1e-3 * std::abs(fine))
            throw ConvergenceError("ma_mass_ball: shell integral of " + f.name + " keeps growing as r0 -> 0");
    } else {
        m.seed = opt.seed;
        const auto [est, se] = shell_monte_carlo(f, opt.r0, r, opt.mc_samples, opt.seed);
        m.shell = est;
        shell_err = 3.0 * se;
    }
    // Uniform torus grids are checked against a coarser grid; the adaptive
    // cubature carries its own embedded-rule estimate.
    const bool uniform = f.s1_invariant || opt.flux.n_eta > 0;
    FluxOptions coarse_flux = opt.flux;
    coarse_flux.n_phi = std::max(4, opt.flux.n_phi / 2);
    if (opt.flux.n_eta > 0) coarse_flux.n_eta = std::max(2, opt.flux.n_eta / 2);
    coarse_flux.rel_tol = opt.flux.rel_tol * 100;
    auto flux_with_error = [&](double radius) {
        FluxResult fine = stokes_flux(f, radius, opt.flux);
        if (uniform) fine.error += std::abs(fine.value - stokes_flux(f, radius, coarse_flux).value);
        return fine;
    };
    const FluxResult outer = flux_with_error(r);
    if (std::abs(m.shell) < 1e-6 * std::abs(outer.value)) {
        m.atomic_shortcut = true;
        m.boundary = outer.value;
        m.value = outer.value;
        m.error = outer.error + std::abs(m.shell);
        return m;
    }
    const FluxResult in = flux_with_error(opt.r0);
    m.boundary = in.value;
    m.value = m.shell + in.value;
    m.error = shell_err + in.error;
    return m;
}

// ------------------------------------------------------------------ toric

struct ToricMass {
    double shell = 0;     // pi^2 times the (t, s) integral over r0 < |z| < r
    double boundary = 0;  // pi K(u_{t0}) from the 1D reduction
    double total = 0;
};

/// Mass of B_r for toric f from the (t, s) reduction of the MA density:
/// pi^2 integral of 2(u_tt u_ss - u_ts^2) + u_t u_tt sech^2(s), plus the
/// boundary term pi [2 pi int u_t u_ss ds + (pi/2) int u_t^2 sech^2 ds] at r0.
/// n_theta / 8 Gauss-Legendre nodes per unit panel in s.
inline ToricMass toric_mass(const FunctionSpec& f, double r, int n_theta = 64, double r0 = std::exp(-10.0)) {
    if (!f.toric) throw ArgumentError("toric_mass: " + f.name + " is not flagged toric");
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("toric_mass: " + f.name + " is not C^2 off the origin");
    if (!(r > 0 && r < 1) || !(r0 > 0 && r0 < r)) throw DomainError("toric_mass: need 0 < r0 < r < 1");
    const double t0 = std::log(r0), t1 = std::log(r);
    const LayerFrame lf = layer_frame(f, t0);
    const FunctionSpec framed = in_frame(f, lf.frame);
    const int per = std::max(2, n_theta / 8);
    const auto [x, w] = gauss_legendre(per);
    const auto [xt, wt] = gauss_legendre(8);
    std::vector<double> sn, sw, tn, tw;
    const int sp = static_cast<int>(std::ceil(lf.s_hi - lf.s_lo));
    const double swid = (lf.s_hi - lf.s_lo) / sp;
    for (int p = 0; p < sp; ++p)
        for (int i = 0; i < per; ++i) {
            sn.push_back(lf.s_lo + p * swid + 0.5 * swid * (x[i] + 1));
            sw.push_back(0.5 * swid * w[i]);
        }
    const int tp = std::max(1, static_cast<int>(std::ceil(t1 - t0)));
    const double twid = (t1 - t0) / tp;
    for (int p = 0; p < tp; ++p)
        for (int i = 0; i < 8; ++i) {
            tn.push_back(t0 + p * twid + 0.5 * twid * (xt[i] + 1));
            tw.push_back(0.5 * twid * wt[i]);
        }
    std::vector<double> rows(tn.size());
    parallel_for(tn.size(), [&](std::size_t it) {
        std::vector<double> acc(sn.size());
        for (std::size_t is = 0; is < sn.size(); ++is) {
            const auto d = node_derivs(framed, tn[it], sn[is], 0.0);
            acc[is] = sw[is] * (2.0 * (d.utt * d.uss - d.uts * d.uts) + d.ut * d.utt * sech2(sn[is]));
        }
        rows[it] = tw[it] * pairwise_sum(acc);
    });
    std::vector<double> b1(sn.size()), b2(sn.size());
    for (std::size_t is = 0; is < sn.size(); ++is) {
        const auto d = node_derivs(framed, t0, sn[is], 0.0);
        b1[is] = sw[is] * d.ut * d.uss;
        b2[is] = sw[is] * d.ut * d.ut * sech2(sn[is]);
    }
    ToricMass m;
    m.shell = kPi * kPi * pairwise_sum(rows);
    m.boundary = kPi * (2 * kPi * pairwise_sum(b1) + 0.5 * kPi * pairwise_sum(b2));
    m.total = m.shell + m.boundary;
    return m;
}

// -------------------------------------------------------- residual mass

enum class TauMethod { BoundaryK, VolumeOracle, ToricOracle };

inline const char* method_name(TauMethod m) {
    switch (m) {
        case TauMethod::BoundaryK: return "BoundaryK";
        case TauMethod::VolumeOracle: return "VolumeOracle";
        case TauMethod::ToricOracle: return "ToricOracle";
    }
    return "?";
}

struct TauEstimate {
    double value = 0;
    double lower = 0, upper = 0;  // from the last two samples
    double error = 0;             // quadrature error estimate at the deepest sample
    TauMethod method = TauMethod::BoundaryK;
    double t_used = 0;
    std::vector<double> samples;
    // Cross-check of K(u_t)/pi against the volume oracle at a shallow t.
    double check_t = 0, check_boundary = 0, check_volume = 0;
};

inline constexpr double kVolumeRadius = 0.95;  // radius for functions without S^1 symmetry
inline constexpr double kCheckT = -2.0;

/// tau = lim K(u_t)/pi for S^1-invariant smooth f; the volume oracle otherwise.
inline TauEstimate residual_mass(const FunctionSpec& f, const std::vector<double>& schedule, int n_theta = 64,
                                 int n_phi = 128, bool require_boundary = false) {
    if (schedule.size() < 2) throw ArgumentError("residual_mass: need at least two schedule points");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1])) throw ArgumentError("residual_mass: schedule must decrease");
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("residual_mass: " + f.name + " is not C^2 off the origin");
    TauEstimate e;
    const auto inv = check_s1_invariance(f);
    if (!inv.invariant) {
        if (require_boundary) throw InvarianceError("residual_mass: " + f.name + " is not S^1-invariant");
        const auto m = ma_mass_ball(f, kVolumeRadius);
        e.method = TauMethod::VolumeOracle;
        e.value = m.value / (kPi * kPi);
        e.error = m.error / (kPi * kPi);
        e.lower = e.value - e.error;
        e.upper = e.value + e.error;
        e.t_used = std::log(kVolumeRadius);
        e.samples = {e.value};
        return e;
    }
    const DirectionGrid g = make_adapted_grid(f, schedule.back(), n_theta, n_phi);
    FunctionalRecord deepest;
    for (double t : schedule) {
        deepest = functionals_at(f, t, g);
        e.samples.push_back(deepest.K / kPi);
    }
    const double last = e.samples.back(), prev = e.samples[e.samples.size() - 2];
    e.method = TauMethod::BoundaryK;
    e.value = last;
    e.lower = std::min(last, prev);
    e.upper = std::max(last, prev);
    e.error = std::abs(deepest.K - deepest.K_threeform) / kPi;
    e.t_used = schedule.back();
    e.check_t = kCheckT;
    e.check_boundary = functionals_at(f, kCheckT, make_adapted_grid(f, kCheckT, n_theta, n_phi)).K / kPi;
    e.check_volume = ma_mass_ball(f, std::exp(kCheckT)).value / (kPi * kPi);
    return e;
}

// ------------------------------------------------------------- verdicts

struct MassReport {
    std::string name;
    bool skipped = false;
    std::string note;
    InvarianceVerdict s1;
    LelongEstimate nu, lambda;
    TauEstimate tau;
    double lower_bound = 0, upper_bound = 0;
    bool verdict_lower = false, verdict_upper = false;
    bool upper_applicable = false;
    double tol = 0;
    std::vector<double> schedule, a_schedule;
    std::string grid;

    /// Largest bracket width or error estimate among nu, lambda and tau.
    double uncertainty() const {
        return std::max({nu.upper - nu.lower, lambda.upper - lambda.lower, tau.upper - tau.lower, tau.error});
    }
};

/// nu, lambda, tau and the two bounds nu^2 <= tau <= 2 lambda nu + nu^2.
/// t_min deepens (or shortens) the t-schedule; seed drives the invariance test.
inline MassReport verify_bounds(const FunctionSpec& f, double tol = 1e-3, int n_theta = 64, int n_phi = 128,
                                std::optional<double> t_min = std::nullopt, std::uint64_t seed = 12345) {
    MassReport r;
    r.name = f.name;
    r.tol = tol;
    r.s1 = check_s1_invariance(f, 200, 1e-9, seed);
    r.upper_applicable = r.s1.invariant;
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs) {
        r.skipped = true;
        r.note = "skipped: not C^2 off the origin, so tau has no smooth estimator";
        return r;
    }
    r.schedule = t_min ? schedule_to(f, *t_min) : default_schedule(f);
    r.a_schedule = default_a_schedule(f);
    r.grid = make_adapted_grid(f, r.schedule.back(), n_theta, n_phi).describe();
    r.nu = lelong_number(f, r.schedule, n_theta, n_phi);
    r.lambda = lambda_origin(f, r.a_schedule);
    r.tau = residual_mass(f, r.schedule, n_theta, n_phi);
    const double nu = r.nu.value, lam = r.lambda.value;
    r.lower_bound = nu * nu;
    r.upper_bound = 2 * lam * nu + nu * nu;
    r.verdict_lower = r.tau.value >= r.lower_bound - tol;
    r.verdict_upper = r.tau.value <= r.upper_bound + tol;
    if (!r.upper_applicable)
        r.note = r.verdict_upper ? "upper bound not applicable: not S^1-invariant"
                                 : "upper bound violated; not applicable: not S^1-invariant";
    return r;
}

}  // namespace pshlab
