#pragma once

// Calculus on the boundary sphere S_r, r = e^t: the fiber field u_t on CP^1,
// the functionals I, J, E, K and the 3-form d^c u ^ dd^c u.

#include <array>
#include <cmath>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/parallel.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

struct FiberField {
    double t = 0;
    std::vector<double> u, u_dot, lap;  // lap = Delta_Theta u_t
    // First derivatives in the frame chart (s, phi) and their t-derivatives;
    // used by the 3-form and by the gradient form of the energy.
    std::vector<double> u_s, u_phi, u_dot_s, u_dot_phi;
    double min_u_dot = 0;
};

struct FunctionalRecord {
    double t = 0;
    double I = 0, J = 0, E = 0, cross = 0, K = 0, nu_r = 0, script_I = 0;
    double E_grad = 0;       // energy from the gradient form
    double K_threeform = 0;  // (1/pi) times the integral of d^c u ^ dd^c u over S_r
};

inline FiberField fiber_field(const FunctionSpec& f, double t, const DirectionGrid& g) {
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("fiber_field: " + f.name + " is not C^2 off the origin");
    if (!(t < 0)) throw DomainError("fiber_field: t must be negative");
    const auto specs = framed_specs(f, g);
    const std::size_t n = g.size();
    FiberField fld;
    fld.t = t;
    for (auto* v : {&fld.u, &fld.u_dot, &fld.lap, &fld.u_s, &fld.u_phi, &fld.u_dot_s, &fld.u_dot_phi}) v->resize(n);
    parallel_for(n, [&](std::size_t i) {
        const auto& nd = g.nodes[i];
        const auto d = node_derivs(specs[nd.frame], t, nd.s, nd.phi_f);
        fld.u[i] = d.u;
        fld.u_dot[i] = d.ut;
        fld.lap[i] = cosh2(nd.s) * (d.uss + d.upp);
        fld.u_s[i] = d.us;
        fld.u_phi[i] = d.up;
        fld.u_dot_s[i] = d.uts;
        fld.u_dot_phi[i] = d.utp;
    });
    fld.min_u_dot = n ? fld.u_dot[0] : 0.0;
    for (double v : fld.u_dot) fld.min_u_dot = std::min(fld.min_u_dot, v);
    return fld;
}

/// Quadrature of the decomposition formula and its companions. Delta_omega = 2 Delta_Theta.
inline FunctionalRecord functionals(const FiberField& fld, const DirectionGrid& g) {
    const std::size_t n = g.size();
    if (fld.u.size() != n) throw ArgumentError("functionals: field and grid differ");
    std::vector<double> a(n), b(n), c(n), e(n), eg(n), k3(n), su(n);
    for (std::size_t i = 0; i < n; ++i) su[i] = fld.u[i] * g.weights[i];
    const double script_I = pairwise_sum(su);
    const double mean = script_I / kPi;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = g.weights[i], ud = fld.u_dot[i], ch = cosh2(g.nodes[i].s);
        a[i] = w * ud;
        b[i] = w * ud * ud;
        c[i] = w * 4.0 * ud * fld.lap[i];
        e[i] = -w * 2.0 * (fld.u[i] - mean) * fld.lap[i];
        eg[i] = w * 2.0 * ch * (fld.u_s[i] * fld.u_s[i] + fld.u_phi[i] * fld.u_phi[i]);
        // d^c u ^ dd^c u over S_r in log-polar frame coordinates, divided by pi.
        const double grad_dot = fld.u_s[i] * fld.u_dot_s[i] + fld.u_phi[i] * fld.u_dot_phi[i];
        k3[i] = w * (2.0 * ch * (ud * fld.lap[i] / ch - grad_dot) + ud * ud);
    }
    FunctionalRecord r;
    r.t = fld.t;
    r.I = pairwise_sum(a);
    r.J = pairwise_sum(b);
    r.cross = pairwise_sum(c);
    r.E = pairwise_sum(e);
    r.E_grad = pairwise_sum(eg);
    r.K = r.cross + r.J;
    r.nu_r = r.I / kPi;
    r.script_I = script_I;
    r.K_threeform = pairwise_sum(k3);
    return r;
}

inline FunctionalRecord functionals_at(const FunctionSpec& f, double t, const DirectionGrid& g) {
    return functionals(fiber_field(f, t, g), g);
}

/// Density of 8 d^c u ^ dd^c u against i dw ^ d(conj w) ^ d eta in the canonical
/// chart of the point: 2(u_dot u_{w wbar} - Re(u_{wbar} u_dot_w)) + u_dot^2/(1+|w|^2)^2.
inline double threeform_density(const FunctionSpec& f, const RealHopf& h) {
    if (!(h.r > 0 && h.r < 1)) throw DomainError("threeform_density: need 0 < r < 1");
    const Direction d = direction_of(h);
    const Frame fr = d.chart == Chart::Zeta ? Frame::identity() : Frame::swap();
    const double m = std::max(std::abs(d.w()), 1e-150);  // density is continuous at the pole
    const double s = std::log(m);
    const double ph = std::arg(d.w());
    const auto nd = node_derivs(in_frame(f, fr), std::log(h.r), s, ph);
    const double grad_dot = nd.us * nd.uts + nd.up * nd.utp;
    const double bracket = 0.5 * (nd.ut * (nd.uss + nd.upp) - grad_dot) + 0.25 * nd.ut * nd.ut * sech2(s);
    return bracket / (m * m);
}

/// Coefficients of 4 d^c u on S_r in the coframe (d eta, d phi, d theta):
/// (r u_r, 2 sin(theta) u_theta - cos(theta) r u_r, -2 u_phi / sin(theta)).
inline std::array<double, 3> dc_form_components(const FunctionSpec& f, const RealHopf& h) {
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("dc_form_components: " + f.name + " is not C^2 off the origin");
    double ut = 0, uth = 0, uph = 0;
    const double t = std::log(h.r);
    if (f.analytic()) {
        using J = Jet<3>;
        const J tj = J::variable(t, 0), th = J::variable(h.theta, 1), ph = J::variable(h.phi, 2);
        const Cx<J> q1 = expi(J(0.5) * (ph + h.eta)) * sin(0.5 * th);
        const Cx<J> q2 = expi(J(0.5) * (h.eta - ph)) * cos(0.5 * th);
        const J u = eval_tq<J>(f, tj, q1, q2);
        ut = u.d[0];
        uth = u.d[1];
        uph = u.d[2];
    } else {
        auto U = [&](double tt, double th, double ph) {
            const auto p = point_from_hopf({std::exp(tt), h.eta, th, ph});
            return eval_tq<double>(f, tt, Cx<double>(p.z1() / std::exp(tt)), Cx<double>(p.z2() / std::exp(tt)));
        };
        const double ht = kFiniteDifferenceStepT, ha = kAngularStep;
        ut = (U(t + ht, h.theta, h.phi) - U(t - ht, h.theta, h.phi)) / (2 * ht);
        uth = (U(t, h.theta + ha, h.phi) - U(t, h.theta - ha, h.phi)) / (2 * ha);
        uph = (U(t, h.theta, h.phi + ha) - U(t, h.theta, h.phi - ha)) / (2 * ha);
    }
    const double st = std::sin(h.theta), ct = std::cos(h.theta);
    return {ut, 2.0 * st * uth - ct * ut, st == 0 ? 0.0 : -2.0 * uph / st};
}

}  // namespace pshlab
