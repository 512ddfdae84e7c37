#pragma once

// Lelong numbers: nu(0, r) as the omega-mean of the t-slope, its limit,
// directional slopes along complex lines, M_A and lambda at the origin.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/parallel.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

enum class LelongMethod { AnalyticTail, Extrapolated, GridLimit };

inline const char* method_name(LelongMethod m) {
    switch (m) {
        case LelongMethod::AnalyticTail: return "AnalyticTail";
        case LelongMethod::Extrapolated: return "Extrapolated";
        case LelongMethod::GridLimit: return "GridLimit";
    }
    return "?";
}

struct LelongEstimate {
    double value = 0;
    double lower = 0, upper = 0;
    double t_used = 0;
    LelongMethod method = LelongMethod::GridLimit;
    std::string warning;  // empty when the last two samples agree to 1e-3
    std::vector<double> samples;
};

inline constexpr int kFiberAngles = 8;        // eta samples for functions without S^1 symmetry
inline constexpr double kSlopeStep = 1e-5;    // forward step for the right t-derivative

/// t-derivative of u at frame coordinates, averaged over the fiber when f
/// is not S^1-invariant. forward selects the right derivative for FD kinds.
inline double node_slope(const FunctionSpec& framed, double t, double s, double phi, bool forward = false) {
    const int n_eta = framed.s1_invariant ? 1 : kFiberAngles;
    double acc = 0.0;
    for (int k = 0; k < n_eta; ++k) {
        const double eta = 4 * kPi * k / n_eta;
        if (framed.analytic()) {
            using J = Jet<1>;
            const auto q = frame_unit(s, phi, eta);
            const J u = eval_tq<J>(framed, J::variable(t, 0), Cx<J>(J(q[0].re), J(q[0].im)), Cx<J>(J(q[1].re), J(q[1].im)));
            acc += u.d[0];
        } else {
            const auto q = frame_unit(s, phi, eta);
            if (forward) {
                const double h = kSlopeStep;
                acc += (eval_tq<double>(framed, t + h, q[0], q[1]) - eval_tq<double>(framed, t, q[0], q[1])) / h;
            } else {
                const double h = kFiniteDifferenceStepT;
                acc += (eval_tq<double>(framed, t + h, q[0], q[1]) - eval_tq<double>(framed, t - h, q[0], q[1])) / (2 * h);
            }
        }
    }
    return acc / n_eta;
}

/// nu_u(0, e^t) = (1/pi) times the omega-integral of the t-slope.
inline double lelong_at_radius(const FunctionSpec& f, double t, const DirectionGrid& g) {
    if (!(t < 0)) throw DomainError("lelong_at_radius: t must be negative");
    const auto specs = framed_specs(f, g);
    std::vector<double> v(g.size());
    parallel_for(g.size(), [&](std::size_t i) {
        const auto& nd = g.nodes[i];
        v[i] = node_slope(specs[nd.frame], t, nd.s, nd.phi_f);
    });
    return integrate(v, g) / kPi;
}

/// Deepest default t: -40 for closed-form kinds, -25 for finite-difference
/// kinds, and no deeper than the log-polar grid can follow the boundary layer.
inline double default_depth(const FunctionSpec& f) {
    double t = f.analytic() ? -40.0 : -25.0;
    for (const auto& fc : foci(f))
        if (fc.rate > 0) t = std::max(t, -(kMaxLogDepth - kLayerMargin) / fc.rate);
    return t;
}

/// Decreasing schedule -5, -10, ... ending at deep, which is capped at the
/// default depth of f.
inline std::vector<double> schedule_to(const FunctionSpec& f, double deep) {
    deep = std::max(deep, default_depth(f));
    std::vector<double> s;
    for (double t = -5.0; t > deep + 1e-9; t -= 5.0) s.push_back(t);
    s.push_back(deep);
    return s;
}

inline std::vector<double> default_schedule(const FunctionSpec& f) { return schedule_to(f, default_depth(f)); }

inline std::string convergence_warning(double last, double prev) {
    if (std::abs(last - prev) > 1e-3 * std::max(std::abs(last), 1e-9))
        return "not converged: last two samples differ by more than 1e-3 relative";
    return {};
}

/// Limit of nu(0, e^t) read at the deepest point of a decreasing schedule.
inline LelongEstimate lelong_number(const FunctionSpec& f, const std::vector<double>& schedule, int n_theta = 64,
                                    int n_phi = 128) {
    if (schedule.size() < 2) throw ArgumentError("lelong_number: need at least two schedule points");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1])) throw ArgumentError("lelong_number: schedule must decrease");
    if (schedule.back() > -20) throw ArgumentError("lelong_number: schedule must reach t <= -20");
    const DirectionGrid g = make_adapted_grid(f, schedule.back(), n_theta, n_phi);
    LelongEstimate e;
    for (double t : schedule) e.samples.push_back(lelong_at_radius(f, t, g));
    const double last = e.samples.back(), prev = e.samples[e.samples.size() - 2];
    e.value = last;
    e.lower = std::min(last, prev);
    e.upper = std::max(last, prev);
    e.t_used = schedule.back();
    e.method = f.analytic() ? LelongMethod::AnalyticTail : LelongMethod::GridLimit;
    e.warning = convergence_warning(last, prev);
    return e;
}

/// Right t-derivative of u along the complex line d at log-radius t.
inline double directional_slope(const FunctionSpec& f, const Direction& d, double t) {
    if (!(t < 0)) throw DomainError("directional_slope: t must be negative");
    const Frame fr = Frame::focused_on(d);
    return node_slope(in_frame(f, fr), t, -kMaxLogDepth * 4, 0.0, true);
}

/// Directions always probed by maximal searches: both poles and every focus.
inline std::vector<Direction> probe_directions(const FunctionSpec& f) {
    std::vector<Direction> p{{Chart::Zeta, 0.0, 0.0}, {Chart::Xi, 0.0, 0.0}};
    for (const auto& fc : foci(f)) p.push_back(fc.dir);
    return p;
}

/// M_A(u): maximal directional slope at t = -A over grid nodes and probes.
inline double max_directional(const FunctionSpec& f, double A, const DirectionGrid& g) {
    if (!(A > 0)) throw ArgumentError("max_directional: A must be positive");
    const double t = -A;
    const auto specs = framed_specs(f, g);
    std::vector<double> v(g.size());
    parallel_for(g.size(), [&](std::size_t i) {
        const auto& nd = g.nodes[i];
        v[i] = node_slope(specs[nd.frame], t, nd.s, nd.phi_f, true);
    });
    double m = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    for (const auto& d : probe_directions(f)) m = std::max(m, directional_slope(f, d, t));
    return m;
}

inline std::vector<double> default_a_schedule(const FunctionSpec& f) {
    const double deep = -default_depth(f);
    std::vector<double> a;
    for (double x = 5.0; x < deep - 1e-9; x += 5.0) a.push_back(x);
    a.push_back(deep);
    return a;
}

/// lambda_u(0) as the decreasing limit of M_A over an increasing schedule.
inline LelongEstimate lambda_origin(const FunctionSpec& f, const std::vector<double>& a_schedule, int n_theta = 32,
                                    int n_phi = 64) {
    if (a_schedule.size() < 2) throw ArgumentError("lambda_origin: need at least two schedule points");
    for (std::size_t i = 1; i < a_schedule.size(); ++i)
        if (!(a_schedule[i] > a_schedule[i - 1])) throw ArgumentError("lambda_origin: schedule must increase");
    if (a_schedule.back() < 20) throw ArgumentError("lambda_origin: schedule must reach A >= 20");
    const DirectionGrid g = make_grid(n_theta, n_phi);
    LelongEstimate e;
    for (double A : a_schedule) e.samples.push_back(max_directional(f, A, g));
    const double last = e.samples.back(), prev = e.samples[e.samples.size() - 2];
    e.value = last;
    e.lower = std::min(last, prev);
    e.upper = std::max(last, prev);
    e.t_used = -a_schedule.back();
    e.method = f.analytic() ? LelongMethod::AnalyticTail : LelongMethod::GridLimit;
    e.warning = convergence_warning(last, prev);
    return e;
}

}  // namespace pshlab
