#pragma once

// The functionals along t = log r viewed as a ray of fiber potentials, and
// the checks built on it: energy identity, convexity of the primitive,
// liminf of I', the mass bound and the geodesic test.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/fiber.hpp"
#include "pshlab/lelong.hpp"
#include "pshlab/oracle.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

struct RayTrace {
    std::string f_name;
    int n_theta = 0, n_phi = 0;
    std::vector<FunctionalRecord> records;  // increasing t
    std::vector<double> dE_direct;          // -2 * integral of u_dot Delta_omega u against omega
};

inline RayTrace trace(const FunctionSpec& f, const std::vector<double>& t_grid, const DirectionGrid& g) {
    if (t_grid.empty()) throw ArgumentError("trace: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] < 0)) throw DomainError("trace: t must be negative");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ArgumentError("trace: t grid must increase");
    }
    RayTrace tr;
    tr.f_name = f.name;
    tr.n_theta = g.n_theta;
    tr.n_phi = g.n_phi;
    for (double t : t_grid) {
        tr.records.push_back(functionals_at(f, t, g));
        // Delta_omega = 2 Delta_Theta, so the direct derivative is minus the cross term.
        tr.dE_direct.push_back(-tr.records.back().cross);
    }
    return tr;
}

/// Uniform grid from t_min to t_max with the given step.
inline std::vector<double> t_range(double t_min, double t_max, double step) {
    if (!(step > 0) || !(t_max >= t_min)) throw ArgumentError("t_range: need step > 0 and t_max >= t_min");
    const int n = static_cast<int>(std::floor((t_max - t_min) / step + 1e-9));
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_min + i * step);
    return t;
}

struct IdentityCheck {
    double max_relative = 0;
    std::vector<double> t, dE_fd, j_minus_k;
};

/// Central differences of E at interior records against J - K, relative to |J| + |K|.
inline IdentityCheck check_decomposition_identity(const RayTrace& tr) {
    const auto& r = tr.records;
    if (r.size() < 3) throw ArgumentError("check_decomposition_identity: need at least three records");
    IdentityCheck c;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double d = (r[i + 1].E - r[i - 1].E) / (r[i + 1].t - r[i - 1].t);
        const double rhs = r[i].J - r[i].K;
        c.t.push_back(r[i].t);
        c.dE_fd.push_back(d);
        c.j_minus_k.push_back(rhs);
        const double scale = std::max(std::abs(r[i].J) + std::abs(r[i].K), 1e-300);
        c.max_relative = std::max(c.max_relative, std::abs(d - rhs) / scale);
    }
    return c;
}

struct ConvexityVerdict {
    bool pass = false;
    double min_first = 0, min_second = 0, max_abs_second = 0;
    std::vector<double> primitive;  // anchored to 0 at the shallowest record
};

inline void require_uniform(const RayTrace& tr, std::size_t min_records, const char* who) {
    const auto& r = tr.records;
    if (r.size() < min_records) throw ArgumentError(std::string(who) + ": too few records");
    const double h = r[1].t - r[0].t;
    for (std::size_t i = 2; i < r.size(); ++i)
        if (std::abs((r[i].t - r[i - 1].t) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ArgumentError(std::string(who) + ": records must be uniformly spaced");
}

/// Second differences of a sequence, and first differences.
inline std::pair<std::vector<double>, std::vector<double>> differences(const std::vector<double>& p) {
    std::vector<double> d1, d2;
    for (std::size_t i = 1; i < p.size(); ++i) d1.push_back(p[i] - p[i - 1]);
    for (std::size_t i = 1; i < d1.size(); ++i) d2.push_back(d1[i] - d1[i - 1]);
    return {d1, d2};
}

inline ConvexityVerdict convexity_of(const std::vector<double>& p, double tol) {
    ConvexityVerdict v;
    v.primitive = p;
    const auto [d1, d2] = differences(p);
    v.min_first = *std::min_element(d1.begin(), d1.end());
    v.min_second = *std::min_element(d2.begin(), d2.end());
    for (double x : d2) v.max_abs_second = std::max(v.max_abs_second, std::abs(x));
    v.pass = v.min_first >= -tol && v.min_second >= -tol;
    return v;
}

/// Trapezoid primitive of J - dE/dt (the J - E primitive up to a constant),
/// anchored at the shallowest record, tested for monotonicity and convexity.
/// The primitive is built from the shallow end so the anchor sits there.
inline ConvexityVerdict check_convexity(const RayTrace& tr, double tol = 1e-9) {
    require_uniform(tr, 4, "check_convexity");
    const auto& r = tr.records;
    const std::size_t n = r.size();
    std::vector<double> g(n), p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) g[i] = r[i].J - tr.dE_direct[i];
    for (std::size_t i = n - 1; i-- > 0;) p[i] = p[i + 1] - 0.5 * (r[i + 1].t - r[i].t) * (g[i] + g[i + 1]);
    return convexity_of(p, tol);
}

/// The S^1-mean primitive script_I along the trace: nondecreasing and convex.
inline ConvexityVerdict check_script_I(const RayTrace& tr, double tol = 1e-9) {
    require_uniform(tr, 3, "check_script_I");
    std::vector<double> p;
    for (const auto& rec : tr.records) p.push_back(rec.script_I);
    return convexity_of(p, tol);
}

/// First differences of I, attached to the left record.
inline std::vector<double> i_prime(const RayTrace& tr) {
    std::vector<double> d;
    const auto& r = tr.records;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) d.push_back((r[i + 1].I - r[i].I) / (r[i + 1].t - r[i].t));
    return d;
}

/// Minimum of I' over the deepest quarter of the trace.
inline double liminf_Iprime(const RayTrace& tr) {
    if (tr.records.size() < 5) throw ArgumentError("liminf_Iprime: need at least five records");
    if (tr.records.front().t > -20) throw ArgumentError("liminf_Iprime: trace must reach t <= -20");
    const auto d = i_prime(tr);
    const std::size_t q = std::max<std::size_t>(1, d.size() / 4);
    return *std::min_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(q));
}

struct MassBoundVerdict {
    bool pass = false;
    double M_A = 0;
    double min_slack = 0;  // min over checked records of rhs - K
    int checked = 0;
};

/// K(t) <= M_A (I'(t) + 2 I(t)) + J(t) at interior records with t <= -A,
/// I' by central differences.
inline MassBoundVerdict mass_bound_along_ray(const RayTrace& tr, const FunctionSpec& f, double A, double tol = 1e-9) {
    if (!(A > 0)) throw ArgumentError("mass_bound_along_ray: A must be positive");
    const auto& r = tr.records;
    if (r.size() < 3 || r.front().t > -A) throw ArgumentError("mass_bound_along_ray: trace must cover t <= -A");
    MassBoundVerdict v;
    v.M_A = max_directional(f, A, make_grid(32, 64));
    v.min_slack = INFINITY;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        if (r[i].t > -A) continue;
        const double ip = (r[i + 1].I - r[i - 1].I) / (r[i + 1].t - r[i - 1].t);
        const double rhs = v.M_A * (ip + 2 * r[i].I) + r[i].J;
        v.min_slack = std::min(v.min_slack, rhs - r[i].K);
        ++v.checked;
    }
    v.pass = v.checked > 0 && v.min_slack >= -tol;
    return v;
}

inline constexpr double kGeodesicTol = 1e-6;

struct GeodesicVerdict {
    double k_variation = 0;  // max |K/pi - K_0/pi| along the trace
    double shell_mass = 0;   // MA mass of the shell between the extreme radii, over pi^2
    bool k_constant = false, shell_vanishes = false;
    bool geodesic = false;   // both routes agree on yes
    bool consistent = false; // both routes agree
};

/// Geodesic test: K constant along the trace, and independently the volume
/// integral of the MA density over the traced shell vanishes.
inline GeodesicVerdict detect_geodesic(const RayTrace& tr, const FunctionSpec& f) {
    const auto& r = tr.records;
    if (r.size() < 2) throw ArgumentError("detect_geodesic: need at least two records");
    GeodesicVerdict v;
    for (const auto& rec : r) v.k_variation = std::max(v.k_variation, std::abs(rec.K - r.front().K) / kPi);
    v.shell_mass = shell_grid(f, std::exp(r.front().t), std::exp(r.back().t), 16, 8).first / (kPi * kPi);
    v.k_constant = v.k_variation < kGeodesicTol;
    v.shell_vanishes = std::abs(v.shell_mass) < kGeodesicTol;
    v.consistent = v.k_constant == v.shell_vanishes;
    v.geodesic = v.k_constant && v.shell_vanishes;
    return v;
}

struct TailImplication {
    double delta = 0;
    double iprime_tail = 0, i_tail = 0, k_tail = 0;
    double M2 = 0;
    bool premise = false, conclusion = false;
    bool holds() const { return !premise || conclusion; }
};

/// Quantified form of "nu = 0 forces tau = 0": over the deepest quarter, if
/// max I' < delta and max I < delta then max K < (2 M_2 + 1) 3 delta.
inline TailImplication vanishing_tail(const RayTrace& tr, const FunctionSpec& f, double delta) {
    if (tr.records.size() < 5) throw ArgumentError("vanishing_tail: need at least five records");
    TailImplication c;
    c.delta = delta;
    const auto d = i_prime(tr);
    const std::size_t q = std::max<std::size_t>(1, d.size() / 4);
    for (std::size_t i = 0; i < q; ++i) {
        c.iprime_tail = std::max(c.iprime_tail, std::abs(d[i]));
        c.i_tail = std::max(c.i_tail, std::abs(tr.records[i].I));
        c.k_tail = std::max(c.k_tail, std::abs(tr.records[i].K));
    }
    c.M2 = max_directional(f, 2.0, make_grid(32, 64));
    c.premise = c.iprime_tail < delta && c.i_tail < delta;
    c.conclusion = c.k_tail < (2 * c.M2 + 1) * 3 * delta;
    return c;
}

}  // namespace pshlab
