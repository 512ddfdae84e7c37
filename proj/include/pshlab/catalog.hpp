#pragma once

// Test functions on the unit ball of C^2: closed-form evaluation over any
// scalar type, radial profiles, symmetry checks, normalization and the
// built-in catalog.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pshlab/error.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/jet.hpp"
#include "pshlab/polynomial.hpp"

namespace pshlab {

enum class Kind { Radial, HolomorphicPairLog, MaxOfLogs, SmoothedMax, Custom };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Radial: return "radial";
        case Kind::HolomorphicPairLog: return "pair";
        case Kind::MaxOfLogs: return "max";
        case Kind::SmoothedMax: return "smax";
        case Kind::Custom: return "custom";
    }
    return "?";
}

/// Closed-form functions evaluated in double only.
struct CustomFunction {
    std::function<double(cplx, cplx)> fn;
    bool smooth_off_origin = true;
    bool radial = false;
};

inline const std::map<std::string, CustomFunction>& custom_registry() {
    static const std::map<std::string, CustomFunction> reg = {
        {"abs2", {[](cplx a, cplx b) { return std::norm(a) + std::norm(b); }, true, true}},
        {"log-plus-abs2",
         {[](cplx a, cplx b) {
              const double r2 = std::norm(a) + std::norm(b);
              return 0.5 * std::log(r2) + r2;
          },
          true, true}},
        {"neglog", {[](cplx a, cplx b) { return -0.5 * std::log(std::norm(a) + std::norm(b)); }, true, true}},
    };
    return reg;
}

struct FunctionSpec {
    std::string name;
    Kind kind = Kind::Radial;

    // Radial: a log|z|. MaxOfLogs: max(a log|z1|, b log|z2|).
    // SmoothedMax: (1/k) log(|z1|^{ka} + |z2|^{kb}). Pair: c log(|f|^2 + |g|^2).
    double a = 1.0, b = 1.0, c = 1.0, k = 1.0;
    Poly f, g;
    std::string custom;

    bool s1_invariant = false;
    bool toric = false;
    bool smooth_off_origin = false;
    double shift = 0.0;

    // Coordinates in which the spec is expressed: z = U z'. Pairs are
    // composed symbolically instead, so their frame stays the identity.
    Frame frame{};

    int dmin() const { return std::min(f.is_zero() ? 1 << 30 : f.min_degree(), g.is_zero() ? 1 << 30 : g.min_degree()); }
    int dmax() const { return std::max(f.max_degree(), g.max_degree()); }

    /// Kinds whose t-derivatives come from closed forms.
    bool analytic() const { return kind != Kind::Custom && kind != Kind::MaxOfLogs; }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << name << " " << kind_name(kind);
        switch (kind) {
            case Kind::Radial: os << " a=" << a; break;
            case Kind::HolomorphicPairLog: os << " c=" << c << " f=" << f.to_string() << " g=" << g.to_string(); break;
            case Kind::MaxOfLogs: os << " a=" << a << " b=" << b; break;
            case Kind::SmoothedMax: os << " k=" << k << " a=" << a << " b=" << b; break;
            case Kind::Custom: os << " expr=" << custom; break;
        }
        if (shift != 0.0) os << " shift=" << shift;
        return os.str();
    }
};

// ---------------------------------------------------------------- evaluation

/// u(e^t q) for q in C^2 (unit in practice), over double or Jet scalars.
template <class T>
T eval_tq(const FunctionSpec& f, const T& t, Cx<T> q1, Cx<T> q2) {
    using std::exp;
    using std::log;
    using std::log1p;
    using std::sqrt;
    if (!f.frame.is_identity()) {
        const auto z = f.frame.apply(q1, q2);
        q1 = z[0];
        q2 = z[1];
    }
    switch (f.kind) {
        case Kind::Radial: return f.a * (t + 0.5 * log(norm2(q1) + norm2(q2))) + f.shift;

        case Kind::HolomorphicPairLog: {
            const int d0 = f.dmin();
            const int top = f.dmax() - d0;
            std::vector<T> et(top + 1);
            for (int k = 0; k <= top; ++k) et[k] = (k == 0) ? T(1.0) : exp(double(k) * t);
            const int n1 = std::max(f.f.max_p1(), f.g.max_p1()), n2 = std::max(f.f.max_p2(), f.g.max_p2());
            std::vector<Cx<T>> p1(n1 + 1), p2(n2 + 1);
            p1[0] = Cx<T>(T(1.0), T(0.0));
            p2[0] = p1[0];
            for (int i = 1; i <= n1; ++i) p1[i] = p1[i - 1] * q1;
            for (int i = 1; i <= n2; ++i) p2[i] = p2[i - 1] * q2;
            auto scaled = [&](const Poly& p) {
                Cx<T> s(T(0.0), T(0.0));
                for (const auto& m : p.terms) s += (m.coef * (p1[m.p1] * p2[m.p2])) * et[m.degree() - d0];
                return s;
            };
            Cx<T> F = scaled(f.f), G = scaled(f.g);
            const double S = std::max(std::sqrt(val(norm2(F))), std::sqrt(val(norm2(G))));
            if (!(S > 0) || !std::isfinite(S))
                throw DomainError("pair evaluation underflow for " + f.name + " (use the asymptotic tail)");
            const T inv(1.0 / S);
            F = F * inv;
            G = G * inv;
            return f.c * (2.0 * d0 * t + 2.0 * std::log(S) + log(norm2(F) + norm2(G))) + f.shift;
        }

        case Kind::SmoothedMax:
        case Kind::MaxOfLogs: {
            const T m1 = norm2(q1), m2 = norm2(q2);
            const double ka = (f.kind == Kind::SmoothedMax) ? f.k * f.a : f.a;
            const double kb = (f.kind == Kind::SmoothedMax) ? f.k * f.b : f.b;
            const double inv_k = (f.kind == Kind::SmoothedMax) ? 1.0 / f.k : 1.0;
            if (val(m1) == 0.0) return inv_k * kb * (t + 0.5 * log(m2)) + f.shift;
            if (val(m2) == 0.0) return inv_k * ka * (t + 0.5 * log(m1)) + f.shift;
            const T X = ka * (t + 0.5 * log(m1));
            const T Y = kb * (t + 0.5 * log(m2));
            const bool x_big = val(X) >= val(Y);
            if (f.kind == Kind::MaxOfLogs) return (x_big ? X : Y) + f.shift;
            const T& hi = x_big ? X : Y;
            const T& lo = x_big ? Y : X;
            return inv_k * (hi + log1p(exp(lo - hi))) + f.shift;
        }

        case Kind::Custom: {
            if constexpr (std::is_same_v<T, double>) {
                const double r = std::exp(t);
                const auto& cf = custom_registry().at(f.custom);
                return cf.fn(r * cplx(q1.re, q1.im), r * cplx(q2.re, q2.im)) + f.shift;
            } else {
                throw SmoothnessError("custom function " + f.name + " has no closed-form derivatives");
            }
        }
    }
    return T(0.0);
}

/// u at a Euclidean point given over any scalar.
template <class T>
T eval_z(const FunctionSpec& f, const Cx<T>& z1, const Cx<T>& z2) {
    using std::log;
    using std::sqrt;
    const T r2 = norm2(z1) + norm2(z2);
    const T inv = 1.0 / sqrt(r2);
    return eval_tq(f, T(0.5 * log(r2)), z1 * inv, z2 * inv);
}

/// Direct evaluation at a point of B_1 \ {0}.
inline double eval(const FunctionSpec& f, const Point& p) {
    const double r = p.norm();
    if (!(r > 0) || !(r < 1)) throw DomainError("eval: point must satisfy 0 < |z| < 1");
    if (f.kind == Kind::Custom) {
        const auto z = f.frame.apply(p.z1(), p.z2());
        return custom_registry().at(f.custom).fn(z[0], z[1]) + f.shift;
    }
    if (f.s1_invariant) {
        // Route through (t, direction) so the diagonal phase drops out.
        const cplx z1 = p.z1(), z2 = p.z2();
        const Direction d = std::abs(z1) <= std::abs(z2) ? direction_from_zeta(z1 / z2)
                                                         : Direction{Chart::Xi, (z2 / z1).real(), (z2 / z1).imag()};
        const auto q = unit_vector(d);
        return eval_tq<double>(f, std::log(r), Cx<double>(q[0]), Cx<double>(q[1]));
    }
    return eval_z<double>(f, Cx<double>(p.z1()), Cx<double>(p.z2()));
}

/// Spec expressed in the rotated coordinates z' with z = U z'.
inline FunctionSpec in_frame(const FunctionSpec& f, const Frame& fr) {
    FunctionSpec out = f;
    if (fr.is_identity()) return out;
    if (f.kind == Kind::HolomorphicPairLog) {
        out.f = f.f.compose(fr);
        out.g = f.g.compose(fr);
        return out;
    }
    if (f.kind == Kind::Radial) return out;
    // Compose with any frame already present: z = U_old (U_new z').
    Frame comb;
    const auto& A = f.frame.u;
    const auto& B = fr.u;
    comb.u = {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
    out.frame = comb;
    return out;
}

// ------------------------------------------------------ tail and directions

/// Order of vanishing of (f, g) along the line through unit vector q.
inline int line_order(const FunctionSpec& f, cplx q1, cplx q2) {
    const int top = f.dmax();
    for (int d = f.dmin(); d <= top; ++d) {
        for (const Poly* p : {&f.f, &f.g}) {
            const auto a = p->form(d);
            double scale = 0.0;
            for (auto c : a) scale = std::max(scale, std::abs(c));
            if (scale == 0.0) continue;
            if (std::abs(eval_form(a, q1, q2)) > 1e-12 * scale) return d;
        }
    }
    return top;
}

/// Exact limit slope of t -> u(e^t q) as t -> -infinity, when the kind knows it.
inline std::optional<double> asymptotic_slope(const FunctionSpec& f, const Direction& d) {
    auto q = unit_vector(d);
    if (!f.frame.is_identity()) q = f.frame.apply(q[0], q[1]);
    switch (f.kind) {
        case Kind::Radial: return f.a;
        case Kind::HolomorphicPairLog: return 2.0 * f.c * line_order(f, q[0], q[1]);
        case Kind::MaxOfLogs:
        case Kind::SmoothedMax: {
            if (std::abs(q[0]) == 0.0) return f.b;
            if (std::abs(q[1]) == 0.0) return f.a;
            return std::min(f.a, f.b);
        }
        case Kind::Custom: return std::nullopt;
    }
    return std::nullopt;
}

/// Exceptional direction: a line along which the limit slope exceeds the
/// generic one. rate is the log-depth of the boundary layer per unit of t:
/// the layer sits near log|zeta'| = rate * t in the focused frame.
struct Focus {
    Direction dir;
    double rate = 0.0;
    double slope = 0.0;
};

inline std::vector<Focus> foci(const FunctionSpec& f) {
    std::vector<Focus> out;
    auto add = [&](const Direction& d, double rate, double slope) {
        for (const auto& x : out)
            if (chordal(x.dir, d) < 1e-9) return;
        out.push_back({d, rate, slope});
    };
    switch (f.kind) {
        case Kind::HolomorphicPairLog: {
            const int d0 = f.dmin();
            const auto a = f.f.form(d0), b = f.g.form(d0);
            auto nonzero = [](const std::vector<cplx>& v) {
                for (auto c : v)
                    if (c != 0.0) return true;
                return false;
            };
            const bool fa = nonzero(a), gb = nonzero(b);
            std::vector<Direction> cand = fa ? form_roots(a) : form_roots(b);
            for (const auto& dir : cand) {
                const auto q = unit_vector(dir);
                auto small = [&](const std::vector<cplx>& v) {
                    double scale = 0.0;
                    for (auto c : v) scale = std::max(scale, std::abs(c));
                    return scale == 0.0 || std::abs(eval_form(v, q[0], q[1])) <= 1e-9 * scale;
                };
                if ((fa && !small(a)) || (gb && !small(b))) continue;
                const int ord = line_order(f, q[0], q[1]);
                if (ord > d0) add(dir, double(ord - d0), 2.0 * f.c * ord);
            }
            break;
        }
        case Kind::MaxOfLogs:
        case Kind::SmoothedMax:
            if (f.a < f.b) add({Chart::Zeta, 0.0, 0.0}, f.b / f.a - 1.0, f.b);
            if (f.b < f.a) add({Chart::Xi, 0.0, 0.0}, f.a / f.b - 1.0, f.a);
            break;
        default: break;
    }
    return out;
}

// --------------------------------------------------------------- profiles

struct ProfileSample {
    double t = 0;
    Direction d;
    double u = 0;
    double u_dot = 0;
    bool has_analytic_dot = false;
};

inline constexpr double kFiniteDifferenceStepT = 1e-4;
inline constexpr double kDeepTail = -500.0;

inline ProfileSample profile(const FunctionSpec& f, double t, const Direction& d) {
    if (!(t < 0)) throw DomainError("profile: t must be negative");
    ProfileSample ps{t, d, 0, 0, false};
    const auto q = unit_vector(d);
    if (f.kind == Kind::HolomorphicPairLog && t < kDeepTail) {
        // Leading homogeneous part along the line dominates.
        const auto fq = f.frame.apply(q[0], q[1]);
        const int ord = line_order(f, fq[0], fq[1]);
        const double lead = std::norm(eval_form(f.f.form(ord), fq[0], fq[1])) +
                            std::norm(eval_form(f.g.form(ord), fq[0], fq[1]));
        ps.u = f.c * (2.0 * ord * t + std::log(lead)) + f.shift;
        ps.u_dot = 2.0 * f.c * ord;
        ps.has_analytic_dot = true;
        return ps;
    }
    if (f.analytic()) {
        using J = Jet<1>;
        const J tj = J::variable(t, 0);
        const J u = eval_tq<J>(f, tj, Cx<J>(J(q[0].real()), J(q[0].imag())), Cx<J>(J(q[1].real()), J(q[1].imag())));
        ps.u = u.v;
        ps.u_dot = u.d[0];
        ps.has_analytic_dot = true;
        return ps;
    }
    const Cx<double> a(q[0]), b(q[1]);
    const double h = kFiniteDifferenceStepT;
    ps.u = eval_tq<double>(f, t, a, b);
    ps.u_dot = (eval_tq<double>(f, t + h, a, b) - eval_tq<double>(f, t - h, a, b)) / (2 * h);
    return ps;
}

/// Derivatives of u at frame coordinates (t, s, phi), zeta' = e^{s + i phi}.
struct NodeDerivs {
    double u = 0, ut = 0, us = 0, up = 0;
    double utt = 0, uss = 0, upp = 0, uts = 0, utp = 0, usp = 0;
};

inline constexpr double kAngularStep = 2e-3;

/// f must already be expressed in the frame (see in_frame).
inline NodeDerivs node_derivs(const FunctionSpec& f, double t, double s, double phi) {
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("function " + f.name + " is not C^2 off the origin");
    NodeDerivs n;
    if (f.analytic()) {
        using J = Jet<3>;
        const J tj = J::variable(t, 0), sj = J::variable(s, 1), pj = J::variable(phi, 2);
        const auto q = frame_unit(sj, pj);
        const J u = eval_tq<J>(f, tj, q[0], q[1]);
        n.u = u.v;
        n.ut = u.d[0];
        n.us = u.d[1];
        n.up = u.d[2];
        n.utt = u.hess(0, 0);
        n.uss = u.hess(1, 1);
        n.upp = u.hess(2, 2);
        n.uts = u.hess(0, 1);
        n.utp = u.hess(0, 2);
        n.usp = u.hess(1, 2);
        return n;
    }
    auto U = [&](double tt, double ss, double pp) {
        const auto q = frame_unit(ss, pp);
        return eval_tq<double>(f, tt, q[0], q[1]);
    };
    const double ht = kFiniteDifferenceStepT, h = kAngularStep;
    n.u = U(t, s, phi);
    const double tp = U(t + ht, s, phi), tm = U(t - ht, s, phi);
    n.ut = (tp - tm) / (2 * ht);
    n.utt = (tp - 2 * n.u + tm) / (ht * ht);
    const double sp = U(t, s + h, phi), sm = U(t, s - h, phi);
    const double pp = U(t, s, phi + h), pm = U(t, s, phi - h);
    n.us = (sp - sm) / (2 * h);
    n.up = (pp - pm) / (2 * h);
    n.uss = (sp - 2 * n.u + sm) / (h * h);
    n.upp = (pp - 2 * n.u + pm) / (h * h);
    auto mixed = [&](double dt1, double ds1, double dp1, double dt2, double ds2, double dp2, double h1, double h2) {
        return (U(t + dt1 + dt2, s + ds1 + ds2, phi + dp1 + dp2) - U(t + dt1 - dt2, s + ds1 - ds2, phi + dp1 - dp2) -
                U(t - dt1 + dt2, s - ds1 + ds2, phi - dp1 + dp2) + U(t - dt1 - dt2, s - ds1 - ds2, phi - dp1 - dp2)) /
               (4 * h1 * h2);
    };
    n.uts = mixed(ht, 0, 0, 0, h, 0, ht, h);
    n.utp = mixed(ht, 0, 0, 0, 0, h, ht, h);
    n.usp = mixed(0, h, 0, 0, 0, h, h, h);
    return n;
}

// ------------------------------------------------------------- symmetry

struct InvarianceVerdict {
    bool invariant = true;
    double max_violation = 0.0;
};

/// Random point of B_1 with radius in [r_lo, r_hi].
inline Point random_point(std::mt19937_64& rng, double r_lo, double r_hi) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> ur(r_lo, r_hi);
    double x[4], nn = 0;
    for (double& v : x) {
        v = n01(rng);
        nn += v * v;
    }
    const double r = ur(rng) / std::sqrt(nn);
    return {x[0] * r, x[1] * r, x[2] * r, x[3] * r};
}

inline Point rotate_diagonal(const Point& p, double angle) {
    const cplx e = std::polar(1.0, angle);
    return Point::from(e * p.z1(), e * p.z2());
}

inline InvarianceVerdict check_s1_invariance(const FunctionSpec& f, int n_samples = 200, double tol = 1e-9,
                                             std::uint64_t seed = 12345) {
    if (n_samples < 100) throw ArgumentError("check_s1_invariance: need at least 100 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(0.0, 2 * kPi);
    InvarianceVerdict v;
    for (int i = 0; i < n_samples; ++i) {
        const Point p = random_point(rng, 0.05, 0.95);
        const double th = ua(rng);
        // Compare without the invariant shortcut so a wrong flag is caught.
        FunctionSpec raw = f;
        raw.s1_invariant = false;
        const double u0 = eval(raw, p), u1 = eval(raw, rotate_diagonal(p, th));
        const double viol = std::abs(u1 - u0) / (1.0 + std::abs(u0));
        v.max_violation = std::max(v.max_violation, viol);
    }
    v.invariant = v.max_violation <= tol;
    return v;
}

// ----------------------------------------------------------- normalization

/// Shifts f so the sampled supremum over B_1 is at most -1.
inline FunctionSpec normalize(const FunctionSpec& f, int n_samples = 2000, std::uint64_t seed = 777) {
    std::mt19937_64 rng(seed);
    // Shells r = 10^{-k}: the supremum over the shell of a function that is
    // bounded above near 0 cannot grow as the shell shrinks (maximum principle).
    std::vector<double> shell_sup;
    const int per_shell = std::max(8, n_samples / 40);
    for (int k = 0; k <= 24; ++k) {
        const double r = (k == 0) ? 1.0 - 1e-12 : std::pow(10.0, -k);
        double sup = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < per_shell; ++i) {
            Point p = random_point(rng, r, r);
            sup = std::max(sup, eval(f, p));
        }
        shell_sup.push_back(sup);
    }
    double sup = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) sup = std::max(sup, eval(f, random_point(rng, 1e-6, 1.0 - 1e-12)));
    for (double s : shell_sup) sup = std::max(sup, s);
    const double outer = shell_sup.front();
    const double inner = shell_sup.back();
    if (!std::isfinite(sup) || inner > outer + 1.0)
        throw UnboundedError("normalize: sampled supremum of " + f.name + " diverges near the origin");
    FunctionSpec out = f;
    if (sup > -1.0) out.shift = f.shift - (1.0 + sup);
    return out;
}

// ---------------------------------------------------------- construction

inline FunctionSpec make_radial(const std::string& name, double a) {
    if (!(a > 0)) throw ArgumentError("radial: a must be positive");
    FunctionSpec f;
    f.name = name;
    f.kind = Kind::Radial;
    f.a = a;
    f.s1_invariant = f.toric = f.smooth_off_origin = true;
    return f;
}

inline FunctionSpec make_max_of_logs(const std::string& name, double a, double b) {
    if (!(a > 0 && b > 0)) throw ArgumentError("max: a, b must be positive");
    FunctionSpec f;
    f.name = name;
    f.kind = Kind::MaxOfLogs;
    f.a = a;
    f.b = b;
    f.s1_invariant = f.toric = true;
    f.smooth_off_origin = false;
    return f;
}

inline FunctionSpec make_smoothed_max(const std::string& name, double k, double a, double b) {
    if (!(k > 0 && a > 0 && b > 0)) throw ArgumentError("smax: k, a, b must be positive");
    if (k * a < 2.0 || k * b < 2.0) throw ArgumentError("smax: need k*a >= 2 and k*b >= 2 for C^2 regularity");
    FunctionSpec f;
    f.name = name;
    f.kind = Kind::SmoothedMax;
    f.k = k;
    f.a = a;
    f.b = b;
    f.s1_invariant = f.toric = f.smooth_off_origin = true;
    return f;
}

inline FunctionSpec make_custom(const std::string& name, const std::string& expr) {
    const auto it = custom_registry().find(expr);
    if (it == custom_registry().end()) throw ArgumentError("custom: unknown expression '" + expr + "'");
    FunctionSpec f;
    f.name = name;
    f.kind = Kind::Custom;
    f.custom = expr;
    f.smooth_off_origin = it->second.smooth_off_origin;
    f.s1_invariant = f.toric = it->second.radial;
    return f;
}

/// Common zero of (f, g) in B_1 \ {0} found by complex Newton from a shell
/// lattice of starting points, if any.
inline std::optional<Point> common_zero(const Poly& f, const Poly& g) {
    const int nr = 6, nd = 12;
    for (int ir = 0; ir < nr; ++ir) {
        const double r = 0.15 + 0.8 * ir / (nr - 1);
        for (int i = 0; i < nd; ++i)
            for (int j = 0; j < nd; ++j) {
                const double th = kPi * (i + 0.5) / nd, ph = 2 * kPi * j / nd;
                const Point p0 = point_from_hopf({r, 0.7 * j, th, ph});
                cplx z1 = p0.z1(), z2 = p0.z2();
                for (int it = 0; it < 60; ++it) {
                    const cplx F = f.eval(z1, z2), G = g.eval(z1, z2);
                    const auto gf = f.grad(z1, z2), gg = g.grad(z1, z2);
                    const cplx det = gf[0] * gg[1] - gf[1] * gg[0];
                    if (std::abs(det) < 1e-300) break;
                    const cplx d1 = (F * gg[1] - gf[1] * G) / det;
                    const cplx d2 = (gf[0] * G - F * gg[0]) / det;
                    z1 -= d1;
                    z2 -= d2;
                    if (std::abs(z1) + std::abs(z2) > 10) break;
                }
                const double rr = std::sqrt(std::norm(z1) + std::norm(z2));
                const double res = std::abs(f.eval(z1, z2)) + std::abs(g.eval(z1, z2));
                if (res < 1e-12 && rr > 1e-3 && rr < 1.0) return Point::from(z1, z2);
            }
    }
    return std::nullopt;
}

/// c log(|f|^2 + |g|^2) with flags derived from the polynomials.
inline FunctionSpec smoothed_surrogate(const std::string& name, double c, const Poly& f, const Poly& g) {
    if (!(c > 0)) throw ArgumentError("pair: c must be positive");
    if (f.is_zero() && g.is_zero()) throw ArgumentError("pair: f and g both vanish");
    for (const Poly* p : {&f, &g})
        for (const auto& m : p->terms)
            if (m.degree() == 0) throw ArgumentError("pair: f and g must vanish at the origin");
    if (const auto z = common_zero(f, g))
        throw DomainError("pair " + name + ": f and g have a common zero in B_1 \\ {0}");
    FunctionSpec s;
    s.name = name;
    s.kind = Kind::HolomorphicPairLog;
    s.c = c;
    s.f = f;
    s.g = g;
    s.smooth_off_origin = true;
    s.s1_invariant = (f.is_zero() || f.homogeneous()) && (g.is_zero() || g.homogeneous());
    s.toric = (f.is_zero() || f.single_monomial()) && (g.is_zero() || g.single_monomial());
    return s;
}

inline FunctionSpec make_demailly(int m) {
    Poly f = Poly::parse("z1");
    Poly g = Poly::parse("z2^" + std::to_string(m * m));
    return smoothed_surrogate("demailly-m" + std::to_string(m), 1.0 / (2.0 * m), f, g);
}

inline FunctionSpec make_u1(int n) {
    return smoothed_surrogate("u1-n" + std::to_string(n), 1.0 / (2.0 * n), Poly::parse("z2-z1"),
                              Poly::parse("z2^" + std::to_string(n)));
}

inline FunctionSpec make_u2(int n) {
    const std::string p = std::to_string(n);
    return smoothed_surrogate("u2-n" + p, 1.0 / (2.0 * n), Poly::parse("z2^" + p + "-z1^" + p),
                              Poly::parse("z2^" + p));
}

inline FunctionSpec make_coman_guedj(int n) {
    const std::string p = std::to_string(n);
    return smoothed_surrogate("coman-guedj-n" + p, 1.0 / (2.0 * n), Poly::parse("z2-z1^" + p),
                              Poly::parse("z2^" + p));
}

/// Names of the built-in catalog, in report order.
inline std::vector<std::string> catalog_names() {
    return {"log-z",          "radial-a0.5",     "radial-a1",      "radial-a2",    "demailly-m1",
            "demailly-m2",    "demailly-m3",     "u1-n5",          "u2-n5",        "coman-guedj-n5",
            "abs2",           "log-plus-abs2",   "smax-k2-a1-b3",  "max-demailly-m2"};
}

inline std::string format_param(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

/// Built-in entry by name. Parametric families are also accepted:
/// radial-a<x>, demailly-m<k>, u1-n<k>, u2-n<k>, coman-guedj-n<k>, max-demailly-m<k>.
inline FunctionSpec builtin(const std::string& name) {
    auto num_after = [&](const std::string& prefix) -> std::optional<double> {
        if (name.rfind(prefix, 0) != 0) return std::nullopt;
        const std::string rest = name.substr(prefix.size());
        if (rest.empty()) return std::nullopt;
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(rest, &used);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (used != rest.size()) return std::nullopt;
        return x;
    };
    auto positive_int = [](double x) { return x >= 1 && x == std::floor(x) && x <= 12; };
    if (name == "log-z") return make_radial(name, 1.0);
    if (auto a = num_after("radial-a"); a && *a > 0) return make_radial(name, *a);
    if (auto m = num_after("demailly-m"); m && positive_int(*m)) return make_demailly(int(*m));
    if (auto m = num_after("max-demailly-m"); m && positive_int(*m)) return make_max_of_logs(name, 1.0 / *m, *m);
    if (auto n = num_after("u1-n"); n && positive_int(*n)) return make_u1(int(*n));
    if (auto n = num_after("u2-n"); n && positive_int(*n)) return make_u2(int(*n));
    if (auto n = num_after("coman-guedj-n"); n && positive_int(*n) && *n >= 2) return make_coman_guedj(int(*n));
    if (name == "smax-k2-a1-b3") return make_smoothed_max(name, 2.0, 1.0, 3.0);
    if (name == "abs2" || name == "log-plus-abs2") return make_custom(name, name);
    throw UnknownFunctionError(name);
}

// ------------------------------------------------------------- spec files

/// One record: `name kind key=value ...` with kind in {radial, pair, max, smax, custom}.
inline FunctionSpec parse_spec_line(const std::string& line) {
    std::istringstream is(line);
    std::string name, kind, tok;
    is >> name >> kind;
    if (name.empty() || kind.empty()) throw ArgumentError("spec line needs a name and a kind: " + line);
    std::map<std::string, std::string> kv;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ArgumentError("expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto num = [&](const std::string& key, std::optional<double> def = std::nullopt) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            if (def) return *def;
            throw ArgumentError("spec " + name + ": missing " + key);
        }
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw ArgumentError("spec " + name + ": bad number for " + key);
        }
    };
    FunctionSpec f;
    if (kind == "radial") f = make_radial(name, num("a"));
    else if (kind == "max") f = make_max_of_logs(name, num("a"), num("b"));
    else if (kind == "smax") f = make_smoothed_max(name, num("k"), num("a"), num("b"));
    else if (kind == "custom") {
        if (!kv.count("expr")) throw ArgumentError("spec " + name + ": missing expr");
        f = make_custom(name, kv["expr"]);
    } else if (kind == "pair") {
        if (!kv.count("f") || !kv.count("g")) throw ArgumentError("spec " + name + ": pair needs f= and g=");
        f = smoothed_surrogate(name, num("c"), Poly::parse(kv["f"]), Poly::parse(kv["g"]));
    } else {
        throw ArgumentError("spec " + name + ": unknown kind '" + kind + "'");
    }
    f.shift = num("shift", 0.0);
    return f;
}

inline std::vector<FunctionSpec> load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open spec file " + path);
    std::vector<FunctionSpec> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_spec_line(line));
    }
    return out;
}

}  // namespace pshlab
