#pragma once

// Coordinates on C^2 \ {0}: Euclidean, real Hopf (r, eta, theta, phi) and
// complex Hopf (r, eta, zeta), with zeta = z1/z2 = tan(theta/2) e^{i phi}.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "pshlab/error.hpp"
#include "pshlab/jet.hpp"

namespace pshlab {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

struct Point {
    double z1_re = 0, z1_im = 0, z2_re = 0, z2_im = 0;

    cplx z1() const { return {z1_re, z1_im}; }
    cplx z2() const { return {z2_re, z2_im}; }
    double norm() const { return std::sqrt(z1_re * z1_re + z1_im * z1_im + z2_re * z2_re + z2_im * z2_im); }

    static Point from(cplx a, cplx b) { return {a.real(), a.imag(), b.real(), b.imag()}; }
};

struct RealHopf {
    double r = 1, eta = 0, theta = 0, phi = 0;
};

enum class Chart { Zeta, Xi };

struct Direction {
    Chart chart = Chart::Zeta;
    double w_re = 0, w_im = 0;

    cplx w() const { return {w_re, w_im}; }
};

/// sin(theta/2) as a function of s = log tan(theta/2); sigma(-s) = cos(theta/2).
template <class T>
T sigma(const T& s) {
    using std::exp;
    using std::sqrt;
    if (val(s) < 0) {
        const T e = exp(s);
        return e / sqrt(1.0 + e * e);
    }
    const T e = exp(-s);
    return 1.0 / sqrt(1.0 + e * e);
}

inline double wrap(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0) y += period;
    if (y >= period) y -= period;
    return y;
}

inline RealHopf hopf_from_point(const Point& p) {
    const double r = p.norm();
    if (!(r > 0)) throw DomainError("hopf_from_point: zero point has no Hopf coordinates");
    const cplx z1 = p.z1(), z2 = p.z2();
    const double m1 = std::abs(z1), m2 = std::abs(z2);
    double a1 = std::arg(z1), a2 = std::arg(z2);
    if (m1 == 0) a1 = a2;
    if (m2 == 0) a2 = a1;
    double phi = a1 - a2, eta = a1 + a2;
    if (phi < 0) {
        phi += 2 * kPi;
        eta += 2 * kPi;
    }
    phi = wrap(phi, 2 * kPi);
    eta = wrap(eta, 4 * kPi);
    return {r, eta, 2.0 * std::atan2(m1, m2), phi};
}

inline Point point_from_hopf(const RealHopf& h) {
    const double s = std::sin(0.5 * h.theta), c = std::cos(0.5 * h.theta);
    const cplx z1 = h.r * s * std::polar(1.0, 0.5 * (h.eta + h.phi));
    const cplx z2 = h.r * c * std::polar(1.0, 0.5 * (h.eta - h.phi));
    return Point::from(z1, z2);
}

/// Canonical direction of a Hopf point: chart Zeta on the closed upper hemisphere.
inline Direction direction_of(const RealHopf& h) {
    if (h.theta <= 0.5 * kPi) {
        const cplx w = std::tan(0.5 * h.theta) * std::polar(1.0, h.phi);
        return {Chart::Zeta, w.real(), w.imag()};
    }
    const double ct = (h.theta >= kPi) ? 0.0 : 1.0 / std::tan(0.5 * h.theta);
    const cplx w = ct * std::polar(1.0, -h.phi);
    return {Chart::Xi, w.real(), w.imag()};
}

/// Chart choice for zeta with hysteresis band [0.9, 1.1] around the equator.
inline Direction direction_from_zeta(cplx zeta, Chart previous = Chart::Zeta) {
    const double m = std::abs(zeta);
    Chart chart = previous;
    if (m <= 0.9) chart = Chart::Zeta;
    if (m >= 1.1) chart = Chart::Xi;
    if (chart == Chart::Zeta) return {Chart::Zeta, zeta.real(), zeta.imag()};
    const cplx xi = 1.0 / zeta;
    return {Chart::Xi, xi.real(), xi.imag()};
}

/// Spherical angles (theta, phi) of a direction.
inline std::array<double, 2> angles_of(const Direction& d) {
    const double m = std::abs(d.w());
    if (d.chart == Chart::Zeta)
        return {2.0 * std::atan(m), m == 0 ? 0.0 : wrap(std::arg(d.w()), 2 * kPi)};
    return {2.0 * std::atan2(1.0, m), m == 0 ? 0.0 : wrap(-std::arg(d.w()), 2 * kPi)};
}

/// Unit representative (q1, q2) of the line, with zeta = q1/q2.
inline std::array<cplx, 2> unit_vector(const Direction& d) {
    const double n = std::sqrt(1.0 + std::norm(d.w()));
    if (d.chart == Chart::Zeta) return {d.w() / n, 1.0 / n};
    return {1.0 / n, d.w() / n};
}

/// Point of the line l_d on the sphere of radius e^t, with fiber angle eta.
inline Point line_point(const Direction& d, double t, double eta) {
    const auto a = angles_of(d);
    return point_from_hopf({std::exp(t), eta, a[0], a[1]});
}

/// Density of the Fubini-Study form against i dw ^ d(conj w) in either chart.
inline double fs_weight(const Direction& d) {
    const double q = 1.0 + std::norm(d.w());
    return 1.0 / (2.0 * q * q);
}

/// Unitary change of coordinates z = U z'. Frames let a chosen direction sit
/// at zeta' = 0, where the log-polar grid refines.
struct Frame {
    std::array<cplx, 4> u{1.0, 0.0, 0.0, 1.0};  // row major

    static Frame identity() { return {}; }
    static Frame swap() { return Frame{{0.0, 1.0, 1.0, 0.0}}; }

    /// Frame whose zeta' = 0 line is the direction d.
    static Frame focused_on(const Direction& d) {
        const auto q = unit_vector(d);
        const cplx a = q[0], b = q[1];
        return Frame{{std::conj(b), a, -std::conj(a), b}};
    }

    template <class T>
    std::array<Cx<T>, 2> apply(const Cx<T>& z1, const Cx<T>& z2) const {
        return {Cx<T>(u[0]) * z1 + Cx<T>(u[1]) * z2, Cx<T>(u[2]) * z1 + Cx<T>(u[3]) * z2};
    }
    std::array<cplx, 2> apply(cplx z1, cplx z2) const { return {u[0] * z1 + u[1] * z2, u[2] * z1 + u[3] * z2}; }

    bool is_identity() const { return u[0] == 1.0 && u[1] == 0.0 && u[2] == 0.0 && u[3] == 1.0; }
};

/// Frame direction (s, phi) -> unit vector in frame coordinates, fiber angle eta.
template <class T>
std::array<Cx<T>, 2> frame_unit(const T& s, const T& phi, double eta = 0.0) {
    const T half_plus = 0.5 * (phi + eta);
    const T half_minus = 0.5 * (eta - phi);
    return {expi(half_plus) * sigma(s), expi(half_minus) * sigma(-s)};
}

/// Direction of the frame coordinate zeta' = e^{s + i phi} in the original chart.
inline Direction frame_direction(const Frame& f, double s, double phi) {
    const auto q = frame_unit(s, phi);
    const auto z = f.apply(cplx(q[0].re, q[0].im), cplx(q[1].re, q[1].im));
    if (std::abs(z[0]) <= std::abs(z[1])) return direction_from_zeta(z[0] / z[1], Chart::Zeta);
    const cplx xi = z[1] / z[0];
    return {Chart::Xi, xi.real(), xi.imag()};
}

}  // namespace pshlab
