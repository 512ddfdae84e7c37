#pragma once

// Quadrature on CP^1 with the Fubini-Study measure, the round Laplacian
// Delta_Theta, and finite differences in t.

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/error.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/parallel.hpp"

namespace pshlab {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw ArgumentError("gauss_legendre: n must be positive");
    const auto pos = boost::math::legendre_p_zeros<double>(n);  // nonnegative zeros
    std::vector<double> x;
    for (double z : pos)
        if (z > 0) x.push_back(-z);
    std::reverse(x.begin(), x.end());
    std::sort(x.begin(), x.end());
    for (double z : pos) x.push_back(z);
    std::sort(x.begin(), x.end());
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dp = boost::math::legendre_p_prime(n, x[i]);
        w[i] = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
    }
    return {x, w};
}

inline double sech2(double s) {
    const double e = std::exp(-2.0 * std::abs(s));
    return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

inline double cosh2(double s) { return 1.0 / sech2(s); }

struct GridNode {
    Direction dir;
    double theta = 0, phi = 0;  // spherical angles of the direction
    int frame = 0;              // index into DirectionGrid::frames
    double s = 0, phi_f = 0;    // frame coordinate zeta' = e^{s + i phi_f}
};

struct DirectionGrid {
    std::vector<GridNode> nodes;
    std::vector<double> weights;  // units of omega-measure
    int n_theta = 0, n_phi = 0;
    std::vector<Frame> frames{Frame::identity(), Frame::swap()};
    std::string kind = "plain";
    double s_lo = 0, s_hi = 0;  // adapted grids only

    std::size_t size() const { return nodes.size(); }

    std::string describe() const {
        if (kind == "plain") return "plain " + std::to_string(n_theta) + "x" + std::to_string(n_phi);
        std::string s = "adapted " + std::to_string(n_theta) + "x" + std::to_string(n_phi);
        s += " s=[" + format_param(s_lo) + "," + format_param(s_hi) + "]";
        return s;
    }
};

/// Gauss-Legendre in cos(theta) times uniform phi.
inline DirectionGrid make_grid(int n_theta, int n_phi) {
    if (n_theta < 8 || n_phi < 8) throw ArgumentError("make_grid: need n_theta >= 8 and n_phi >= 8");
    DirectionGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    const auto [x, w] = gauss_legendre(n_theta);
    const double dphi = 2 * kPi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(x[i]);
        const double half_tan = std::tan(0.5 * theta);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            GridNode nd;
            nd.theta = theta;
            nd.phi = phi;
            nd.dir = direction_of({1.0, 0.0, theta, phi});
            if (theta <= 0.5 * kPi) {
                nd.frame = 0;
                nd.s = std::log(half_tan);
                nd.phi_f = phi;
            } else {
                nd.frame = 1;
                nd.s = -std::log(half_tan);
                nd.phi_f = -phi;
            }
            g.nodes.push_back(nd);
            g.weights.push_back(w[i] * dphi * 0.25);
        }
    }
    return g;
}

inline constexpr double kTailWidth = 20.0;   // sech^2 tail beyond this is below e^-40
inline constexpr double kLayerMargin = 25.0; // depth below a boundary layer
inline constexpr double kMaxLogDepth = 340.0;

/// Log-stereographic grid: composite Gauss-Legendre panels in s = log|zeta'|
/// and uniform phi, in a unitary frame that puts the exceptional direction
/// of f at zeta' = 0. Layers of width e^{rate t} around that direction are
/// then resolved for every t >= t_min. An N x M request gives N/8 nodes per
/// unit-width panel and M/2 phi nodes; toric specs use 4 phi nodes. Specs
/// without an exceptional direction get the plain N x M grid.
inline DirectionGrid make_adapted_grid(const FunctionSpec& f, double t_min, int n_theta = 64, int n_phi = 128) {
    if (n_theta < 16 || n_phi < 8) throw ArgumentError("make_adapted_grid: need n_theta >= 16 and n_phi >= 8");
    if (!(t_min < 0)) throw ArgumentError("make_adapted_grid: t_min must be negative");
    const auto fc = foci(f);
    if (fc.empty()) return make_grid(n_theta, n_phi);
    const int n_per_panel = n_theta / 8;
    DirectionGrid g;
    g.kind = "adapted";
    double lo = -kTailWidth, hi = kTailWidth;
    if (fc.size() == 1) {
        g.frames.push_back(Frame::focused_on(fc[0].dir));
        lo = fc[0].rate * t_min - kLayerMargin;
    } else if (fc.size() == 2 && chordal(fc[0].dir, fc[1].dir) > 1.0 - 1e-9) {
        g.frames.push_back(Frame::focused_on(fc[0].dir));
        lo = fc[0].rate * t_min - kLayerMargin;
        hi = -fc[1].rate * t_min + kLayerMargin;
    } else {
        throw ArgumentError("make_adapted_grid: more than one non-antipodal exceptional direction in " + f.name);
    }
    lo = std::max(std::min(lo, -kTailWidth), -kMaxLogDepth);
    hi = std::min(std::max(hi, kTailWidth), kMaxLogDepth);
    g.s_lo = lo;
    g.s_hi = hi;
    const int frame = static_cast<int>(g.frames.size()) - 1;
    const int np = f.toric ? 4 : n_phi / 2;
    const int panels = static_cast<int>(std::ceil(hi - lo));
    const double width = (hi - lo) / panels;
    const auto [x, w] = gauss_legendre(n_per_panel);
    const double dphi = 2 * kPi / np;
    g.n_theta = panels * n_per_panel;
    g.n_phi = np;
    g.nodes.reserve(static_cast<std::size_t>(g.n_theta) * np);
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        for (int i = 0; i < n_per_panel; ++i) {
            const double s = a + 0.5 * width * (x[i] + 1.0);
            const double ws = 0.5 * width * w[i];
            for (int j = 0; j < np; ++j) {
                const double phi = (j + 0.5) * dphi;
                GridNode nd;
                nd.frame = frame;
                nd.s = s;
                nd.phi_f = phi;
                nd.dir = frame_direction(g.frames[frame], s, phi);
                const auto ang = angles_of(nd.dir);
                nd.theta = ang[0];
                nd.phi = ang[1];
                g.nodes.push_back(nd);
                g.weights.push_back(0.25 * sech2(s) * ws * dphi);
            }
        }
    }
    return g;
}

/// Sum of values times weights, pairwise.
inline double integrate(const std::vector<double>& values, const DirectionGrid& g) {
    if (values.size() != g.size()) throw ArgumentError("integrate: size mismatch");
    std::vector<double> prod(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) prod[i] = values[i] * g.weights[i];
    return pairwise_sum(prod);
}

/// Specs rotated into each frame of the grid.
inline std::vector<FunctionSpec> framed_specs(const FunctionSpec& f, const DirectionGrid& g) {
    std::vector<FunctionSpec> out;
    out.reserve(g.frames.size());
    for (const auto& fr : g.frames) out.push_back(in_frame(f, fr));
    return out;
}

/// Delta_Theta u_t at every node: cosh^2(s) (u_ss + u_phiphi) in the frame chart.
inline std::vector<double> sphere_laplacian(const FunctionSpec& f, double t, const DirectionGrid& g) {
    if (!f.smooth_off_origin || f.kind == Kind::MaxOfLogs)
        throw SmoothnessError("sphere_laplacian: " + f.name + " is not C^2 off the origin");
    const auto specs = framed_specs(f, g);
    std::vector<double> lap(g.size());
    parallel_for(g.size(), [&](std::size_t i) {
        const auto& nd = g.nodes[i];
        const auto d = node_derivs(specs[nd.frame], t, nd.s, nd.phi_f);
        lap[i] = cosh2(nd.s) * (d.uss + d.upp);
    });
    return lap;
}

/// Centered differences inside, one-sided second-order at the ends.
inline std::vector<double> t_derivative(const std::vector<std::pair<double, double>>& samples, int order) {
    const std::size_t n = samples.size();
    if (n < 3) throw ArgumentError("t_derivative: need at least 3 samples");
    if (order != 1 && order != 2) throw ArgumentError("t_derivative: order must be 1 or 2");
    for (std::size_t i = 1; i < n; ++i)
        if (!(samples[i].first > samples[i - 1].first)) throw ArgumentError("t_derivative: t must increase strictly");
    std::vector<double> out(n);
    auto first3 = [&](std::size_t a, std::size_t b, std::size_t c, double at) {
        // derivative at `at` of the parabola through three samples
        const double x0 = samples[a].first, x1 = samples[b].first, x2 = samples[c].first;
        const double y0 = samples[a].second, y1 = samples[b].second, y2 = samples[c].second;
        const double l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
        const double l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
        const double l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
        return y0 * l0 + y1 * l1 + y2 * l2;
    };
    auto second3 = [&](std::size_t a, std::size_t b, std::size_t c) {
        const double x0 = samples[a].first, x1 = samples[b].first, x2 = samples[c].first;
        const double y0 = samples[a].second, y1 = samples[b].second, y2 = samples[c].second;
        return 2.0 * (y0 / ((x0 - x1) * (x0 - x2)) + y1 / ((x1 - x0) * (x1 - x2)) + y2 / ((x2 - x0) * (x2 - x1)));
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = (i == 0) ? 0 : (i == n - 1 ? n - 3 : i - 1);
        out[i] = (order == 1) ? first3(a, a + 1, a + 2, samples[i].first) : second3(a, a + 1, a + 2);
    }
    return out;
}

}  // namespace pshlab
