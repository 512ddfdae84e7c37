#pragma once

// Globally adaptive cubature on boxes in R^3 with the degree-7 Genz-Malik
// rule and its embedded degree-5 rule for the error estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "pshlab/error.hpp"
#include "pshlab/parallel.hpp"

namespace pshlab {

using Vec3 = std::array<double, 3>;

struct Box3 {
    Vec3 center{}, half{};
    double value = 0, error = 0;
    int split_dim = 0;
};

struct CubatureResult {
    double value = 0;
    double error = 0;
    long evaluations = 0;
    bool converged = false;
};

template <class F>
void genz_malik(const F& fn, Box3& b) {
    constexpr double n = 3;
    static const double l2 = std::sqrt(9.0 / 70.0), l4 = std::sqrt(9.0 / 10.0), l5 = std::sqrt(9.0 / 19.0);
    static const double w1 = (12824.0 - 9120.0 * n + 400.0 * n * n) / 19683.0, w2 = 980.0 / 6561.0,
                        w3 = (1820.0 - 400.0 * n) / 19683.0, w4 = 200.0 / 19683.0, w5 = 6859.0 / 19683.0 / 8.0;
    static const double e1 = (729.0 - 950.0 * n + 50.0 * n * n) / 729.0, e2 = 245.0 / 486.0,
                        e3 = (265.0 - 100.0 * n) / 1458.0, e4 = 25.0 / 729.0;
    const Vec3& c = b.center;
    const Vec3& h = b.half;
    auto at = [&](double d0, double d1, double d2) { return fn(Vec3{c[0] + d0 * h[0], c[1] + d1 * h[1], c[2] + d2 * h[2]}); };
    const double f0 = at(0, 0, 0);
    double s2 = 0, s3 = 0, s4 = 0, s5 = 0, best = -1;
    for (int i = 0; i < 3; ++i) {
        Vec3 p{}, q{};
        p[i] = l2;
        q[i] = l4;
        const double a = at(p[0], p[1], p[2]) + at(-p[0], -p[1], -p[2]);
        const double bq = at(q[0], q[1], q[2]) + at(-q[0], -q[1], -q[2]);
        s2 += a;
        s3 += bq;
        const double diff = std::abs(a - 2 * f0 - (l2 * l2 / (l4 * l4)) * (bq - 2 * f0));
        if (diff > best) {
            best = diff;
            b.split_dim = i;
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int si : {-1, 1})
                for (int sj : {-1, 1}) {
                    Vec3 p{};
                    p[i] = si * l4;
                    p[j] = sj * l4;
                    s4 += at(p[0], p[1], p[2]);
                }
    for (int a : {-1, 1})
        for (int bb : {-1, 1})
            for (int cc : {-1, 1}) s5 += at(a * l5, bb * l5, cc * l5);
    const double vol = 8.0 * h[0] * h[1] * h[2];
    b.value = vol * (w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
    const double low = vol * (e1 * f0 + e2 * s2 + e3 * s3 + e4 * s4);
    b.error = std::abs(b.value - low);
}

/// Integral of fn over the union of initial boxes, refining the box with the
/// largest error estimate until the total error is below
/// max(abs_tol, rel_tol |value|) or max_evals is exhausted.
template <class F>
CubatureResult adaptive_cubature(const F& fn, std::vector<Box3> boxes, double rel_tol, double abs_tol,
                                 long max_evals) {
    constexpr long per_box = 33;
    auto cmp = [](const Box3& a, const Box3& b) { return a.error < b.error; };
    std::priority_queue<Box3, std::vector<Box3>, decltype(cmp)> heap(cmp);
    parallel_for(boxes.size(), [&](std::size_t i) { genz_malik(fn, boxes[i]); });
    CubatureResult r;
    r.evaluations = per_box * static_cast<long>(boxes.size());
    for (auto& b : boxes) heap.push(b);
    auto totals = [&]() {
        // Deterministic re-summation over the heap contents.
        std::vector<Box3> all;
        auto copy = heap;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::vector<double> v(all.size()), e(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            v[i] = all[i].value;
            e[i] = all[i].error;
        }
        return std::pair<double, double>{pairwise_sum(v), pairwise_sum(e)};
    };
    double value = 0, error = 0;
    for (const auto& b : boxes) {
        value += b.value;
        error += b.error;
    }
    while (r.evaluations + 2 * per_box <= max_evals) {
        if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
            r.converged = true;
            break;
        }
        Box3 worst = heap.top();
        heap.pop();
        Box3 lo = worst, hi = worst;
        const int d = worst.split_dim;
        lo.half[d] = hi.half[d] = 0.5 * worst.half[d];
        lo.center[d] -= lo.half[d];
        hi.center[d] += hi.half[d];
        genz_malik(fn, lo);
        genz_malik(fn, hi);
        r.evaluations += 2 * per_box;
        value += lo.value + hi.value - worst.value;
        error += lo.error + hi.error - worst.error;
        heap.push(lo);
        heap.push(hi);
    }
    const auto [v, e] = totals();
    r.value = v;
    r.error = e;
    if (!r.converged) r.converged = e <= std::max(abs_tol, rel_tol * std::abs(v));
    return r;
}

}  // namespace pshlab
