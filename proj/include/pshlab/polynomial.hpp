#pragma once

// Polynomials in (z1, z2) with complex coefficients: evaluation, unitary
// change of variables, homogeneous parts and the roots of binary forms.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/error.hpp"
#include "pshlab/hopf.hpp"

namespace pshlab {

inline cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

struct Monomial {
    cplx coef{1.0, 0.0};
    int p1 = 0, p2 = 0;

    int degree() const { return p1 + p2; }
};

struct Poly {
    std::vector<Monomial> terms;

    bool is_zero() const { return terms.empty(); }

    int min_degree() const {
        int d = 1 << 30;
        for (const auto& m : terms) d = std::min(d, m.degree());
        return d;
    }
    int max_degree() const {
        int d = -1;
        for (const auto& m : terms) d = std::max(d, m.degree());
        return d;
    }
    int max_p1() const {
        int d = 0;
        for (const auto& m : terms) d = std::max(d, m.p1);
        return d;
    }
    int max_p2() const {
        int d = 0;
        for (const auto& m : terms) d = std::max(d, m.p2);
        return d;
    }
    bool homogeneous() const { return !terms.empty() && min_degree() == max_degree(); }
    bool single_monomial() const { return terms.size() == 1; }

    cplx eval(cplx z1, cplx z2) const {
        cplx s = 0.0;
        for (const auto& m : terms) s += m.coef * ipow(z1, m.p1) * ipow(z2, m.p2);
        return s;
    }

    /// Partial derivatives (df/dz1, df/dz2).
    std::array<cplx, 2> grad(cplx z1, cplx z2) const {
        cplx g1 = 0.0, g2 = 0.0;
        for (const auto& m : terms) {
            if (m.p1 > 0) g1 += m.coef * double(m.p1) * ipow(z1, m.p1 - 1) * ipow(z2, m.p2);
            if (m.p2 > 0) g2 += m.coef * double(m.p2) * ipow(z1, m.p1) * ipow(z2, m.p2 - 1);
        }
        return {g1, g2};
    }

    /// Merges equal exponents and drops coefficients below rel_tol times the
    /// largest coefficient of the same total degree.
    void simplify(double rel_tol = 1e-14) {
        std::map<std::pair<int, int>, cplx> acc;
        for (const auto& m : terms) acc[{m.p1, m.p2}] += m.coef;
        std::map<int, double> scale;
        for (const auto& [k, c] : acc) scale[k.first + k.second] = std::max(scale[k.first + k.second], std::abs(c));
        terms.clear();
        for (const auto& [k, c] : acc) {
            if (std::abs(c) <= rel_tol * scale[k.first + k.second] || c == 0.0) continue;
            terms.push_back({c, k.first, k.second});
        }
    }

    /// g(z') = f(U z').
    Poly compose(const Frame& fr) const {
        Poly out;
        for (const auto& m : terms) {
            const auto a = expand_linear(fr.u[0], fr.u[1], m.p1);
            const auto b = expand_linear(fr.u[2], fr.u[3], m.p2);
            for (const auto& x : a)
                for (const auto& y : b)
                    out.terms.push_back({m.coef * x.coef * y.coef, x.p1 + y.p1, x.p2 + y.p2});
        }
        out.simplify();
        return out;
    }

    /// Coefficients a_k of z1^k z2^(d-k) in the degree-d part.
    std::vector<cplx> form(int d) const {
        std::vector<cplx> a(d + 1, 0.0);
        for (const auto& m : terms)
            if (m.degree() == d) a[m.p1] += m.coef;
        return a;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        os.precision(17);
        bool first = true;
        for (const auto& m : terms) {
            double c = m.coef.real();
            if (!first) os << (c < 0 ? "-" : "+");
            else if (c < 0) os << "-";
            c = std::abs(c);
            bool need_star = false;
            if (c != 1.0 || m.degree() == 0) {
                os << c;
                need_star = true;
            }
            auto factor = [&](const char* name, int p) {
                if (p == 0) return;
                if (need_star) os << "*";
                os << name;
                if (p > 1) os << "^" << p;
                need_star = true;
            };
            factor("z1", m.p1);
            factor("z2", m.p2);
            first = false;
        }
        return os.str();
    }

    /// Parses sums of real-coefficient monomials, e.g. "z2-z1^5", "0.5*z1^2*z2+3".
    static Poly parse(const std::string& text) {
        Poly p;
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
        if (s.empty()) throw ArgumentError("empty polynomial");
        std::size_t i = 0;
        while (i < s.size()) {
            double sign = 1.0;
            if (s[i] == '+' || s[i] == '-') {
                sign = (s[i] == '-') ? -1.0 : 1.0;
                ++i;
            }
            Monomial m;
            m.coef = sign;
            bool any = false;
            while (i < s.size() && s[i] != '+' && s[i] != '-') {
                if (s[i] == '*') {
                    ++i;
                    continue;
                }
                if (s.compare(i, 2, "z1") == 0 || s.compare(i, 2, "z2") == 0) {
                    const bool first = s[i + 1] == '1';
                    i += 2;
                    int power = 1;
                    if (i < s.size() && s[i] == '^') {
                        std::size_t used = 0;
                        power = std::stoi(s.substr(i + 1), &used);
                        if (power < 0) throw ArgumentError("negative exponent in polynomial: " + text);
                        i += 1 + used;
                    }
                    (first ? m.p1 : m.p2) += power;
                } else {
                    std::size_t used = 0;
                    double c = 0;
                    try {
                        c = std::stod(s.substr(i), &used);
                    } catch (const std::exception&) {
                        throw ArgumentError("cannot parse polynomial: " + text);
                    }
                    m.coef *= c;
                    i += used;
                }
                any = true;
            }
            if (!any) throw ArgumentError("cannot parse polynomial: " + text);
            p.terms.push_back(m);
        }
        p.simplify(0.0);
        return p;
    }

private:
    static std::vector<Monomial> expand_linear(cplx a, cplx b, int p) {
        // (a z1 + b z2)^p
        std::vector<Monomial> out;
        double binom = 1.0;
        for (int i = 0; i <= p; ++i) {
            const cplx c = binom * ipow(a, i) * ipow(b, p - i);
            if (c != 0.0) out.push_back({c, i, p - i});
            binom = binom * (p - i) / (i + 1);
        }
        return out;
    }
};

/// Value of the binary form sum a_k z1^k z2^(d-k) at (q1, q2).
inline cplx eval_form(const std::vector<cplx>& a, cplx q1, cplx q2) {
    cplx s = 0.0;
    const int d = static_cast<int>(a.size()) - 1;
    for (int k = 0; k <= d; ++k) s += a[k] * ipow(q1, k) * ipow(q2, d - k);
    return s;
}

/// Zeros of a nonzero binary form as directions in CP^1.
inline std::vector<Direction> form_roots(const std::vector<cplx>& a) {
    std::vector<Direction> out;
    int lo = 0, hi = static_cast<int>(a.size()) - 1;
    const int d = hi;
    while (lo <= hi && a[lo] == 0.0) ++lo;
    while (hi >= lo && a[hi] == 0.0) --hi;
    if (lo > hi) throw ArgumentError("form_roots: zero form");
    if (lo > 0) out.push_back({Chart::Zeta, 0.0, 0.0});    // z1 divides the form
    if (hi < d) out.push_back({Chart::Xi, 0.0, 0.0});      // z2 divides the form
    const int n = hi - lo;
    if (n > 0) {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[lo + i] / a[hi];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        for (int i = 0; i < n; ++i) out.push_back(direction_from_zeta(es.eigenvalues()[i]));
    }
    return out;
}

/// Chordal distance between two directions.
inline double chordal(const Direction& x, const Direction& y) {
    const auto p = unit_vector(x), q = unit_vector(y);
    const double ip = std::abs(std::conj(p[0]) * q[0] + std::conj(p[1]) * q[1]);
    return std::sqrt(std::max(0.0, 1.0 - ip * ip));
}

}  // namespace pshlab
