#pragma once

// Second-order forward-mode automatic differentiation and a minimal complex
// type that works over any scalar (double or Jet).

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace pshlab {

/// Value, gradient and symmetric Hessian with respect to N seed variables.
template <int N>
struct Jet {
    static constexpr int H = N * (N + 1) / 2;

    double v = 0.0;
    std::array<double, N> d{};
    std::array<double, H> h{};

    Jet() = default;
    Jet(double value) : v(value) {}  // NOLINT: implicit constants are convenient

    static constexpr int idx(int i, int j) {
        if (i > j) {
            int t = i;
            i = j;
            j = t;
        }
        return i * N - i * (i - 1) / 2 + (j - i);
    }

    /// Independent variable number i with value x.
    static Jet variable(double x, int i) {
        Jet r(x);
        r.d[i] = 1.0;
        return r;
    }

    double hess(int i, int j) const { return h[idx(i, j)]; }

    Jet& operator+=(const Jet& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        for (int i = 0; i < H; ++i) h[i] += o.h[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        for (int i = 0; i < H; ++i) h[i] -= o.h[i];
        return *this;
    }
    Jet& operator*=(double s) {
        v *= s;
        for (auto& x : d) x *= s;
        for (auto& x : h) x *= s;
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }

    friend Jet operator-(Jet a) {
        a *= -1.0;
        return a;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) {
        a.v += b;
        return a;
    }
    friend Jet operator+(double b, Jet a) {
        a.v += b;
        return a;
    }
    friend Jet operator-(Jet a, double b) {
        a.v -= b;
        return a;
    }
    friend Jet operator-(double b, const Jet& a) { return (-a) + b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        r.v = a.v * b.v;
        for (int i = 0; i < N; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j) {
                const int k = idx(i, j);
                r.h[k] = a.v * b.h[k] + a.h[k] * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i];
            }
        return r;
    }

    /// f(x) given f, f', f'' at x.v.
    Jet chain(double f0, double f1, double f2) const {
        Jet r;
        r.v = f0;
        for (int i = 0; i < N; ++i) r.d[i] = f1 * d[i];
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j) {
                const int k = idx(i, j);
                r.h[k] = f1 * h[k] + f2 * d[i] * d[j];
            }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        const double iv = 1.0 / b.v;
        return a * b.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
    }
    friend Jet operator/(double a, const Jet& b) {
        const double iv = 1.0 / b.v;
        return b.chain(a * iv, -a * iv * iv, 2.0 * a * iv * iv * iv);
    }
};

template <int N>
Jet<N> log(const Jet<N>& x) {
    const double iv = 1.0 / x.v;
    return x.chain(std::log(x.v), iv, -iv * iv);
}
template <int N>
Jet<N> log1p(const Jet<N>& x) {
    const double iv = 1.0 / (1.0 + x.v);
    return x.chain(std::log1p(x.v), iv, -iv * iv);
}
template <int N>
Jet<N> exp(const Jet<N>& x) {
    const double e = std::exp(x.v);
    return x.chain(e, e, e);
}
template <int N>
Jet<N> sqrt(const Jet<N>& x) {
    const double s = std::sqrt(x.v);
    return x.chain(s, 0.5 / s, -0.25 / (s * x.v));
}
template <int N>
Jet<N> sin(const Jet<N>& x) {
    const double s = std::sin(x.v), c = std::cos(x.v);
    return x.chain(s, c, -s);
}
template <int N>
Jet<N> cos(const Jet<N>& x) {
    const double s = std::sin(x.v), c = std::cos(x.v);
    return x.chain(c, -s, -c);
}

inline double val(double x) { return x; }
template <int N>
double val(const Jet<N>& x) {
    return x.v;
}

/// Complex number over an arbitrary real scalar.
template <class T>
struct Cx {
    T re{}, im{};

    Cx() = default;
    Cx(T r, T i) : re(r), im(i) {}
    explicit Cx(const std::complex<double>& c) : re(c.real()), im(c.imag()) {}

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const std::complex<double>& c, const Cx& a) {
        return {a.re * c.real() - a.im * c.imag(), a.im * c.real() + a.re * c.imag()};
    }
    friend Cx operator*(const Cx& a, const T& s) { return {a.re * s, a.im * s}; }
    Cx& operator+=(const Cx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
};

template <class T>
T norm2(const Cx<T>& z) {
    return z.re * z.re + z.im * z.im;
}

/// e^{i a} for a real scalar a.
template <class T>
Cx<T> expi(const T& a) {
    using std::cos;
    using std::sin;
    return {cos(a), sin(a)};
}

}  // namespace pshlab
