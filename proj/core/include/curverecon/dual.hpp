#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace curverecon {

// Make the std overloads visible next to the derivative-scalar ones so
// generic code can call sin/cos/... unqualified on either scalar type.
using std::abs;
using std::cos;
using std::exp;
using std::pow;
using std::sin;
using std::sqrt;

// Forward-mode derivative scalar: value plus a fixed-width gradient.
// Width 5 covers the coefficient algebra's independent variables
// (x1, x2, f, p, q); narrower uses just leave trailing slots at zero.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) { d.fill(0.0); }
    Dual(double value, int seed) : v(value) {
        d.fill(0.0);
        d[seed] = 1.0;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.v;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
        v *= inv;
        return *this;
    }
};

template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N> Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }

template <int N> Dual<N> operator+(double a, Dual<N> b) { return Dual<N>(a) += b; }
template <int N> Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a) -= b; }
template <int N> Dual<N> operator*(double a, Dual<N> b) { return b *= Dual<N>(a); }
template <int N> Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) /= b; }
template <int N> Dual<N> operator+(Dual<N> a, double b) { return a += Dual<N>(b); }
template <int N> Dual<N> operator-(Dual<N> a, double b) { return a -= Dual<N>(b); }
template <int N> Dual<N> operator*(Dual<N> a, double b) { return a *= Dual<N>(b); }
template <int N> Dual<N> operator/(Dual<N> a, double b) { return a /= Dual<N>(b); }

template <int N> Dual<N> operator-(Dual<N> a) {
    a.v = -a.v;
    for (int i = 0; i < N; ++i) a.d[i] = -a.d[i];
    return a;
}
template <int N> Dual<N> operator+(const Dual<N>& a) { return a; }

template <int N>
Dual<N> chain(double fv, double fp, const Dual<N>& x) {
    Dual<N> r;
    r.v = fv;
    for (int i = 0; i < N; ++i) r.d[i] = fp * x.d[i];
    return r;
}

template <int N> Dual<N> sqrt(const Dual<N>& x) {
    const double s = std::sqrt(x.v);
    return chain(s, 0.5 / s, x);
}
template <int N> Dual<N> sin(const Dual<N>& x) { return chain(std::sin(x.v), std::cos(x.v), x); }
template <int N> Dual<N> cos(const Dual<N>& x) { return chain(std::cos(x.v), -std::sin(x.v), x); }
template <int N> Dual<N> exp(const Dual<N>& x) {
    const double e = std::exp(x.v);
    return chain(e, e, x);
}
template <int N> Dual<N> pow(const Dual<N>& x, double e) {
    return chain(std::pow(x.v, e), e * std::pow(x.v, e - 1.0), x);
}
template <int N> Dual<N> abs(const Dual<N>& x) { return x.v < 0.0 ? -x : x; }

template <int N> double value(const Dual<N>& x) { return x.v; }
inline double value(double x) { return x; }

using Dual5 = Dual<5>;

}  // namespace curverecon
