#pragma once

#include <array>
#include <cmath>

namespace curverecon {

template <class T>
using Vec3 = std::array<T, 3>;

// Symmetric 3x3, the only matrix shape the metric machinery needs.
template <class T>
struct Sym3 {
    T m11{}, m12{}, m13{}, m22{}, m23{}, m33{};

    T operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        if (i == 0) return j == 0 ? m11 : (j == 1 ? m12 : m13);
        if (i == 1) return j == 1 ? m22 : m23;
        return m33;
    }

    T det() const {
        return m11 * (m22 * m33 - m23 * m23) - m12 * (m12 * m33 - m23 * m13) +
               m13 * (m12 * m23 - m22 * m13);
    }

    Sym3 inverse() const {
        const T d = det();
        Sym3 r;
        r.m11 = (m22 * m33 - m23 * m23) / d;
        r.m12 = (m13 * m23 - m12 * m33) / d;
        r.m13 = (m12 * m23 - m13 * m22) / d;
        r.m22 = (m11 * m33 - m13 * m13) / d;
        r.m23 = (m12 * m13 - m11 * m23) / d;
        r.m33 = (m11 * m22 - m12 * m12) / d;
        return r;
    }
};

template <class T>
Sym3<T> operator+(const Sym3<T>& a, const Sym3<T>& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m13 + b.m13,
            a.m22 + b.m22, a.m23 + b.m23, a.m33 + b.m33};
}
template <class T>
Sym3<T> operator-(const Sym3<T>& a, const Sym3<T>& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m13 - b.m13,
            a.m22 - b.m22, a.m23 - b.m23, a.m33 - b.m33};
}
template <class T, class S>
Sym3<T> operator*(const S& s, const Sym3<T>& a) {
    return {s * a.m11, s * a.m12, s * a.m13, s * a.m22, s * a.m23, s * a.m33};
}

// Christoffel symbols of the second kind, gamma[k][i][j] symmetric in (i,j).
template <class T>
struct Gamma3 {
    std::array<std::array<std::array<T, 3>, 3>, 3> g{};

    T operator()(int k, int i, int j) const { return g[k][i][j]; }
    void set(int k, int i, int j, const T& val) {
        g[k][i][j] = val;
        g[k][j][i] = val;
    }
};

inline double sqr(double x) { return x * x; }

}  // namespace curverecon
