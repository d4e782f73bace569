#include "curverecon/metric.hpp"

#include <cmath>

#include "curverecon/expr.hpp"

namespace curverecon {

namespace {

const double kFdStepBase = std::cbrt(std::numeric_limits<double>::epsilon());

// 4th-order central-difference step for the derivative-carrying fallback.
constexpr double kDualFdStep = 1e-5;

template <class T>
T fd_step(const T& xd) {
    return T(kFdStepBase * std::max(1.0, std::abs(value(xd))));
}

template <class T>
Gamma3<T> christoffels_from_components(const MetricField& m, const Vec3<T>& x) {
    std::array<Sym3<T>, 3> dg;
    for (int d = 0; d < 3; ++d) {
        const T h = fd_step(x[d]);
        Vec3<T> xp = x, xm = x;
        xp[d] = xp[d] + h;
        xm[d] = xm[d] - h;
        dg[d] = (1.0 / (2.0 * value(h))) * (m.components(xp) - m.components(xm));
    }
    const Sym3<T> g = m.components(x);
    const Sym3<T> gi = g.inverse();

    Gamma3<T> out;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                T sum(0.0);
                for (int s = 0; s < 3; ++s)
                    sum += gi(k, s) * (dg[i](j, s) + dg[j](i, s) - dg[s](i, j));
                out.set(k, i, j, 0.5 * sum);
            }
    return out;
}

}  // namespace

Sym3<Dual5> MetricField::components(const Vec3<Dual5>& x) const {
    if (comp_dual) return comp_dual(x);
    // Chain rule through a 4th-order finite-difference Jacobian of the
    // plain-valued components.
    const Vec3<double> x0{x[0].v, x[1].v, x[2].v};
    const Sym3<double> g0 = comp(x0);
    std::array<Sym3<double>, 3> dg;
    for (int d = 0; d < 3; ++d) {
        Vec3<double> a = x0, b = x0, c = x0, e = x0;
        a[d] += 2.0 * kDualFdStep;
        b[d] += kDualFdStep;
        c[d] -= kDualFdStep;
        e[d] -= 2.0 * kDualFdStep;
        dg[d] = (1.0 / (12.0 * kDualFdStep)) *
                ((-1.0) * comp(a) + 8.0 * comp(b) - 8.0 * comp(c) + comp(e));
    }
    auto lift = [&](double v, double d1, double d2, double d3) {
        Dual5 r(v);
        for (int i = 0; i < 5; ++i) r.d[i] = d1 * x[0].d[i] + d2 * x[1].d[i] + d3 * x[2].d[i];
        return r;
    };
    Sym3<Dual5> out;
    out.m11 = lift(g0.m11, dg[0].m11, dg[1].m11, dg[2].m11);
    out.m12 = lift(g0.m12, dg[0].m12, dg[1].m12, dg[2].m12);
    out.m13 = lift(g0.m13, dg[0].m13, dg[1].m13, dg[2].m13);
    out.m22 = lift(g0.m22, dg[0].m22, dg[1].m22, dg[2].m22);
    out.m23 = lift(g0.m23, dg[0].m23, dg[1].m23, dg[2].m23);
    out.m33 = lift(g0.m33, dg[0].m33, dg[1].m33, dg[2].m33);
    return out;
}

void MetricField::require_inside(const Vec3<double>& x) const {
    if (!inside(x))
        throw DomainError("point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " +
                          std::to_string(x[2]) + ") outside metric domain of '" + id + "'");
}

Gamma3<double> christoffels(const MetricField& m, const Vec3<double>& x) {
    m.require_inside(x);
    if (m.gamma) return m.gamma(x);
    return christoffels_from_components(m, x);
}

Gamma3<Dual5> christoffels(const MetricField& m, const Vec3<Dual5>& x) {
    if (m.gamma_dual) return m.gamma_dual(x);
    return christoffels_from_components(m, x);
}

MetricField euclidean_metric(std::array<double, 3> box) {
    MetricField m = make_metric(MetricKind::euclidean, "euclidean", box, [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        Sym3<T> g;
        g.m11 = T(1.0);
        g.m22 = T(1.0);
        g.m33 = T(1.0);
        g.m12 = T(0.0);
        g.m13 = T(0.0);
        g.m23 = T(0.0);
        return g;
    });
    attach_christoffels(m, [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        return Gamma3<T>{};
    });
    return m;
}

MetricField spherical_metric(std::array<double, 3> box) {
    // Coordinates (x1,x2,x3) = (rho-1, phi, theta-pi/2); metric
    // diag(1, rho^2 sin^2 theta, rho^2).
    MetricField m = make_metric(MetricKind::general, "spherical", box, [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        const T rho = 1.0 + x[0];
        const T st = cos(x[2]);  // sin(theta) = cos(x3)
        Sym3<T> g;
        g.m11 = T(1.0);
        g.m22 = rho * rho * st * st;
        g.m33 = rho * rho;
        g.m12 = T(0.0);
        g.m13 = T(0.0);
        g.m23 = T(0.0);
        return g;
    });
    attach_christoffels(m, [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        const T rho = 1.0 + x[0];
        const T st = cos(x[2]);
        const T ct = -sin(x[2]);  // cos(theta) = -sin(x3)
        Gamma3<T> G;
        G.set(0, 1, 1, -rho * st * st);   // rho_phiphi
        G.set(0, 2, 2, -rho);             // rho_thetatheta
        G.set(1, 0, 1, 1.0 / rho);        // phi_rhophi
        G.set(1, 1, 2, ct / st);          // phi_phitheta
        G.set(2, 0, 2, 1.0 / rho);        // theta_rhotheta
        G.set(2, 1, 1, -st * ct);         // theta_phiphi
        return G;
    });
    return m;
}

MetricField sheared_spherical_metric(double b, std::array<double, 3> box) {
    // (x1,x2,x3) = (rho-1, phi - b*(rho-1), theta-pi/2); pushforward of the
    // spherical metric under the shear, still with g13 = g23 = 0.
    return make_metric(MetricKind::general, "sheared-spherical", box, [b](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        const T rho = 1.0 + x[0];
        const T st = cos(x[2]);
        const T w = rho * rho * st * st;
        Sym3<T> g;
        g.m11 = 1.0 + b * b * w;
        g.m12 = b * w;
        g.m22 = w;
        g.m33 = rho * rho;
        g.m13 = T(0.0);
        g.m23 = T(0.0);
        return g;
    });
}

MetricField sphere_base_metric(std::array<double, 3> box) {
    // (x1,x2,x3) = (latitude, longitude, rho-1); metric
    // diag(rho^2, rho^2 cos^2 x1, 1).  {x3=0} is the unit sphere.
    MetricField m = make_metric(MetricKind::general, "sphere-base", box, [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        const T rho = 1.0 + x[2];
        const T c = cos(x[0]);
        Sym3<T> g;
        g.m11 = rho * rho;
        g.m22 = rho * rho * c * c;
        g.m33 = T(1.0);
        g.m12 = T(0.0);
        g.m13 = T(0.0);
        g.m23 = T(0.0);
        return g;
    });
    attach_christoffels(m, [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        const T rho = 1.0 + x[2];
        const T c = cos(x[0]);
        const T s = sin(x[0]);
        Gamma3<T> G;
        G.set(0, 0, 2, 1.0 / rho);       // lat_lat,rho
        G.set(0, 1, 1, c * s);           // lat_lonlon
        G.set(1, 0, 1, -s / c);          // lon_latlon
        G.set(1, 1, 2, 1.0 / rho);       // lon_lon,rho
        G.set(2, 0, 0, -rho);            // rho_latlat
        G.set(2, 1, 1, -rho * c * c);    // rho_lonlon
        return G;
    });
    return m;
}

MetricField metric_from_expressions(const std::string& g11, const std::string& g12,
                                    const std::string& g22, const std::string& g33,
                                    std::array<double, 3> box) {
    auto e11 = std::make_shared<Expr>(Expr::parse(g11));
    auto e12 = std::make_shared<Expr>(Expr::parse(g12));
    auto e22 = std::make_shared<Expr>(Expr::parse(g22));
    auto e33 = std::make_shared<Expr>(Expr::parse(g33));
    return make_metric(MetricKind::general, "inline", box, [e11, e12, e22, e33](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        Sym3<T> g;
        g.m11 = e11->eval(x[0], x[1], x[2]);
        g.m12 = e12->eval(x[0], x[1], x[2]);
        g.m22 = e22->eval(x[0], x[1], x[2]);
        g.m33 = e33->eval(x[0], x[1], x[2]);
        g.m13 = T(0.0);
        g.m23 = T(0.0);
        return g;
    });
}

MetricField metric_by_id(const std::string& id) {
    if (id == "euclidean") return euclidean_metric();
    if (id == "spherical") return spherical_metric();
    if (id == "sphere-base") return sphere_base_metric();
    const std::string sheared = "sheared-spherical:";
    if (id.rfind(sheared, 0) == 0) {
        try {
            size_t used = 0;
            const std::string tail = id.substr(sheared.size());
            const double b = std::stod(tail, &used);
            if (used != tail.size()) throw ConfigError("bad shear value in '" + id + "'");
            return sheared_spherical_metric(b);
        } catch (const std::logic_error&) {
            throw ConfigError("bad shear value in '" + id + "'");
        }
    }
    throw ConfigError("unknown metric id '" + id + "'");
}

}  // namespace curverecon
