#include "curverecon/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "curverecon/errors.hpp"

namespace curverecon {

namespace {

// First-form inner product of base-plane directions.
double form_dot(const FundamentalForms& ff, const std::array<double, 2>& a,
                const std::array<double, 2>& b) {
    return ff.E * a[0] * b[0] + ff.F * (a[0] * b[1] + a[1] * b[0]) + ff.G * a[1] * b[1];
}

std::array<double, 2> normalize_I(const FundamentalForms& ff, std::array<double, 2> v) {
    double n = std::sqrt(form_dot(ff, v, v));
    if (n <= 0) throw DomainError("degenerate direction in principal_curvatures");
    return {v[0] / n, v[1] / n};
}

}  // namespace

FundamentalForms fundamental_forms(const MetricField& m, const Jet2& jet, double x1, double x2) {
    Vec3<double> pt{x1, x2, jet.f};
    m.require_inside(pt);
    Sym3<double> g = m.components(pt);

    double scale = std::max({std::abs(g.m11), std::abs(g.m22), std::abs(g.m33)});
    if (std::abs(g.m13) > 1e-12 * scale || std::abs(g.m23) > 1e-12 * scale)
        throw DomainError("ambient metric must have g13 = g23 = 0");
    if (g.m11 <= 0 || g.m11 * g.m22 - g.m12 * g.m12 <= 0 || g.det() <= 0)
        throw DomainError("ambient metric not positive definite");

    Gamma3<double> Gm = christoffels(m, pt);
    auto c = detail::forms_core<double>(g, Gm, jet.p, jet.q);

    FundamentalForms ff;
    ff.E = c.E;
    ff.F = c.F;
    ff.G = c.G;
    ff.detg = c.detg;
    ff.delta = c.delta;
    ff.L1 = c.L1;
    ff.M1 = c.M1;
    ff.N1 = c.N1;
    ff.L = (jet.fxx + c.L1) / c.delta;
    ff.M = (jet.fxy + c.M1) / c.delta;
    ff.N = (jet.fyy + c.N1) / c.delta;

    double W = std::sqrt(c.W2);
    double rootg = std::sqrt(c.detg);
    ff.n1 = (g.m12 * jet.q - g.m22 * jet.p) * g.m33 / (W * rootg);
    ff.n2 = (g.m12 * jet.p - g.m11 * jet.q) * g.m33 / (W * rootg);
    ff.n3 = 1.0 / (c.delta * g.m33);
    return ff;
}

PrincipalData principal_curvatures(const FundamentalForms& ff,
                                   std::optional<std::array<double, 2>> dir_hint) {
    double a = ff.E * ff.G - ff.F * ff.F;
    double b = ff.E * ff.N + ff.G * ff.L - 2.0 * ff.F * ff.M;
    double c = ff.L * ff.N - ff.M * ff.M;
    if (a <= 0) throw DomainError("first form not positive definite");

    // a k^2 - b k + c = 0, stable root pairing
    double disc = b * b - 4.0 * a * c;
    // the roundoff floor of the discriminant: below it the cancellation
    // noise dominates and the point is umbilic for all purposes
    double disc_floor = 1e-13 * (b * b + 4.0 * std::abs(a * c));
    if (disc < 0) disc = 0;
    double sq = std::sqrt(disc);
    double t = (b >= 0) ? b + sq : b - sq;
    double r1, r2;
    if (t == 0) {
        r1 = r2 = 0;
    } else {
        r1 = t / (2.0 * a);
        r2 = 2.0 * c / t;
    }

    PrincipalData pd;
    if (disc <= disc_floor) {
        pd.umbilic = true;
        pd.k1 = pd.k2 = 0.5 * (r1 + r2);
        std::array<double, 2> d1 = dir_hint ? *dir_hint : std::array<double, 2>{1, 0};
        pd.dir1 = normalize_I(ff, d1);
    } else {
        // Eigendirection for root k: null space of [[L-kE, M-kF],[M-kF, N-kG]].
        auto eig_dir = [&](double k) -> std::array<double, 2> {
            double a11 = ff.L - k * ff.E, a12 = ff.M - k * ff.F, a22 = ff.N - k * ff.G;
            std::array<double, 2> v1{-a12, a11};  // from row 1
            std::array<double, 2> v2{-a22, a12};  // from row 2
            double n1 = v1[0] * v1[0] + v1[1] * v1[1];
            double n2 = v2[0] * v2[0] + v2[1] * v2[1];
            return n1 >= n2 ? v1 : v2;
        };
        double ka = r1, kb = r2;
        std::array<double, 2> da = eig_dir(ka), db = eig_dir(kb);
        bool swap;
        if (dir_hint) {
            auto miss = [&](const std::array<double, 2>& d) {
                double cross = d[0] * (*dir_hint)[1] - d[1] * (*dir_hint)[0];
                double nd = std::hypot(d[0], d[1]) * std::hypot((*dir_hint)[0], (*dir_hint)[1]);
                return std::abs(cross) / nd;
            };
            swap = miss(db) < miss(da);
        } else {
            swap = kb > ka;  // default: k1 >= k2
        }
        if (swap) {
            std::swap(ka, kb);
            std::swap(da, db);
        }
        pd.k1 = ka;
        pd.k2 = kb;
        pd.dir1 = normalize_I(ff, da);
    }
    // I-orthogonal complement of dir1; coincides with the second
    // eigendirection when the roots are distinct.
    std::array<double, 2> perp{-(ff.F * pd.dir1[0] + ff.G * pd.dir1[1]),
                               ff.E * pd.dir1[0] + ff.F * pd.dir1[1]};
    pd.dir2 = normalize_I(ff, perp);
    if (std::abs(pd.dir1[1]) > 1e-12 * std::max(1.0, std::abs(pd.dir1[0])))
        pd.alpha = pd.dir1[0] / pd.dir1[1];
    return pd;
}

double euler_normal_curvature(const std::array<double, 2>& V, const PrincipalData& pd,
                              const FundamentalForms& ff) {
    double iv = form_dot(ff, V, V);
    if (iv <= 0) throw DomainError("degenerate direction in euler_normal_curvature");
    double c1 = form_dot(ff, V, pd.dir1);
    double c2 = form_dot(ff, V, pd.dir2);
    double i1 = form_dot(ff, pd.dir1, pd.dir1);
    double i2 = form_dot(ff, pd.dir2, pd.dir2);
    return (pd.k1 * c1 * c1 / i1 + pd.k2 * c2 * c2 / i2) / iv;
}

UmbilicalReport umbilical_identities(const MetricField& m,
                                     const std::function<double(double, double)>& lambda,
                                     int samples_per_axis) {
    UmbilicalReport rep{0, 0, 0, 0};
    int n = std::max(2, samples_per_axis);
    double a1 = m.halfwidth[0], a2 = m.halfwidth[1];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x1 = -a1 + 2.0 * a1 * i / (n - 1);
            double x2 = -a2 + 2.0 * a2 * j / (n - 1);
            // keep strictly interior so FD connection stencils stay in-domain
            x1 *= 0.98;
            x2 *= 0.98;
            Vec3<double> pt{x1, x2, 0};
            Sym3<double> g = m.components(pt);
            Gamma3<double> Gm = christoffels(m, pt);
            double lam = lambda(x1, x2);
            double s33 = std::sqrt(g.m33);
            for (int r = 0; r < 2; ++r)
                for (int s = r; s < 2; ++s) {
                    double res = std::abs(Gm(2, r, s) - lam * g(r, s) / s33);
                    rep.gamma_residual = std::max(rep.gamma_residual, res);
                }
            double qa = g.m11 * g.m22 - g.m12 * g.m12;
            double qb = s33 * (g.m11 * Gm(2, 1, 1) + g.m22 * Gm(2, 0, 0) - 2.0 * g.m12 * Gm(2, 0, 1));
            double qc = g.m33 * (Gm(2, 0, 0) * Gm(2, 1, 1) - Gm(2, 0, 1) * Gm(2, 0, 1));
            rep.quad_residual = std::max(rep.quad_residual, std::abs(qa * lam * lam - qb * lam + qc));
            rep.droot_residual = std::max(rep.droot_residual, std::abs(2.0 * qa * lam - qb));
            ++rep.samples;
        }
    }
    return rep;
}

}  // namespace curverecon
