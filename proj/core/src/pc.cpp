#include "curverecon/pc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curverecon/errors.hpp"
#include "curverecon/interp.hpp"

namespace curverecon {

namespace {

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double profile_halfwidth(const BoundaryData& bd, const PCConfig& cfg, double s) {
    return (bd.a1 + cfg.alpha * cfg.eps) / s + 0.05 * bd.a1 + 1e-6;
}

PlanarCurveGraph build_profile(const BoundaryData& bd, const PCConfig& cfg) {
    double s = std::sqrt(cfg.alpha * cfg.alpha + 1.0);
    double hh = profile_halfwidth(bd, cfg, s);
    auto kap = [&](double h) { return bd.kbar2(clampd(h * s, -bd.a1, bd.a1)); };
    return curve_from_curvature(kap, -hh, hh, 0, 0, cfg.curve_steps_per_unit);
}

double sup_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

ThresholdReport pc_thresholds(const BoundaryData& bd, const PCConfig& cfg) {
    double a1 = bd.a1, al = cfg.alpha;
    double s = std::sqrt(al * al + 1.0);
    double a = cfg.a_inner > 0 ? cfg.a_inner : 0.8 * a1;
    double k1s = 0, k2s = 0;
    for (int i = 0; i < 512; ++i) {
        double x = -a1 + 2.0 * a1 * i / 511;
        k1s = std::max(k1s, std::abs(bd.kbar1(x)));
        k2s = std::max(k2s, std::abs(bd.kbar2(x)));
    }
    double inf = std::numeric_limits<double>::infinity();
    ThresholdReport rep;
    auto add = [&](const char* name, double measured, double limit) {
        rep.items.push_back({name, measured, limit, measured <= limit});
    };
    add("profile-bend", k2s, s / (std::sqrt(2.0) * a1));
    add("profile-blowup", k2s, (al * al + 1.0) / (2.0 * a1 * a1));
    add("offset-window", k1s, al > 0 ? s / (2.0 * al * a1) : inf);
    add("self-map", k1s, al > 0 ? s / (4.0 * al * a1) : inf);
    double prop = al > 0 ? std::min((a1 - a) * al * s / (std::sqrt(2.0) * a1 * a1),
                                    al * s / (2.0 * a1))
                         : inf;
    add("front-propagation", k1s, prop);
    return rep;
}

namespace {

PCSolution assemble(const BoundaryData& bd, const PCConfig& cfg, PlanarCurveGraph base,
                    PlanarCurveGraph profile) {
    PCSolution sol;
    sol.alpha = cfg.alpha;
    sol.s = std::sqrt(cfg.alpha * cfg.alpha + 1.0);
    sol.base = std::move(base);
    sol.profile = std::move(profile);
    sol.thresholds = pc_thresholds(bd, cfg);

    // sweep contraction margin, measured on the built curves
    double worst = 0;
    const auto& pv = sol.profile.v;
    for (size_t i = 0; i < pv.v.size(); ++i) {
        double h = pv.x0 + double(i) * pv.h;
        double rho = pv.v[i], rhop = sol.profile.vp(h);
        for (size_t j = 0; j < sol.base.vp.v.size(); j += 8) {
            double u = sol.base.vp.x0 + double(j) * sol.base.vp.h;
            double w = sol.base.vp.v[j];
            double wb = std::sqrt(1.0 + w * w);
            double kt = sol.base.vp.d[j] / (wb * wb * wb);
            double t = std::abs(rho * kt) + std::abs(rhop * w / wb);
            worst = std::max(worst, t);
        }
    }
    sol.thresholds.items.push_back({"sweep-contraction", worst, 1.0, worst < 1.0});
    return sol;
}

}  // namespace

PCSolution reconstruct_given_gamma1(const BoundaryData& bd, const PCConfig& cfg,
                                    const PlanarCurveGraph& gamma1) {
    if (cfg.alpha < 0) throw ConfigError("pc alpha must be nonnegative");
    return assemble(bd, cfg, gamma1, build_profile(bd, cfg));
}

PCSolution pc_fixed_point(const BoundaryData& bd, const PCConfig& cfg) {
    if (cfg.alpha <= 0) throw ConfigError("the base-curve solve needs alpha > 0");
    if (cfg.grid_n < 65) throw ConfigError("pc grid too coarse");
    double al = cfg.alpha, a1 = bd.a1;
    double s = std::sqrt(al * al + 1.0);

    PlanarCurveGraph profile = build_profile(bd, cfg);
    double rho_sup = sup_abs(profile.v.v);

    size_t n = size_t(cfg.grid_n) | 1;  // odd, keeps a node at u = 0
    double u_half = al * a1 / s + rho_sup + 0.05 * a1 + 1e-6;
    double du = 2.0 * u_half / double(n - 1);
    size_t ic = (n - 1) / 2;

    // Per-node data abscissa X: alpha X / s + w rho(X/s) / sqrt(1+w^2) = u.
    double Xb = s / al * (u_half + rho_sup) + 1.0;  // generous bracket
    auto solve_X = [&](double u, double w, double x_init) {
        double wb = std::sqrt(1.0 + w * w);
        auto F = [&](double X) { return al * X / s + w * profile.v(X / s) / wb - u; };
        double lo = -Xb, hi = Xb;
        double flo = F(lo), fhi = F(hi);
        if (flo > 0 || fhi < 0) throw SolverError("data abscissa bracket failed");
        double X = clampd(x_init, lo, hi);
        for (int it = 0; it < 100; ++it) {
            double fx = F(X);
            if (std::abs(fx) < 1e-13 * (1.0 + std::abs(u))) return X;
            if (fx > 0)
                hi = X;
            else
                lo = X;
            double dF = al / s + w * profile.vp(X / s) / (s * wb);
            double Xn = (dF > 1e-12) ? X - fx / dF : 0.5 * (lo + hi);
            if (Xn <= lo || Xn >= hi) Xn = 0.5 * (lo + hi);
            X = Xn;
        }
        return X;
    };

    std::vector<double> w(n, 0.0), wn(n), G(n), X(n);
    for (size_t i = 0; i < n; ++i) X[i] = s / al * (-u_half + double(i) * du);

    double T = 0;
    {
        double k1s = 0;
        for (int i = 0; i < 257; ++i)
            k1s = std::max(k1s, std::abs(bd.kbar1(-a1 + 2.0 * a1 * i / 256)));
        T = 2.0 * std::max(1.0, 4.0 * k1s);  // weight of the convergence metric
    }

    double d_prev = std::numeric_limits<double>::infinity();
    int stalled = 0;
    int iter = 0;
    double d = 0;
    std::vector<double> history;
    for (iter = 1; iter <= cfg.fp_max_iter; ++iter) {
        for (size_t i = 0; i < n; ++i) {
            double u = -u_half + double(i) * du;
            X[i] = solve_X(u, w[i], X[i]);
            double h = X[i] / s;
            double rho = profile.v(h), rhop = profile.vp(h);
            double phi = 1.0 / std::sqrt(1.0 + rhop * rhop);
            double kb = bd.kbar1(clampd(X[i], -a1, a1));
            double den = rho * kb + phi;
            if (std::abs(den) < 1.0 / std::sqrt(2.0))
                throw SolverError("offset correction left its window");
            double kt = kb / den;
            G[i] = kt * std::pow(1.0 + w[i] * w[i], 1.5);
        }
        wn = cumulative_integral(G, du, ic);

        d = 0;
        for (size_t i = 0; i < n; ++i) {
            double u = -u_half + double(i) * du;
            d = std::max(d, std::exp(-T * std::abs(u)) * std::abs(wn[i] - w[i]));
        }
        w.swap(wn);
        history.push_back(d);
        if (d <= cfg.fp_tol) break;
        if (d >= d_prev) {
            if (++stalled >= 5) throw SolverError("base-curve iteration is not contracting");
        } else {
            stalled = 0;
        }
        d_prev = d;
    }
    if (d > cfg.fp_tol)
        throw SolverError("base-curve iteration did not converge in " +
                          std::to_string(cfg.fp_max_iter) + " passes");

    PlanarCurveGraph base;
    base.v.x0 = base.vp.x0 = -u_half;
    base.v.h = base.vp.h = du;
    base.v.v = cumulative_integral(w, du, ic);
    base.v.d = w;
    base.vp.v = w;
    base.vp.d = G;

    PCSolution sol = assemble(bd, cfg, std::move(base), std::move(profile));
    sol.fp_iterations = iter;
    sol.fp_residual = d;
    sol.fp_history = std::move(history);
    return sol;
}

PCSolution::SurfacePoint PCSolution::at(double x1, double x2) const {
    double U = (alpha * x1 + x2) / s;
    double h = (x1 - alpha * x2) / s;
    if (h < profile.u_min() - 1e-9 || h > profile.u_max() + 1e-9)
        throw DomainError("query point outside the swept region");
    double rho = profile.v(h), rhop = profile.vp(h);

    double u = U;
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
        double wv = base.vp(u);
        double un = U + wv * rho / std::sqrt(1.0 + wv * wv);
        if (std::abs(un - u) <= 1e-12 * std::max(1.0, std::abs(u))) {
            u = un;
            ok = true;
            break;
        }
        u = un;
    }
    if (!ok) throw SolverError("sweep coordinate iteration did not settle");
    if (u < base.u_min() - 1e-9 || u > base.u_max() + 1e-9)
        throw DomainError("query point beyond the base curve");

    double wv = base.vp(u);
    double wb = std::sqrt(1.0 + wv * wv);
    double kt = base.curvature(u);
    double den = 1.0 - kt * rho;
    if (std::abs(den) < 1e-9) throw SolverError("query point on the focal set");

    SurfacePoint sp;
    sp.u = u;
    sp.h = h;
    sp.f = base.v(u) + rho / wb;
    sp.p = (alpha * wv + rhop * wb) / s;
    sp.q = (wv - alpha * rhop * wb) / s;
    sp.k1 = kt / (den * std::sqrt(1.0 + rhop * rhop));
    sp.k2 = profile.curvature(h);
    return sp;
}

}  // namespace curverecon
