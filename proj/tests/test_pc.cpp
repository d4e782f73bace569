#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "curverecon/boundary.hpp"
#include "curverecon/curves.hpp"
#include "curverecon/errors.hpp"
#include "curverecon/pc.hpp"

using namespace curverecon;

namespace {

// Shooting oracle for the base-slope equation: independent RK4 in u with a
// bisection solve of the data-abscissa equation per stage.
struct Shooter {
    const PCSolution& sol;
    const BoundaryData& bd;
    double al, s;

    double solve_abscissa(double u, double w) const {
        double wb = std::sqrt(1 + w * w);
        auto F = [&](double X) { return al * X / s + w * sol.profile.v(X / s) / wb - u; };
        double lo = -8, hi = 8;
        for (int i = 0; i < 90; ++i) {
            double mid = 0.5 * (lo + hi);
            (F(mid) > 0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    }
    double G(double u, double w) const {
        double X = solve_abscissa(u, w);
        double h = X / s;
        double rho = sol.profile.v(h), rhop = sol.profile.vp(h);
        double phi = 1.0 / std::sqrt(1 + rhop * rhop);
        double kb = bd.kbar1(std::min(std::max(X, -bd.a1), bd.a1));
        return kb / (rho * kb + phi) * std::pow(1 + w * w, 1.5);
    }
    double shoot(double u_target) const {
        int n = 4096;
        double hs = u_target / n, u = 0, w = 0;
        for (int i = 0; i < n; ++i) {
            double g1 = G(u, w);
            double g2 = G(u + 0.5 * hs, w + 0.5 * hs * g1);
            double g3 = G(u + 0.5 * hs, w + 0.5 * hs * g2);
            double g4 = G(u + hs, w + hs * g3);
            w += hs / 6 * (g1 + 2 * g2 + 2 * g3 + g4);
            u += hs;
        }
        return w;
    }
};

}  // namespace

TEST_CASE("flat transversal datum sweeps the cylinder") {
    double R = 5.0, al = 0.7, s = std::sqrt(al * al + 1);
    BoundaryData bd = boundary_constant(1.0, 1.0 / R, 0.0);
    PCConfig cfg;
    cfg.alpha = al;
    PCSolution sol = pc_fixed_point(bd, cfg);
    CHECK(sol.alpha == al);
    CHECK(sol.s == doctest::Approx(s).epsilon(1e-15));
    CHECK(sol.fp_iterations > 0);
    CHECK(sol.fp_residual <= cfg.fp_tol);

    for (double x1 : {-0.8, -0.3, 0.2, 0.7})
        for (double x2 : {0.0, 0.05, 0.1}) {
            double U = (al * x1 + x2) / s;
            PCSolution::SurfacePoint sp = sol.at(x1, x2);
            CHECK(std::abs(sp.f - (R - std::sqrt(R * R - U * U))) < 1e-10);
            double root = std::sqrt(R * R - U * U);
            CHECK(std::abs(sp.p - al * (x2 + al * x1) / ((1 + al * al) * root)) < 1e-10);
            CHECK(std::abs(sp.q - (x2 + al * x1) / ((1 + al * al) * root)) < 1e-10);
            CHECK(std::abs(sp.k1 - 1.0 / R) < 1e-10);
            CHECK(std::abs(sp.k2) < 1e-12);
            CHECK(sp.h == (x1 - al * x2) / s);
        }
}

TEST_CASE("umbilic data sweeps the sphere") {
    double R = 4.0, al = 0.7;
    BoundaryData bd = boundary_constant(1.0, 1.0 / R, 1.0 / R);
    PCConfig cfg;
    cfg.alpha = al;
    PCSolution sol = pc_fixed_point(bd, cfg);
    for (double x1 : {-0.8, -0.3, 0.2, 0.7})
        for (double x2 : {0.0, 0.05, 0.1})
            CHECK(std::abs(sol.height(x1, x2) -
                           (R - std::sqrt(R * R - x1 * x1 - x2 * x2))) < 1e-10);
}

TEST_CASE("base slope agrees with an independent shooting integration") {
    double al = 1.0;
    BoundaryData bd = boundary_analytic(1.0, "0.12+0.05*sin(1.3*x)", "0.1*cos(x)");
    PCConfig cfg;
    cfg.alpha = al;
    PCSolution sol = pc_fixed_point(bd, cfg);
    REQUIRE(sol.fp_residual <= cfg.fp_tol);
    CHECK(sol.thresholds.all_ok());

    Shooter sh{sol, bd, al, std::sqrt(2.0)};
    for (double u : {-0.45, -0.2, 0.1, 0.3, 0.45})
        CHECK(std::abs(sh.shoot(u) - sol.base.vp(u)) < 1e-9);
}

TEST_CASE("leading curvature is reproduced along the data line") {
    BoundaryData bd = boundary_analytic(1.0, "0.12+0.05*sin(1.3*x)", "0.1*cos(x)");
    PCConfig cfg;
    cfg.alpha = 1.0;
    PCSolution sol = pc_fixed_point(bd, cfg);
    for (int i = 0; i <= 200; ++i) {
        double x = -0.8 + 1.6 * i / 200;
        CHECK(std::abs(sol.at(x, 0.0).k1 - bd.kbar1(x)) < 1e-8);
    }
}

TEST_CASE("surface gradients match finite differences of the height") {
    BoundaryData bd = boundary_analytic(1.0, "0.12+0.05*sin(1.3*x)", "0.1*cos(x)");
    PCConfig cfg;
    cfg.alpha = 1.0;
    PCSolution sol = pc_fixed_point(bd, cfg);
    for (double x1 : {-0.5, 0.1, 0.6})
        for (double x2 : {0.02, 0.08}) {
            double d = 1e-5;
            PCSolution::SurfacePoint sp = sol.at(x1, x2);
            double pfd = (sol.height(x1 + d, x2) - sol.height(x1 - d, x2)) / (2 * d);
            double qfd = (sol.height(x1, x2 + d) - sol.height(x1, x2 - d)) / (2 * d);
            CHECK(std::abs(sp.p - pfd) < 1e-7);
            CHECK(std::abs(sp.q - qfd) < 1e-7);
            // sweep coordinate satisfies its defining offset relation
            double w = sol.base.vp(sp.u);
            double rho = sol.profile.v(sp.h);
            double U = (cfg.alpha * x1 + x2) / sol.s;
            CHECK(std::abs(sp.u - w * rho / std::sqrt(1 + w * w) - U) < 1e-9);
        }
}

TEST_CASE("supplied base curve is swept as-is") {
    double R = 5.0, al = 0.7, s = std::sqrt(al * al + 1);
    BoundaryData bd = boundary_constant(1.0, 1.0 / R, 0.0);
    PCConfig cfg;
    cfg.alpha = al;
    PlanarCurveGraph circle = curve_from_curvature([&](double) { return 1.0 / R; }, -0.7, 0.7);
    PCSolution sol = reconstruct_given_gamma1(bd, cfg, circle);
    CHECK(sol.fp_iterations == 0);
    for (double x1 : {-0.6, 0.0, 0.5}) {
        double U = al * x1 / s;
        CHECK(std::abs(sol.height(x1, 0.0) - (R - std::sqrt(R * R - U * U))) < 1e-10);
    }
}

TEST_CASE("degenerate zero-slope sweep extrudes the profile") {
    BoundaryData bd = boundary_constant(1.0, 0.0, 0.3);
    PCConfig cfg;
    cfg.alpha = 0.0;
    PlanarCurveGraph line = curve_from_curvature([](double) { return 0.0; }, -1, 1);
    PCSolution sol = reconstruct_given_gamma1(bd, cfg, line);
    for (double x1 : {-0.6, -0.1, 0.4})
        for (double x2 : {0.0, 0.1, 0.5}) {
            PCSolution::SurfacePoint sp = sol.at(x1, x2);
            CHECK(sp.f == sol.profile.v(x1));
            CHECK(std::abs(sp.k2 - 0.3) < 1e-9);
            CHECK(sp.k1 == 0.0);
            CHECK(sp.q == 0.0);
        }
}

TEST_CASE("margin report: formulas, measured sups, advisory failure") {
    double al = 0.7, a1 = 1.0, s = std::sqrt(al * al + 1);
    BoundaryData bd = boundary_constant(a1, 0.2, 0.0);
    PCConfig cfg;
    cfg.alpha = al;
    ThresholdReport rep = pc_thresholds(bd, cfg);
    REQUIRE(rep.items.size() == 5);
    std::vector<std::string> names{"profile-bend", "profile-blowup", "offset-window",
                                   "self-map", "front-propagation"};
    for (size_t i = 0; i < names.size(); ++i) CHECK(rep.items[i].name == names[i]);

    CHECK(rep.items[0].measured == 0.0);  // kbar2 == 0
    CHECK(rep.items[0].limit == doctest::Approx(s / (std::sqrt(2.0) * a1)).epsilon(1e-15));
    CHECK(rep.items[1].limit == doctest::Approx((al * al + 1) / (2 * a1 * a1)).epsilon(1e-15));
    CHECK(rep.items[2].measured == 0.2);
    CHECK(rep.items[2].limit == doctest::Approx(s / (2 * al * a1)).epsilon(1e-15));
    CHECK(rep.items[3].limit == doctest::Approx(s / (4 * al * a1)).epsilon(1e-15));
    double prop = std::min(0.2 * al * s / std::sqrt(2.0), al * s / 2.0);
    CHECK(rep.items[4].limit == doctest::Approx(prop).epsilon(1e-15));
    // data of size 0.2 clears every margin except the propagation one
    for (size_t i = 0; i < 4; ++i) CHECK(rep.items[i].ok);
    CHECK_FALSE(rep.items[4].ok);
    CHECK_FALSE(rep.all_ok());

    PCSolution sol = pc_fixed_point(bd, cfg);
    REQUIRE(sol.thresholds.items.size() == 6);
    CHECK(sol.thresholds.items[5].name == "sweep-contraction");
    CHECK(sol.thresholds.items[5].ok);
    CHECK(sol.thresholds.items[5].measured == 0.0);  // flat profile

    // zero slope: the slope-scaled margins degenerate to no constraint
    PCConfig flat;
    flat.alpha = 0.0;
    ThresholdReport rz = pc_thresholds(bd, flat);
    CHECK(std::isinf(rz.items[2].limit));
    CHECK(std::isinf(rz.items[3].limit));
    CHECK(std::isinf(rz.items[4].limit));
    CHECK(rz.items[2].ok);
}

TEST_CASE("oversized data aborts the base-curve solve") {
    PCConfig cfg;
    cfg.alpha = 0.7;
    CHECK_THROWS_AS(pc_fixed_point(boundary_constant(1.0, -6.0, 1.2), cfg), SolverError);
    CHECK_THROWS_AS(pc_fixed_point(boundary_constant(1.0, 3.0, 0.0), cfg), SolverError);
}

TEST_CASE("config and domain guards") {
    BoundaryData bd = boundary_constant(1.0, 0.1, 0.0);
    PCConfig cfg;
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(pc_fixed_point(bd, cfg), ConfigError);
    cfg.alpha = 0.7;
    cfg.grid_n = 33;
    CHECK_THROWS_AS(pc_fixed_point(bd, cfg), ConfigError);

    PCConfig neg;
    neg.alpha = -1.0;
    PlanarCurveGraph line = curve_from_curvature([](double) { return 0.0; }, -1, 1);
    CHECK_THROWS_AS(reconstruct_given_gamma1(bd, neg, line), ConfigError);

    PCConfig ok;
    ok.alpha = 0.7;
    PCSolution sol = pc_fixed_point(bd, ok);
    CHECK_THROWS_AS(sol.at(5.0, 0.0), DomainError);
}
