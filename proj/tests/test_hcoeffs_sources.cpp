#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "curverecon/alpha_field.hpp"
#include "curverecon/errors.hpp"
#include "curverecon/geometry.hpp"
#include "curverecon/hcoeffs.hpp"
#include "curverecon/metric.hpp"

using namespace curverecon;

namespace {

struct State {
    double p, q, alpha, k1, k2;
};

const std::vector<State> kStates{
    {0.0, 0.0, 0.7, 0.2, 0.1},    {0.15, -0.2, 0.5, -0.3, 0.25}, {-0.1, 0.05, 1.2, 0.4, -0.1},
    {0.3, 0.3, 0.9, 0.05, 0.05},  {-0.25, -0.1, 0.4, -0.2, -0.3}, {0.08, 0.22, 2.0, 0.6, 0.2},
};

FundamentalForms euclid_forms(double p, double q) {
    Jet2 j;
    j.p = p;
    j.q = q;
    return fundamental_forms(euclidean_metric({1, 1, 10}), j, 0.0, 0.0);
}

}  // namespace

TEST_CASE("flat closed form agrees with the general assembly") {
    for (const State& s : kStates) {
        HCoefficients ge = h_coefficients_general(euclid_forms(s.p, s.q), s.alpha, s.k1, s.k2);
        HCoefficients eu = h_coefficients_euclidean(s.p, s.q, s.alpha, s.k1, s.k2);
        CAPTURE(s.p);
        CAPTURE(s.q);
        CAPTURE(s.alpha);
        for (auto pick : {&HCoefficients::h11_1, &HCoefficients::h11_2, &HCoefficients::h11_0,
                          &HCoefficients::h12_1, &HCoefficients::h12_2, &HCoefficients::h12_0,
                          &HCoefficients::h22_1, &HCoefficients::h22_2, &HCoefficients::h22_0,
                          &HCoefficients::denom, &HCoefficients::aEF, &HCoefficients::H11,
                          &HCoefficients::H12, &HCoefficients::H22}) {
            CHECK(ge.*pick == doctest::Approx(eu.*pick).epsilon(1e-12));
        }
    }
}

TEST_CASE("coefficient sums reduce to the first form") {
    MetricField m = sheared_spherical_metric(0.5);
    for (const State& s : kStates) {
        Jet2 j;
        j.f = 0.04;
        j.p = s.p;
        j.q = s.q;
        FundamentalForms ff = fundamental_forms(m, j, 0.1, 0.12);
        HCoefficients h = h_coefficients_general(ff, s.alpha, s.k1, s.k2);
        CHECK(h.h11_1 + h.h11_2 == doctest::Approx(ff.delta * ff.E).epsilon(1e-12));
        CHECK(h.h12_1 + h.h12_2 == doctest::Approx(ff.delta * ff.F).epsilon(1e-12));
        CHECK(h.h22_1 + h.h22_2 == doctest::Approx(ff.delta * ff.G).epsilon(1e-12));
    }
}

TEST_CASE("equal curvatures collapse to the first form times k") {
    // flat ambient: the offset terms vanish and H becomes delta k (E, F, G)
    const double k = 0.37;
    for (const State& s : kStates) {
        FundamentalForms ff = euclid_forms(s.p, s.q);
        HCoefficients h = h_coefficients_general(ff, s.alpha, k, k);
        CHECK(h.H11 == doctest::Approx(ff.delta * k * ff.E).epsilon(1e-12));
        CHECK(h.H12 == doctest::Approx(ff.delta * k * ff.F).epsilon(1e-12));
        CHECK(h.H22 == doctest::Approx(ff.delta * k * ff.G).epsilon(1e-12));
    }
}

TEST_CASE("transversality gauge trips the singular guard") {
    // p = q = 0 makes alpha E + F = alpha
    FundamentalForms ff = euclid_forms(0.0, 0.0);
    CHECK_THROWS_AS(characteristic_speeds(ff, 0.0), SingularityError);
    CHECK_THROWS_AS(h_coefficients_general(ff, 0.0, 0.1, 0.2), SingularityError);
    CHECK(transversality_singular(0.0, 0.0, 1.0, 0.0));
    CHECK_FALSE(transversality_singular(0.5, 0.5, 1.0, 0.0));

    SUBCASE("speeds match the closed form away from the gauge") {
        for (const State& s : kStates) {
            FundamentalForms f2 = euclid_forms(s.p, s.q);
            CharSpeeds cs = characteristic_speeds(f2, s.alpha);
            CHECK(cs.lambda2 == s.alpha);
            const double expect =
                -(s.alpha * f2.F + f2.G) / (s.alpha * f2.E + f2.F);
            CHECK(cs.lambda1 == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("umbilic states produce no curvature drift") {
    SUBCASE("flat, varying slope field") {
        EuclideanSources es = source_terms_euclidean(0.12, -0.3, 0.8, 0.25, -0.4, 0.3, 0.3);
        CHECK(es.psi1 == 0.0);
        CHECK(es.psi2 == 0.0);
    }
    SUBCASE("curved ambient") {
        MetricField m = sheared_spherical_metric(0.5);
        AlphaField a = AlphaField::constant(0.6);
        for (double k : {0.3, -0.2}) {
            SourceTerms st = source_terms_general(m, a, 0.05, 0.1, 0.02, 0.1, -0.08, k, k);
            CHECK(std::abs(st.b1) < 1e-10);
            CHECK(std::abs(st.b2) < 1e-10);
            CHECK(std::abs(st.psi1) < 1e-9);
            CHECK(std::abs(st.psi2) < 1e-9);
        }
    }
    SUBCASE("unit-sphere chart equilibrium") {
        MetricField m = sphere_base_metric();
        AlphaField a = AlphaField::constant(0.5);
        SourceTerms st = source_terms_general(m, a, 0.1, 0.08, 0.0, 0.0, 0.0, -1.0, -1.0);
        CHECK(std::abs(st.b1) < 1e-12);
        CHECK(std::abs(st.b2) < 1e-12);
        CHECK(std::abs(st.psi1) < 1e-11);
        CHECK(std::abs(st.psi2) < 1e-11);
    }
}

TEST_CASE("general sources reduce to the flat closed form") {
    MetricField m = euclidean_metric({1, 1, 10});
    AlphaField a = AlphaField::expression("0.6+0.1*x-0.05*y+0.02*x*y");
    for (const State& s : kStates) {
        const double x1 = 0.2, x2 = -0.15;
        AlphaField::Grad g = a.grad(x1, x2);
        SourceTerms st = source_terms_general(m, a, x1, x2, 0.3, s.p, s.q, s.k1, s.k2);
        EuclideanSources es = source_terms_euclidean(s.p, s.q, g.a, g.ax, g.ay, s.k1, s.k2);
        CAPTURE(s.p);
        CAPTURE(s.q);
        CHECK(st.psi1 == doctest::Approx(es.psi1).epsilon(1e-11));
        CHECK(st.psi2 == doctest::Approx(es.psi2).epsilon(1e-11));
    }
}

TEST_CASE("diagonal-metric reduction of the compatibility right-hand sides") {
    // diagonal metric, zero jet: b collapses to a rational form in the
    // metric, its first derivatives and the slope, weighted by the
    // curvature gap (worked out separately by symbolic reduction)
    MetricField m = metric_from_expressions("1+0.2*x+0.1*y+0.05*x*y", "0", "1+0.1*y-0.07*x", "1",
                                            {1, 1, 1});
    const double al = 0.8;
    AlphaField a = AlphaField::constant(al);
    const double k1 = 0.4, k2 = -0.15;
    for (auto pt : {std::array<double, 2>{0.1, 0.2}, std::array<double, 2>{-0.3, 0.15}}) {
        SourceTerms st = source_terms_general(m, a, pt[0], pt[1], 0.0, 0.0, 0.0, k1, k2);
        const double X = pt[0], Y = pt[1];
        const double g11 = 1 + 0.2 * X + 0.1 * Y + 0.05 * X * Y;
        const double g22 = 1 + 0.1 * Y - 0.07 * X;
        const double d1g11 = 0.2 + 0.05 * Y, d2g11 = 0.1 + 0.05 * X;
        const double d1g22 = -0.07, d2g22 = 0.1;
        const double a2 = al * al, a3 = a2 * al, a4 = a3 * al;
        const double den = 2 * (a2 * g11 + g22) * (a2 * g11 + g22);
        const double b1e = -(k1 - k2) *
                           (a4 * g11 * g11 * d2g11 - 3 * a3 * g11 * g11 * d1g22 +
                            a3 * g11 * g22 * d1g11 - 2 * a2 * g11 * g11 * d2g22 +
                            2 * a2 * g11 * g22 * d2g11 - al * g11 * g22 * d1g22 -
                            al * g22 * g22 * d1g11 - g22 * g22 * d2g11) /
                           den;
        const double b2e = (k1 - k2) *
                           (a4 * g11 * g11 * d1g22 + a3 * g11 * g11 * d2g22 +
                            a3 * g11 * g22 * d2g11 - 2 * a2 * g11 * g22 * d1g22 +
                            2 * a2 * g22 * g22 * d1g11 - al * g11 * g22 * d2g22 +
                            3 * al * g22 * g22 * d2g11 - g22 * g22 * d1g22) /
                           den;
        CHECK(st.b1 == doctest::Approx(b1e).epsilon(1e-9));
        CHECK(st.b2 == doctest::Approx(b2e).epsilon(1e-9));
    }
}

TEST_CASE("solver determinant matches the coefficient blocks") {
    MetricField m = sheared_spherical_metric(0.4);
    AlphaField a = AlphaField::constant(0.7);
    const double x1 = 0.1, x2 = 0.05, f = 0.03, p = 0.1, q = -0.12, k1 = 0.3, k2 = 0.1;
    SourceTerms st = source_terms_general(m, a, x1, x2, f, p, q, k1, k2);
    Jet2 j;
    j.f = f;
    j.p = p;
    j.q = q;
    FundamentalForms ff = fundamental_forms(m, j, x1, x2);
    HCoefficients h = h_coefficients_general(ff, 0.7, k1, k2);
    CHECK(st.detA == doctest::Approx(-h.h11_1 * h.h12_2 + h.h11_2 * h.h12_1).epsilon(1e-12));
}

TEST_CASE("derivative assembly agrees with finite differences") {
    MetricField m = sheared_spherical_metric(0.5);
    AlphaField a = AlphaField::expression("0.7+0.05*x-0.03*y");

    const double x1 = 0.08, x2 = 0.1, f = 0.02, p = 0.09, q = -0.11, k1 = 0.35, k2 = 0.1;

    auto H_of = [&](double X1, double X2, double F, double P, double Q) {
        Jet2 j;
        j.f = F;
        j.p = P;
        j.q = Q;
        FundamentalForms ff = fundamental_forms(m, j, X1, X2);
        HCoefficients h = h_coefficients_general(ff, a(X1, X2), k1, k2);
        return std::array<double, 3>{h.H11, h.H12, h.H22};
    };

    const double h = 1e-6;
    std::array<std::array<double, 3>, 5> D;  // partials in (x1, x2, f, p, q)
    std::array<double, 5> base{x1, x2, f, p, q};
    for (int v = 0; v < 5; ++v) {
        auto up = base, dn = base;
        up[size_t(v)] += h;
        dn[size_t(v)] -= h;
        auto Hp = H_of(up[0], up[1], up[2], up[3], up[4]);
        auto Hm = H_of(dn[0], dn[1], dn[2], dn[3], dn[4]);
        for (int c = 0; c < 3; ++c) D[size_t(v)][size_t(c)] = (Hp[size_t(c)] - Hm[size_t(c)]) / (2 * h);
    }
    auto H0 = H_of(x1, x2, f, p, q);
    const double H11 = H0[0], H12 = H0[1], H22 = H0[2];
    const int iH11 = 0, iH12 = 1, iH22 = 2;
    const double b1_fd = D[0][iH12] + p * D[2][iH12] + H11 * D[3][iH12] + H12 * D[4][iH12] -
                         D[1][iH11] - q * D[2][iH11] - H12 * D[3][iH11] - H22 * D[4][iH11];
    const double b2_fd = D[1][iH12] + q * D[2][iH12] + H12 * D[3][iH12] + H22 * D[4][iH12] -
                         D[0][iH22] - p * D[2][iH22] - H11 * D[3][iH22] - H12 * D[4][iH22];

    SourceTerms st = source_terms_general(m, a, x1, x2, f, p, q, k1, k2);
    CHECK(st.b1 == doctest::Approx(b1_fd).epsilon(1e-5));
    CHECK(st.b2 == doctest::Approx(b2_fd).epsilon(1e-5));

    SUBCASE("the transported rates solve the two-by-two system") {
        Jet2 j;
        j.f = f;
        j.p = p;
        j.q = q;
        FundamentalForms ff = fundamental_forms(m, j, x1, x2);
        HCoefficients hc = h_coefficients_general(ff, a(x1, x2), k1, k2);
        // A psi = -b with rows from the h blocks
        const double r1 = -hc.h11_1 * st.psi1 - hc.h11_2 * st.psi2 + st.b1;
        const double r2 = hc.h12_1 * st.psi1 + hc.h12_2 * st.psi2 + st.b2;
        CHECK(std::abs(r1) < 1e-11);
        CHECK(std::abs(r2) < 1e-11);
    }
}
