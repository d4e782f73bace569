#include "curverecon/hcoeffs.hpp"

#include <cmath>

#include "curverecon/errors.hpp"

namespace curverecon {

namespace {

detail::FormsCore<double> core_from_forms(const FundamentalForms& ff) {
    detail::FormsCore<double> c;
    c.E = ff.E;
    c.F = ff.F;
    c.G = ff.G;
    c.delta = ff.delta;
    c.L1 = ff.L1;
    c.M1 = ff.M1;
    c.N1 = ff.N1;
    c.detg = ff.detg;
    c.W2 = ff.E * ff.G - ff.F * ff.F;
    return c;
}

HCoefficients pack(const detail::HSet<double>& h, double k1, double k2) {
    HCoefficients r;
    r.h11_1 = h.h11_1;
    r.h11_2 = h.h11_2;
    r.h11_0 = h.h11_0;
    r.h12_1 = h.h12_1;
    r.h12_2 = h.h12_2;
    r.h12_0 = h.h12_0;
    r.h22_1 = h.h22_1;
    r.h22_2 = h.h22_2;
    r.h22_0 = h.h22_0;
    r.denom = h.denom;
    r.aEF = h.aEF;
    r.H11 = h.h11_1 * k1 + h.h11_2 * k2 + h.h11_0;
    r.H12 = h.h12_1 * k1 + h.h12_2 * k2 + h.h12_0;
    r.H22 = h.h22_1 * k1 + h.h22_2 * k2 + h.h22_0;
    return r;
}

}  // namespace

HCoefficients h_coefficients_general(const FundamentalForms& ff, double alpha, double k1,
                                     double k2) {
    auto h = detail::h_core<double>(core_from_forms(ff), alpha);
    if (transversality_singular(h.aEF, alpha, ff.E, ff.F))
        throw SingularityError("transversality lost: alpha E + F ~ 0");
    return pack(h, k1, k2);
}

HCoefficients h_coefficients_euclidean(double p, double q, double alpha, double k1, double k2) {
    // Flat closed forms written against delta1 = (alpha p + q)^2 + alpha^2 + 1,
    // which equals alpha^2 E + 2 alpha F + G when the ambient metric is the
    // identity.  Kept as a separate algebraic route from the general assembly.
    double w2 = 1.0 + p * p + q * q;
    double w = std::sqrt(w2);
    double s = alpha * p + q;
    double d1 = s * s + alpha * alpha + 1.0;
    double u = alpha + p * s;  // alpha E + F
    double v = 1.0 + q * s;    // alpha F + G

    HCoefficients r;
    r.h11_1 = w * u * u / d1;
    r.h11_2 = w * w2 / d1;
    r.h12_1 = w * u * v / d1;
    r.h12_2 = -w * alpha * w2 / d1;
    r.h22_1 = w * v * v / d1;
    r.h22_2 = w * alpha * alpha * w2 / d1;
    r.h11_0 = r.h12_0 = r.h22_0 = 0;
    r.denom = d1;
    r.aEF = u;
    r.H11 = r.h11_1 * k1 + r.h11_2 * k2;
    r.H12 = r.h12_1 * k1 + r.h12_2 * k2;
    r.H22 = r.h22_1 * k1 + r.h22_2 * k2;
    return r;
}

EuclideanSources source_terms_euclidean(double p, double q, double alpha, double alpha_x,
                                        double alpha_y, double k1, double k2) {
    double w2 = 1.0 + p * p + q * q;
    double d1 = (alpha * p + q) * (alpha * p + q) + alpha * alpha + 1.0;
    double den = alpha * (p * p + 1.0) + p * q;  // alpha E + F in flat space
    if (transversality_singular(den, alpha, 1.0 + p * p, p * q))
        throw SingularityError("transversality lost: alpha E + F ~ 0");

    EuclideanSources s;
    s.c1 = w2 * (alpha * alpha_x + alpha_y) / (d1 * den);
    s.c2 = (den * alpha_y - (alpha * p * q + q * q + 1.0) * alpha_x) / d1;
    s.c3 = std::sqrt(w2) * (alpha * q - p) / den;
    s.psi1 = (s.c1 - s.c3 * k1) * (k2 - k1);
    s.psi2 = s.c2 * (k2 - k1);
    return s;
}

SourceTerms source_terms_general(const MetricField& m, const AlphaField& alpha, double x1,
                                 double x2, double f, double p, double q, double k1, double k2) {
    // Seed order: x1, x2, f, p, q.
    Dual5 X1(x1, 0), X2(x2, 1), Fv(f, 2), P(p, 3), Q(q, 4);
    Vec3<Dual5> pt{X1, X2, Fv};
    m.require_inside({x1, x2, f});
    Sym3<Dual5> g = m.components(pt);
    Gamma3<Dual5> Gm = christoffels(m, pt);
    auto c = detail::forms_core<Dual5>(g, Gm, P, Q);
    Dual5 al = alpha.eval(X1, X2);
    auto h = detail::h_core<Dual5>(c, al);

    if (transversality_singular(h.aEF.v, al.v, c.E.v, c.F.v))
        throw SingularityError("transversality lost: alpha E + F ~ 0");

    Dual5 H11 = h.h11_1 * k1 + h.h11_2 * k2 + h.h11_0;
    Dual5 H12 = h.h12_1 * k1 + h.h12_2 * k2 + h.h12_0;
    Dual5 H22 = h.h22_1 * k1 + h.h22_2 * k2 + h.h22_0;

    SourceTerms s;
    // Compatibility of mixed third derivatives along the data flow:
    // d/dx2 of H11 equals d/dx1 of H12, and d/dx2 of H12 equals d/dx1 of
    // H22, with the chain through (f, p, q) substituted from the system
    // itself.  The curvature-derivative terms move to the left-hand side.
    s.b1 = H12.d[0] + H12.d[2] * p + H12.d[3] * H11.v + H12.d[4] * H12.v  //
           - H11.d[1] - H11.d[2] * q - H11.d[3] * H12.v - H11.d[4] * H22.v;
    s.b2 = H12.d[1] + H12.d[2] * q + H12.d[3] * H12.v + H12.d[4] * H22.v  //
           - H22.d[0] - H22.d[2] * p - H22.d[3] * H11.v - H22.d[4] * H12.v;

    // A [psi1, psi2]^T = -b with A = [[-h11_1, -h11_2], [h12_1, h12_2]].
    s.detA = -h.h11_1.v * h.h12_2.v + h.h11_2.v * h.h12_1.v;
    if (std::abs(s.detA) < 1e-14 * (1.0 + std::abs(h.h11_1.v) + std::abs(h.h12_2.v)))
        throw SingularityError("curvature transport system singular");
    s.psi1 = -(h.h12_2.v * s.b1 + h.h11_2.v * s.b2) / s.detA;
    s.psi2 = -(-h.h12_1.v * s.b1 - h.h11_1.v * s.b2) / s.detA;
    return s;
}

CharSpeeds characteristic_speeds(const FundamentalForms& ff, double alpha) {
    double aEF = alpha * ff.E + ff.F;
    double aFG = alpha * ff.F + ff.G;
    if (transversality_singular(aEF, alpha, ff.E, ff.F))
        throw SingularityError("transversality lost: alpha E + F ~ 0");
    return {-aFG / aEF, alpha};
}

}  // namespace curverecon
