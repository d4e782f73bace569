#pragma once

#include <array>
#include <functional>
#include <optional>

#include "curverecon/metric.hpp"

namespace curverecon {

// Graph jet at a point of the base plane: height, gradient, second
// derivatives.
struct Jet2 {
    double f = 0, p = 0, q = 0;
    double fxx = 0, fxy = 0, fyy = 0;
};

struct FundamentalForms {
    double E, F, G;          // first form
    double L, M, N;          // second form, upward-normal gauge
    double n1, n2, n3;       // unit normal components, n3 > 0
    double delta;            // area ratio sqrt((EG-F^2)/det g)
    double L1, M1, N1;       // metric corrections: L = (f_xx + L1)/delta, ...
    double detg;             // det of the ambient metric at the point
};

namespace detail {

// Scalar-generic core shared by the plain evaluation and the
// derivative-propagating coefficient assembly.
template <class T>
struct FormsCore {
    T E, F, G, delta, L1, M1, N1, detg, W2;
};

template <class T>
FormsCore<T> forms_core(const Sym3<T>& g, const Gamma3<T>& Gm, const T& p, const T& q) {
    FormsCore<T> r;
    r.E = g.m11 + g.m33 * p * p;
    r.F = g.m12 + g.m33 * p * q;
    r.G = g.m22 + g.m33 * q * q;
    r.detg = g.det();
    r.W2 = r.E * r.G - r.F * r.F;
    r.delta = sqrt(r.W2 / r.detg);

    // Normal projection of the ambient connection terms.  The polynomials
    // collect Gamma^s against the tangent vectors (1,0,p) and (0,1,q); the
    // -p,-q weights are the lowered normal components times delta.
    auto c11 = [&](int s) { return Gm(s, 0, 0) + 2.0 * Gm(s, 0, 2) * p + Gm(s, 2, 2) * p * p; };
    auto c12 = [&](int s) {
        return Gm(s, 0, 1) + Gm(s, 0, 2) * q + Gm(s, 1, 2) * p + Gm(s, 2, 2) * p * q;
    };
    auto c22 = [&](int s) { return Gm(s, 1, 1) + 2.0 * Gm(s, 1, 2) * q + Gm(s, 2, 2) * q * q; };
    r.L1 = c11(2) - p * c11(0) - q * c11(1);
    r.M1 = c12(2) - p * c12(0) - q * c12(1);
    r.N1 = c22(2) - p * c22(0) - q * c22(1);
    return r;
}

}  // namespace detail

FundamentalForms fundamental_forms(const MetricField& m, const Jet2& jet, double x1, double x2);

struct PrincipalData {
    double k1, k2;
    std::array<double, 2> dir1, dir2;  // I-orthogonal, I-normalized
    std::optional<double> alpha;       // dir1 as (alpha,1) when transversal
    bool umbilic = false;
};

// Roots of the characteristic quadratic of the shape operator.  When a
// direction hint is given, k1 is the root whose eigendirection is closer to
// the hint (used to keep the transversal-field labelling stable).
PrincipalData principal_curvatures(const FundamentalForms& ff,
                                   std::optional<std::array<double, 2>> dir_hint = {});

// Normal curvature of the tangent direction V = (mu1, mu2).
double euler_normal_curvature(const std::array<double, 2>& V, const PrincipalData& pd,
                              const FundamentalForms& ff);

struct UmbilicalReport {
    double gamma_residual;  // sup |Gamma^3_ij - lambda g_ij / sqrt(g33)|, i,j <= 2
    double quad_residual;   // sup |P(lambda)| of the induced quadratic
    double droot_residual;  // sup |P'(lambda)|: double-root defect
    int samples;
    bool pass(double tol = 1e-6) const { return gamma_residual <= tol; }
};

// Checks that the base surface {x3=0} is totally umbilic with normal
// curvature lambda(x1,x2) in the upward gauge.
UmbilicalReport umbilical_identities(const MetricField& m,
                                     const std::function<double(double, double)>& lambda,
                                     int samples_per_axis = 33);

}  // namespace curverecon
