#pragma once

#include "curverecon/alpha_field.hpp"
#include "curverecon/geometry.hpp"

namespace curverecon {

// Coefficients of the curvature-linear decomposition of the second
// derivatives of the graph height:
//   f_xx = h11_1 k1 + h11_2 k2 + h11_0, and likewise for f_xy, f_yy.
// Here k1 is the curvature of the transversal direction (alpha, 1) and k2
// the one of its I-orthogonal partner.
struct HCoefficients {
    double h11_1, h11_2, h11_0;
    double h12_1, h12_2, h12_0;
    double h22_1, h22_2, h22_0;
    double denom;  // alpha^2 E + 2 alpha F + G
    double aEF;    // alpha E + F (transversality gauge)
    double H11, H12, H22;
};

namespace detail {

template <class T>
struct HSet {
    T h11_1, h11_2, h11_0;
    T h12_1, h12_2, h12_0;
    T h22_1, h22_2, h22_0;
    T denom, aEF, aFG;
};

template <class T>
HSet<T> h_core(const FormsCore<T>& c, const T& alpha) {
    HSet<T> h;
    h.aEF = alpha * c.E + c.F;
    h.aFG = alpha * c.F + c.G;
    h.denom = alpha * h.aEF + h.aFG;
    h.h11_1 = c.delta * h.aEF * h.aEF / h.denom;
    h.h11_2 = c.delta * c.W2 / h.denom;
    h.h12_1 = c.delta * h.aEF * h.aFG / h.denom;
    h.h12_2 = -c.delta * alpha * c.W2 / h.denom;
    h.h22_1 = c.delta * h.aFG * h.aFG / h.denom;
    h.h22_2 = c.delta * alpha * alpha * c.W2 / h.denom;
    h.h11_0 = -c.L1;
    h.h12_0 = -c.M1;
    h.h22_0 = -c.N1;
    return h;
}

}  // namespace detail

// Relative gauge for the transversality denominator alpha E + F.
inline bool transversality_singular(double aEF, double alpha, double E, double F) {
    return std::abs(aEF) < 1e-9 * (1.0 + std::abs(alpha) * E + std::abs(F));
}

HCoefficients h_coefficients_general(const FundamentalForms& ff, double alpha, double k1,
                                     double k2);

// Flat-space closed form (independent algebraic route, used to cross-check
// the general assembly).
HCoefficients h_coefficients_euclidean(double p, double q, double alpha, double k1, double k2);

struct EuclideanSources {
    double c1, c2, c3;
    double psi1, psi2;
};

EuclideanSources source_terms_euclidean(double p, double q, double alpha, double alpha_x,
                                        double alpha_y, double k1, double k2);

struct SourceTerms {
    double psi1, psi2;
    double b1, b2;  // compatibility right-hand sides before solving
    double detA;
};

// General right-hand sides of the curvature transport equations, assembled
// by forward-mode differentiation of the H coefficients in (x1, x2, f, p, q)
// with the curvatures frozen.
SourceTerms source_terms_general(const MetricField& m, const AlphaField& alpha, double x1,
                                 double x2, double f, double p, double q, double k1, double k2);

struct CharSpeeds {
    double lambda1;  // speed of the k1 transport line
    double lambda2;  // = alpha, speed of the k2 line
};

CharSpeeds characteristic_speeds(const FundamentalForms& ff, double alpha);

}  // namespace curverecon
