#include "curverecon/curves.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "curverecon/errors.hpp"

namespace curverecon {

double PlanarCurveGraph::curvature(double u) const {
    double s = vp(u);
    return vp.deriv(u) / std::pow(1.0 + s * s, 1.5);
}

PlanarCurveGraph curve_from_curvature(const std::function<double(double)>& kappa, double u_lo,
                                      double u_hi, double v0, double vp0, int steps_per_unit) {
    if (u_lo > 0 || u_hi < 0 || u_hi <= u_lo)
        throw ConfigError("curve range must contain 0");
    if (steps_per_unit < 8) throw ConfigError("curve resolution too coarse");
    double h = 1.0 / steps_per_unit;
    long ml = std::lround(std::ceil(-u_lo / h - 1e-12));
    long mr = std::lround(std::ceil(u_hi / h - 1e-12));
    size_t n = size_t(ml + mr + 1);

    PlanarCurveGraph c;
    for (HermiteSeries* s : {&c.v, &c.vp}) {
        s->x0 = -double(ml) * h;
        s->h = h;
        s->v.assign(n, 0.0);
        s->d.assign(n, 0.0);
    }
    auto store = [&](size_t i, double u, double val, double slope) {
        double acc = kappa(u) * std::pow(1.0 + slope * slope, 1.5);
        c.v.v[i] = val;
        c.v.d[i] = slope;
        c.vp.v[i] = slope;
        c.vp.d[i] = acc;
    };
    store(size_t(ml), 0.0, v0, vp0);

    auto rhs = [&](double u, double val, double slope, double* dv, double* ds) {
        (void)val;
        *dv = slope;
        *ds = kappa(u) * std::pow(1.0 + slope * slope, 1.5);
    };
    for (int dir : {+1, -1}) {
        double val = v0, slope = vp0;
        long msteps = dir > 0 ? mr : ml;
        for (long k = 0; k < msteps; ++k) {
            double u = dir * double(k) * h, hh = dir * h;
            double dv1, ds1, dv2, ds2, dv3, ds3, dv4, ds4;
            rhs(u, val, slope, &dv1, &ds1);
            rhs(u + 0.5 * hh, val + 0.5 * hh * dv1, slope + 0.5 * hh * ds1, &dv2, &ds2);
            rhs(u + 0.5 * hh, val + 0.5 * hh * dv2, slope + 0.5 * hh * ds2, &dv3, &ds3);
            rhs(u + hh, val + hh * dv3, slope + hh * ds3, &dv4, &ds4);
            val += hh / 6.0 * (dv1 + 2 * dv2 + 2 * dv3 + dv4);
            slope += hh / 6.0 * (ds1 + 2 * ds2 + 2 * ds3 + ds4);
            if (std::abs(slope) > 10.0)
                throw SolverError("curve slope blew up at u = " + std::to_string(u + hh));
            store(size_t(ml + dir * (k + 1)), u + hh, val, slope);
        }
    }
    return c;
}

OffsetPoint offset_point(const PlanarCurveGraph& c, double u, double rho) {
    double s = c.vp(u);
    double w = std::sqrt(1.0 + s * s);
    return {u - s * rho / w, c.v(u) + rho / w};
}

double offset_curvature(const PlanarCurveGraph& c, double u, double rho, OffsetConvention conv) {
    double k = c.curvature(u);
    double den = 1.0 - k * rho;
    if (std::abs(den) < 1e-12) throw SolverError("offset passed through the focal set");
    double val = k / den;
    return conv == OffsetConvention::graph_frame ? val : -val;
}

AprioriCheck apriori_bound_check(const PlanarCurveGraph& c, double A, double rel_slack) {
    AprioriCheck r;
    r.A = A;
    size_t n = c.vp.v.size();
    double h = c.vp.h;
    long i0 = std::lround(-c.vp.x0 / h);

    // cumulative trapezoid of (1 + v'^2)^{3/2} outward from u = 0
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = std::pow(1.0 + c.vp.v[i] * c.vp.v[i], 1.5);
    auto check_at = [&](size_t i, double integral) {
        double u = c.vp.x0 + double(i) * h;
        double slope = std::abs(c.vp.v[i]);
        double lim = A * integral;
        double slack = lim - slope + rel_slack * (1.0 + lim);
        if (slack < 0) r.integral_ok = false;
        r.worst_slack = std::min(r.worst_slack, slack);
        double ay = A * std::abs(u);
        if (ay < 1.0) {
            double env = ay / std::sqrt(1.0 - ay * ay);
            if (slope > env + rel_slack * (1.0 + env)) r.bound_ok = false;
        } else {
            r.bound_ok = false;
        }
        r.span = std::max(r.span, std::abs(u));
    };
    double acc = 0;
    for (size_t i = size_t(i0); i + 1 < n; ++i) {
        acc += 0.5 * h * (w[i] + w[i + 1]);
        check_at(i + 1, acc);
    }
    acc = 0;
    for (size_t i = size_t(i0); i-- > 0;) {
        acc += 0.5 * h * (w[i] + w[i + 1]);
        check_at(i, acc);
    }
    return r;
}

}  // namespace curverecon
