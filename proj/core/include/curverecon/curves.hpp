#pragma once

#include <functional>

#include "curverecon/interp.hpp"

namespace curverecon {

// Planar curve as a graph v(u) on a uniform grid, with slope samples.
struct PlanarCurveGraph {
    HermiteSeries v;   // height; derivative samples are the slopes
    HermiteSeries vp;  // slope; derivative samples are v''

    double u_min() const { return v.x0; }
    double u_max() const { return v.x_back(); }
    double curvature(double u) const;  // v'' / (1 + v'^2)^{3/2}
};

// Integrates v'' = kappa(u) (1 + v'^2)^{3/2} outward from u = 0 with
// v(0) = v0, v'(0) = vp0.  The range must contain 0.  Slopes beyond the
// graph gauge (|v'| > 10) abort the run.
PlanarCurveGraph curve_from_curvature(const std::function<double(double)>& kappa, double u_lo,
                                      double u_hi, double v0 = 0, double vp0 = 0,
                                      int steps_per_unit = 4096);

struct OffsetPoint {
    double U, V;
};

// Normal offset at signed distance rho: the point plus the unit upward
// normal scaled by rho.
OffsetPoint offset_point(const PlanarCurveGraph& c, double u, double rho);

// Sign convention of the curvature carried to the offset curve; the
// normal-frame value is the negative of the graph reparametrization one.
enum class OffsetConvention { normal_frame, graph_frame };

double offset_curvature(const PlanarCurveGraph& c, double u, double rho,
                        OffsetConvention conv = OffsetConvention::graph_frame);

struct AprioriCheck {
    double A = 0;           // curvature bound used
    double span = 0;        // largest |u| verified
    bool integral_ok = true;  // |v'| dominated by the nonlinear integral
    bool bound_ok = true;     // |v'| below the closed-form envelope
    double worst_slack = 0;   // most negative margin seen (relative)
};

// Integral and closed-form slope envelopes for a curve bent by at most A.
AprioriCheck apriori_bound_check(const PlanarCurveGraph& c, double A, double rel_slack = 1e-6);

}  // namespace curverecon
