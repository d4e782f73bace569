#pragma once

#include <string>
#include <vector>

#include "curverecon/boundary.hpp"
#include "curverecon/curves.hpp"

namespace curverecon {

// Configuration of the product-coordinates pipeline: the surface is swept
// from a base curve in the tilted plane through the data line and a profile
// curve in the transversal plane, with constant slope alpha > 0.
struct PCConfig {
    double alpha = 1.0;
    double eps = 0.1;      // strip height the sweep has to cover
    double a_inner = 0;    // inner half-width for the propagation margin; 0: 0.8 a1
    int curve_steps_per_unit = 4096;
    int grid_n = 2049;     // fixed-point nodes across the base parameter
    double fp_tol = 1e-12;
    int fp_max_iter = 200;
};

struct ThresholdReport {
    struct Item {
        std::string name;
        double measured = 0, limit = 0;
        bool ok = true;
    };
    std::vector<Item> items;
    bool all_ok() const {
        for (const auto& it : items)
            if (!it.ok) return false;
        return true;
    }
};

struct PCSolution {
    double alpha = 1, s = 1;   // s = sqrt(alpha^2 + 1)
    PlanarCurveGraph base;     // curve in the sweep plane, graph v0(u)
    PlanarCurveGraph profile;  // transversal profile rho(h)
    ThresholdReport thresholds;
    int fp_iterations = 0;     // 0 when the base curve was supplied
    double fp_residual = 0;
    std::vector<double> fp_history;  // weighted gap after each pass

    struct SurfacePoint {
        double f, p, q, k1, k2;
        double u, h;  // sweep coordinates of the point
    };
    SurfacePoint at(double x1, double x2) const;
    double height(double x1, double x2) const { return at(x1, x2).f; }
};

// Advisory data-size margins of the sweep construction.
ThresholdReport pc_thresholds(const BoundaryData& bd, const PCConfig& cfg);

// Builds the profile from the transversal curvature datum and sweeps the
// supplied base curve.
PCSolution reconstruct_given_gamma1(const BoundaryData& bd, const PCConfig& cfg,
                                    const PlanarCurveGraph& gamma1);

// Full pipeline: also solves for the base curve so that the leading
// principal curvature matches the datum along the line x2 = 0.  Iterates
// slope-field updates through the quadrature of the bent-curve relation;
// each pass pins the data abscissa per node by a safeguarded Newton solve.
PCSolution pc_fixed_point(const BoundaryData& bd, const PCConfig& cfg);

}  // namespace curverecon
