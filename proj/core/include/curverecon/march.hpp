#pragma once

#include <string>
#include <vector>

#include "curverecon/alpha_field.hpp"
#include "curverecon/boundary.hpp"
#include "curverecon/metric.hpp"
#include "curverecon/strip.hpp"

namespace curverecon {

struct MarchConfig {
    int nx = 257;            // level-0 nodes across [-a1, a1]
    double cfl = 0.9;        // fraction of the stability limit
    double eps_target = 0.1; // requested march height
    double r = 1.0;          // sup-norm guard on (f, p, q, k1, k2)
    double K_inflate = 1.5;  // slope margin over the level-0 speeds
    double K_override = 0;   // > 0: fix the trapezoid slope (and so dy) directly
    bool second_order = false;  // predictor-corrector transport of the curvatures
};

struct LevelData {
    double y = 0;
    size_t i0 = 0;  // offset into the level-0 abscissa array
    std::vector<double> f, p, q, k1, k2;
    size_t size() const { return f.size(); }
};

struct StateGrid {
    double dx = 0, dy = 0, K = 0;
    std::vector<double> x;  // level-0 abscissae
    std::vector<LevelData> levels;

    double x_at(const LevelData& lv, size_t j) const { return x[lv.i0 + j]; }
};

enum class StopReason { completed, closed, singular, norm_breach, cfl_violation };

const char* to_string(StopReason r);

struct MarchResult {
    StateGrid grid;
    StopReason stop = StopReason::completed;
    std::string message;
    double eps_reached = 0;
};

struct InitialRow {
    std::vector<double> x, f, p, q, k1, k2;
};

// Uniform sampling of the strip solution and the curvature data.
InitialRow initial_row(const StripSolution& strip, const BoundaryData& bd, int nx);

// Upwind characteristic march of the coupled system: curvatures transported
// along their characteristic lines, the height jet advanced along vertical
// lines.  The domain shrinks one node per side per level, which keeps every
// computed node inside the trapezoid of determinacy.
MarchResult march_cauchy(const MetricField& m, const AlphaField& alpha, const InitialRow& row0,
                         const MarchConfig& cfg);

struct CompatReport {
    double sup1 = 0, sup2 = 0;  // the two mixed-derivative defects
    double rms = 0;
    int samples = 0;
};

// Mixed third-derivative consistency of the stored state: the y-derivative
// of each second-form field must match the x-derivative of its neighbor.
// Central in x, one-sided three-point in y, both second order.
CompatReport compatibility_residual(const StateGrid& g, const MetricField& m,
                                    const AlphaField& alpha);

}  // namespace curverecon
