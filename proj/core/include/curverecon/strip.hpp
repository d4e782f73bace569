#pragma once

#include "curverecon/alpha_field.hpp"
#include "curverecon/boundary.hpp"
#include "curverecon/interp.hpp"
#include "curverecon/metric.hpp"

namespace curverecon {

struct StripConfig {
    double r = 1.0;        // admissible sup-norm ball for (f, p, q)
    int substeps = 2048;   // integrator steps per half-width
    double f00 = 0, p00 = 0, q00 = 0;
    bool enforce_threshold = false;  // violation throws instead of warning
};

// Data-smallness estimate: solutions seeded inside the ball stay inside it
// when the data sup stays below delta_r.  Advisory; the integrator guards
// the ball directly.
struct ThresholdInfo {
    double delta_r = 0;
    double data_sup = 0;
    double C = 0, Lbar = 0;
    bool ok() const { return data_sup <= delta_r; }
};

// Height, gradient components along the data line, as Hermite series over a
// uniform grid on [-a1, a1].
struct StripSolution {
    double a1 = 0, h = 0;
    HermiteSeries f, p, q;
    ThresholdInfo threshold;
};

ThresholdInfo smallness_threshold(const MetricField& m, const AlphaField& alpha,
                                  const BoundaryData& bd, double r);

StripSolution solve_initial_strip(const BoundaryData& bd, const MetricField& m,
                                  const AlphaField& alpha, const StripConfig& cfg = {});

// Deviation bound for two solutions of a Lipschitz system over a span:
// (accumulated step error + initial deviation) growing at rate Lbar.
double gronwall_bound(double step_error, double initial_dev, double Lbar, double span);

}  // namespace curverecon
