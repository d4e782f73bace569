#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "curverecon/geometry.hpp"
#include "curverecon/march.hpp"
#include "curverecon/pc.hpp"

namespace curverecon {

// Height samples on a rectilinear grid; NaN marks a hole.
struct GraphSamples {
    std::vector<double> xs, ys;
    std::vector<double> f;  // row-major, f[j * nx + i]

    size_t nx() const { return xs.size(); }
    size_t ny() const { return ys.size(); }
    double at(size_t i, size_t j) const { return f[j * xs.size() + i]; }
    bool valid(size_t i, size_t j) const;
};

GraphSamples graph_from_function(const std::function<double(double, double)>& fn,
                                 std::vector<double> xs, std::vector<double> ys);
GraphSamples graph_from_march(const StateGrid& g);
GraphSamples graph_from_pc(const PCSolution& pc, std::vector<double> xs, std::vector<double> ys);

struct ShapeSample {
    bool valid = false;
    Jet2 jet;
    FundamentalForms ff;
    PrincipalData pd;
};

// Finite-difference jet at an interior sample, pushed through the same
// form and principal-curvature code the solvers use.  Needs the full 3x3
// neighborhood; second order in both spacings.
ShapeSample fd_shape_operator(const GraphSamples& gs, const MetricField& m, size_t i, size_t j,
                              std::optional<std::array<double, 2>> hint = {});

struct DirectionReport {
    int checked = 0, skipped = 0;
    double max_angle = 0;  // radians, sign ignored
};

// Checks that the leading principal direction projects onto the transversal
// field (alpha, 1) everywhere the surface is non-umbilic.
DirectionReport direction_projection_check(const GraphSamples& gs, const MetricField& m,
                                           const AlphaField& alpha);

struct OrderFit {
    double order = 0;
    double logc = 0;
};

// Least-squares slope of log(err) against log(h).
OrderFit fit_order(const std::vector<double>& hs, const std::vector<double>& errs);

// Integral line of the leading characteristic field through the marched
// state, one point per level, starting on the data line.
std::vector<std::array<double, 2>> trace_k1_line(const StateGrid& g, const MetricField& m,
                                                 const AlphaField& alpha, double x_start);

}  // namespace curverecon
