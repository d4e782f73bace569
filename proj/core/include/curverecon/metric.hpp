#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "curverecon/dual.hpp"
#include "curverecon/errors.hpp"
#include "curverecon/linalg.hpp"

namespace curverecon {

enum class MetricKind { euclidean, general };

// Ambient metric on the coordinate box {|x_i| <= halfwidth_i}, with the
// standing block structure g13 = g23 = 0.  Components are evaluable both on
// plain doubles and on derivative-carrying scalars; presets install exact
// closed forms for the latter, otherwise a finite-difference chain rule
// stands in.
class MetricField {
  public:
    using CompFn = std::function<Sym3<double>(const Vec3<double>&)>;
    using CompDualFn = std::function<Sym3<Dual5>(const Vec3<Dual5>&)>;
    using GammaFn = std::function<Gamma3<double>(const Vec3<double>&)>;
    using GammaDualFn = std::function<Gamma3<Dual5>(const Vec3<Dual5>&)>;

    MetricKind kind = MetricKind::general;
    std::string id = "custom";
    std::array<double, 3> halfwidth{1.0, 1.0, 1.0};

    CompFn comp;
    CompDualFn comp_dual;      // may be empty: finite-difference fallback
    GammaFn gamma;             // optional analytic Christoffels
    GammaDualFn gamma_dual;    // optional, derivative-capable

    Sym3<double> components(const Vec3<double>& x) const { return comp(x); }
    Sym3<Dual5> components(const Vec3<Dual5>& x) const;

    bool has_analytic_christoffels() const { return static_cast<bool>(gamma); }

    bool inside(const Vec3<double>& x, double slack = 1e-9) const {
        for (int d = 0; d < 3; ++d)
            if (std::abs(x[d]) > halfwidth[d] + slack) return false;
        return true;
    }
    void require_inside(const Vec3<double>& x) const;
};

// Builds a metric whose components come from one generic callable usable at
// both scalar types (call as f(Vec3<T>) -> Sym3<T>).
template <class F>
MetricField make_metric(MetricKind kind, std::string id, std::array<double, 3> box, F f) {
    MetricField m;
    m.kind = kind;
    m.id = std::move(id);
    m.halfwidth = box;
    m.comp = [f](const Vec3<double>& x) { return f(x); };
    m.comp_dual = [f](const Vec3<Dual5>& x) { return f(x); };
    return m;
}

template <class F>
void attach_christoffels(MetricField& m, F f) {
    m.gamma = [f](const Vec3<double>& x) { return f(x); };
    m.gamma_dual = [f](const Vec3<Dual5>& x) { return f(x); };
}

Gamma3<double> christoffels(const MetricField& m, const Vec3<double>& x);
Gamma3<Dual5> christoffels(const MetricField& m, const Vec3<Dual5>& x);

// Named presets.  Box half-widths are defaults and may be overridden.
MetricField euclidean_metric(std::array<double, 3> box = {1.0, 1.0, 1.0});
// Flat space in spherical coordinates (rho, phi, theta) offset so that the
// origin sits at rho=1, phi=0, theta=pi/2; the base surface is the
// equatorial plane.
MetricField spherical_metric(std::array<double, 3> box = {0.5, 0.8, 0.5});
// Spherical coordinates sheared along the data line phi = b*(rho-1): the
// coordinates are (rho-1, phi-b*(rho-1), theta-pi/2).
MetricField sheared_spherical_metric(double b, std::array<double, 3> box = {0.3, 0.8, 0.5});
// Flat space in geodesic polar-height coordinates about the unit sphere:
// (latitude, longitude, rho-1).  The base surface {x3=0} is the unit
// sphere, totally umbilic with normal curvature -1 in the upward gauge.
MetricField sphere_base_metric(std::array<double, 3> box = {0.6, 0.6, 0.4});

// Inline metric from the six component expressions (g13, g23 must be "0"
// and may be omitted); variables x, y, z.
MetricField metric_from_expressions(const std::string& g11, const std::string& g12,
                                    const std::string& g22, const std::string& g33,
                                    std::array<double, 3> box);

// Resolves a preset id, e.g. "euclidean", "spherical",
// "sheared-spherical:0.5", "sphere-base".
MetricField metric_by_id(const std::string& id);

}  // namespace curverecon
