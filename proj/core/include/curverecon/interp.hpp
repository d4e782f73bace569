#pragma once

#include <cstddef>
#include <vector>

namespace curverecon {

// Natural cubic spline through (xs, ys); xs strictly increasing, may be
// non-uniform.  Outside the range the end cubics extrapolate.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    double x_front() const { return xs_.front(); }
    double x_back() const { return xs_.back(); }
    size_t size() const { return xs_.size(); }

  private:
    std::vector<double> xs_, ys_, m_;  // m: second derivatives at nodes
    size_t cell(double x) const;
};

// Piecewise cubic Hermite series on a uniform grid x0 + i h, from node
// values v and node derivatives d.
struct HermiteSeries {
    double x0 = 0, h = 1;
    std::vector<double> v, d;

    double operator()(double x) const;
    double deriv(double x) const;
    double x_back() const { return x0 + h * double(v.size() - 1); }
};

// Cumulative integral of uniform samples g anchored at index i0:
// out[j] = integral from x_{i0} to x_j, negative to the left of the anchor.
// Per-interval quadratic fits, fourth order locally.
std::vector<double> cumulative_integral(const std::vector<double>& g, double h, size_t i0);

double trapezoid_integral(const std::vector<double>& g, double h);

}  // namespace curverecon
