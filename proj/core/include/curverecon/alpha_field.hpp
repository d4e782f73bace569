#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curverecon/dual.hpp"

namespace curverecon {

// Transversal slope field alpha(x1, x2).  The marching direction at a point
// is (alpha, 1) in base coordinates.
class AlphaField {
  public:
    static AlphaField constant(double a);
    static AlphaField expression(const std::string& src);
    // Rectilinear sample grid with bilinear interpolation; xs, ys strictly
    // increasing, values row-major with x1 fastest.
    static AlphaField sampled(std::vector<double> xs, std::vector<double> ys,
                              std::vector<double> values);

    double operator()(double x1, double x2) const { return f_(x1, x2); }

    struct Grad {
        double a, ax, ay;
    };
    Grad grad(double x1, double x2) const;

    Dual5 eval(const Dual5& x1, const Dual5& x2) const { return fd_(x1, x2); }

    const std::string& describe() const { return desc_; }
    bool is_constant() const { return constant_; }

  private:
    std::function<double(double, double)> f_;
    std::function<Dual5(const Dual5&, const Dual5&)> fd_;
    std::string desc_;
    bool constant_ = false;
};

}  // namespace curverecon
