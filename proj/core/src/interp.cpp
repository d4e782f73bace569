#include "curverecon/interp.hpp"

#include <algorithm>
#include <cmath>

#include "curverecon/errors.hpp"

namespace curverecon {

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw ConfigError("spline needs two or more matching samples");
    for (size_t i = 1; i < n; ++i)
        if (xs_[i] <= xs_[i - 1]) throw ConfigError("spline abscissae must increase");
    m_.assign(n, 0.0);
    if (n == 2) return;  // linear

    // Thomas solve for interior second derivatives, natural ends.
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        double hl = xs_[i] - xs_[i - 1], hr = xs_[i + 1] - xs_[i];
        diag[i] = 2.0 * (hl + hr);
        upper[i] = hr;
        rhs[i] = 6.0 * ((ys_[i + 1] - ys_[i]) / hr - (ys_[i] - ys_[i - 1]) / hl);
    }
    for (size_t i = 2; i + 1 < n; ++i) {
        double hl = xs_[i] - xs_[i - 1];
        double w = hl / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

size_t CubicSpline::cell(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    size_t i = (it == xs_.begin()) ? 0 : size_t(it - xs_.begin()) - 1;
    return std::min(i, xs_.size() - 2);
}

double CubicSpline::operator()(double x) const {
    size_t i = cell(x);
    double h = xs_[i + 1] - xs_[i];
    double a = (xs_[i + 1] - x) / h, b = (x - xs_[i]) / h;
    return a * ys_[i] + b * ys_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
    size_t i = cell(x);
    double h = xs_[i + 1] - xs_[i];
    double a = (xs_[i + 1] - x) / h, b = (x - xs_[i]) / h;
    return (ys_[i + 1] - ys_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::deriv2(double x) const {
    size_t i = cell(x);
    double h = xs_[i + 1] - xs_[i];
    double a = (xs_[i + 1] - x) / h, b = (x - xs_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

double HermiteSeries::operator()(double x) const {
    if (v.size() < 2) return v.empty() ? 0.0 : v[0];
    double s = (x - x0) / h;
    long i = std::lround(std::floor(s));
    i = std::clamp<long>(i, 0, long(v.size()) - 2);
    double t = s - double(i);
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    return h00 * v[i] + h * h10 * d[i] + h01 * v[i + 1] + h * h11 * d[i + 1];
}

double HermiteSeries::deriv(double x) const {
    if (v.size() < 2) return 0.0;
    double s = (x - x0) / h;
    long i = std::lround(std::floor(s));
    i = std::clamp<long>(i, 0, long(v.size()) - 2);
    double t = s - double(i);
    double g00 = 6.0 * t * (t - 1.0);
    double g10 = (1.0 - t) * (1.0 - 3.0 * t);
    double g01 = -g00;
    double g11 = t * (3.0 * t - 2.0);
    return (g00 * v[i] + h * g10 * d[i] + g01 * v[i + 1] + h * g11 * d[i + 1]) / h;
}

std::vector<double> cumulative_integral(const std::vector<double>& g, double h, size_t i0) {
    size_t n = g.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (i0 >= n) throw ConfigError("cumulative_integral: anchor out of range");

    // Interval integrals from a quadratic through three uniform samples:
    // over the left interval  h (5 g0 + 8 g1 - g2) / 12,
    // over the right interval h (-g0 + 8 g1 + 5 g2) / 12.
    auto left = [&](size_t a) { return h * (5.0 * g[a] + 8.0 * g[a + 1] - g[a + 2]) / 12.0; };
    auto right = [&](size_t a) { return h * (-g[a] + 8.0 * g[a + 1] + 5.0 * g[a + 2]) / 12.0; };
    auto trap = [&](size_t a) { return 0.5 * h * (g[a] + g[a + 1]); };

    for (size_t j = i0 + 1; j < n; ++j) {
        double piece;
        if (j >= 2)
            piece = right(j - 2);
        else if (n >= 3)
            piece = left(j - 1);
        else
            piece = trap(j - 1);
        out[j] = out[j - 1] + piece;
    }
    for (size_t j = i0; j-- > 0;) {
        double piece;
        if (j + 2 < n)
            piece = left(j);
        else if (n >= 3)
            piece = right(j - 1);
        else
            piece = trap(j);
        out[j] = out[j + 1] - piece;
    }
    return out;
}

double trapezoid_integral(const std::vector<double>& g, double h) {
    if (g.size() < 2) return 0.0;
    double s = 0.5 * (g.front() + g.back());
    for (size_t i = 1; i + 1 < g.size(); ++i) s += g[i];
    return s * h;
}

}  // namespace curverecon
