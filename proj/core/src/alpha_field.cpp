#include "curverecon/alpha_field.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "curverecon/errors.hpp"
#include "curverecon/expr.hpp"

namespace curverecon {

AlphaField AlphaField::constant(double a) {
    AlphaField r;
    r.f_ = [a](double, double) { return a; };
    r.fd_ = [a](const Dual5&, const Dual5&) { return Dual5(a); };
    r.desc_ = "constant " + std::to_string(a);
    r.constant_ = true;
    return r;
}

AlphaField AlphaField::expression(const std::string& src) {
    auto e = std::make_shared<Expr>(Expr::parse(src));
    if (e->uses_z()) throw ConfigError("alpha expression must depend on x and y only");
    AlphaField r;
    r.f_ = [e](double x, double y) { return e->eval(x, y, 0.0); };
    r.fd_ = [e](const Dual5& x, const Dual5& y) { return e->eval(x, y, Dual5(0.0)); };
    r.desc_ = "expr " + e->source();
    return r;
}

namespace {

struct SampledGrid {
    std::vector<double> xs, ys, v;
    size_t cell(const std::vector<double>& t, double u) const {
        // clamped cell lookup; out-of-range points extrapolate the edge cell
        auto it = std::upper_bound(t.begin(), t.end(), u);
        size_t i = (it == t.begin()) ? 0 : size_t(it - t.begin()) - 1;
        return std::min(i, t.size() - 2);
    }
    template <class T>
    T eval(const T& x, const T& y) const {
        size_t i = cell(xs, value(x)), j = cell(ys, value(y));
        T tx = (x - xs[i]) / (xs[i + 1] - xs[i]);
        T ty = (y - ys[j]) / (ys[j + 1] - ys[j]);
        const double v00 = v[j * xs.size() + i], v10 = v[j * xs.size() + i + 1];
        const double v01 = v[(j + 1) * xs.size() + i], v11 = v[(j + 1) * xs.size() + i + 1];
        return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
    }
};

}  // namespace

AlphaField AlphaField::sampled(std::vector<double> xs, std::vector<double> ys,
                               std::vector<double> values) {
    if (xs.size() < 2 || ys.size() < 2) throw ConfigError("sampled alpha needs a 2x2 grid at least");
    if (values.size() != xs.size() * ys.size())
        throw ConfigError("sampled alpha: values size must be nx*ny");
    for (size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) throw ConfigError("sampled alpha: xs not increasing");
    for (size_t j = 1; j < ys.size(); ++j)
        if (ys[j] <= ys[j - 1]) throw ConfigError("sampled alpha: ys not increasing");

    auto g = std::make_shared<SampledGrid>(
        SampledGrid{std::move(xs), std::move(ys), std::move(values)});

    AlphaField r;
    r.f_ = [g](double x, double y) { return g->eval(x, y); };
    r.fd_ = [g](const Dual5& x, const Dual5& y) { return g->template eval<Dual5>(x, y); };
    r.desc_ = "sampled " + std::to_string(g->xs.size()) + "x" + std::to_string(g->ys.size());
    return r;
}

AlphaField::Grad AlphaField::grad(double x1, double x2) const {
    Dual5 v = fd_(Dual5(x1, 0), Dual5(x2, 1));
    return {v.v, v.d[0], v.d[1]};
}

}  // namespace curverecon
