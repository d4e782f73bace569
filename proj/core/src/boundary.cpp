#include "curverecon/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "curverecon/errors.hpp"
#include "curverecon/expr.hpp"
#include "curverecon/interp.hpp"
#include "curverecon/io.hpp"

namespace curverecon {

double BoundaryData::data_sup(int samples) const {
    double s = 0;
    for (int i = 0; i < samples; ++i) {
        double x = -a1 + 2.0 * a1 * i / (samples - 1);
        s = std::max({s, std::abs(kbar1(x)), std::abs(kbar2(x))});
    }
    return s;
}

BoundaryData boundary_constant(double a1, double kbar1, double kbar2) {
    if (a1 <= 0) throw ConfigError("boundary half-width must be positive");
    BoundaryData b;
    b.a1 = a1;
    b.kbar1 = [kbar1](double) { return kbar1; };
    b.kbar2 = [kbar2](double) { return kbar2; };
    return b;
}

BoundaryData boundary_analytic(double a1, const std::string& kbar1_expr,
                               const std::string& kbar2_expr, const std::string& alpha0_expr,
                               const std::string& lambda_expr) {
    if (a1 <= 0) throw ConfigError("boundary half-width must be positive");
    auto wrap = [](const std::string& src) -> std::function<double(double)> {
        auto e = std::make_shared<Expr>(Expr::parse(src));
        if (e->uses_z()) throw ConfigError("boundary expression must depend on x only");
        return [e](double x) { return e->eval(x, 0.0, 0.0); };
    };
    BoundaryData b;
    b.a1 = a1;
    b.kbar1 = wrap(kbar1_expr);
    b.kbar2 = wrap(kbar2_expr);
    if (!alpha0_expr.empty()) b.alpha0 = wrap(alpha0_expr);
    if (!lambda_expr.empty()) b.lambda = wrap(lambda_expr);
    return b;
}

BoundaryData boundary_from_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    int cx = t.column("x1");
    if (cx < 0) cx = t.column("x");
    int c1 = t.column("kbar1"), c2 = t.column("kbar2");
    if (cx < 0 || c1 < 0 || c2 < 0)
        throw ConfigError(path + ": boundary CSV needs columns x1, kbar1, kbar2");
    int ca = t.column("alpha0"), cl = t.column("lambda");
    if (t.rows.size() < 4) throw ConfigError(path + ": need at least 4 boundary samples");

    std::vector<std::vector<double>> rows = t.rows;
    std::sort(rows.begin(), rows.end(),
              [cx](const auto& a, const auto& b) { return a[cx] < b[cx]; });
    auto col = [&](int c) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) {
            if (std::isnan(r[size_t(c)])) throw ConfigError(path + ": NaN in boundary column");
            v.push_back(r[size_t(c)]);
        }
        return v;
    };
    std::vector<double> xs = col(cx);
    if (xs.front() >= 0 || xs.back() <= 0)
        throw ConfigError(path + ": boundary grid must straddle x1 = 0");

    BoundaryData b;
    b.a1 = std::min(-xs.front(), xs.back());
    auto make = [&](int c) -> std::function<double(double)> {
        auto sp = std::make_shared<CubicSpline>(xs, col(c));
        return [sp](double x) { return (*sp)(x); };
    };
    b.kbar1 = make(c1);
    b.kbar2 = make(c2);
    if (ca >= 0) b.alpha0 = make(ca);
    if (cl >= 0) b.lambda = make(cl);
    return b;
}

}  // namespace curverecon
