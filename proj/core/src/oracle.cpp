#include "curverecon/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "curverecon/errors.hpp"
#include "curverecon/hcoeffs.hpp"

namespace curverecon {

bool GraphSamples::valid(size_t i, size_t j) const {
    return i < nx() && j < ny() && !std::isnan(at(i, j));
}

GraphSamples graph_from_function(const std::function<double(double, double)>& fn,
                                 std::vector<double> xs, std::vector<double> ys) {
    GraphSamples g;
    g.xs = std::move(xs);
    g.ys = std::move(ys);
    g.f.resize(g.nx() * g.ny());
    for (size_t j = 0; j < g.ny(); ++j)
        for (size_t i = 0; i < g.nx(); ++i) g.f[j * g.nx() + i] = fn(g.xs[i], g.ys[j]);
    return g;
}

GraphSamples graph_from_march(const StateGrid& g) {
    GraphSamples out;
    out.xs = g.x;
    for (const auto& lv : g.levels) out.ys.push_back(lv.y);
    out.f.assign(out.nx() * out.ny(), std::nan(""));
    for (size_t l = 0; l < g.levels.size(); ++l) {
        const LevelData& lv = g.levels[l];
        for (size_t j = 0; j < lv.size(); ++j) out.f[l * out.nx() + lv.i0 + j] = lv.f[j];
    }
    return out;
}

GraphSamples graph_from_pc(const PCSolution& pc, std::vector<double> xs, std::vector<double> ys) {
    GraphSamples g;
    g.xs = std::move(xs);
    g.ys = std::move(ys);
    g.f.assign(g.nx() * g.ny(), std::nan(""));
    for (size_t j = 0; j < g.ny(); ++j)
        for (size_t i = 0; i < g.nx(); ++i) {
            try {
                g.f[j * g.nx() + i] = pc.height(g.xs[i], g.ys[j]);
            } catch (const DomainError&) {
                // outside the swept region: leave the hole
            }
        }
    return g;
}

ShapeSample fd_shape_operator(const GraphSamples& gs, const MetricField& m, size_t i, size_t j,
                              std::optional<std::array<double, 2>> hint) {
    ShapeSample s;
    if (i == 0 || j == 0 || i + 1 >= gs.nx() || j + 1 >= gs.ny()) return s;
    for (size_t dj = j - 1; dj <= j + 1; ++dj)
        for (size_t di = i - 1; di <= i + 1; ++di)
            if (!gs.valid(di, dj)) return s;
    double hx = gs.xs[i + 1] - gs.xs[i], hy = gs.ys[j + 1] - gs.ys[j];
    if (std::abs(gs.xs[i] - gs.xs[i - 1] - hx) > 1e-9 * hx ||
        std::abs(gs.ys[j] - gs.ys[j - 1] - hy) > 1e-9 * hy)
        return s;  // stencil needs locally uniform spacing

    s.jet.f = gs.at(i, j);
    s.jet.p = (gs.at(i + 1, j) - gs.at(i - 1, j)) / (2.0 * hx);
    s.jet.q = (gs.at(i, j + 1) - gs.at(i, j - 1)) / (2.0 * hy);
    s.jet.fxx = (gs.at(i + 1, j) - 2.0 * gs.at(i, j) + gs.at(i - 1, j)) / (hx * hx);
    s.jet.fyy = (gs.at(i, j + 1) - 2.0 * gs.at(i, j) + gs.at(i, j - 1)) / (hy * hy);
    s.jet.fxy = (gs.at(i + 1, j + 1) - gs.at(i + 1, j - 1) - gs.at(i - 1, j + 1) +
                 gs.at(i - 1, j - 1)) /
                (4.0 * hx * hy);
    if (!m.inside({gs.xs[i], gs.ys[j], s.jet.f})) return s;
    s.ff = fundamental_forms(m, s.jet, gs.xs[i], gs.ys[j]);
    s.pd = principal_curvatures(s.ff, hint);
    s.valid = true;
    return s;
}

DirectionReport direction_projection_check(const GraphSamples& gs, const MetricField& m,
                                           const AlphaField& alpha) {
    DirectionReport rep;
    for (size_t j = 1; j + 1 < gs.ny(); ++j)
        for (size_t i = 1; i + 1 < gs.nx(); ++i) {
            double a = alpha(gs.xs[i], gs.ys[j]);
            ShapeSample s = fd_shape_operator(gs, m, i, j, std::array<double, 2>{a, 1.0});
            if (!s.valid) continue;
            if (std::abs(s.pd.k1 - s.pd.k2) < 1e-6 * std::max(1.0, std::abs(s.pd.k1))) {
                ++rep.skipped;
                continue;
            }
            double cx = s.pd.dir1[0], cy = s.pd.dir1[1];
            double cross = std::abs(cx * 1.0 - cy * a);
            double dot = std::abs(cx * a + cy * 1.0);
            rep.max_angle = std::max(rep.max_angle, std::atan2(cross, dot));
            ++rep.checked;
        }
    return rep;
}

OrderFit fit_order(const std::vector<double>& hs, const std::vector<double>& errs) {
    if (hs.size() != errs.size() || hs.size() < 2)
        throw ConfigError("order fit needs matching samples, two at least");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = hs.size();
    for (size_t i = 0; i < n; ++i) {
        double lx = std::log(hs[i]), ly = std::log(std::max(errs[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    OrderFit f;
    f.order = (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    f.logc = (sy - f.order * sx) / double(n);
    return f;
}

std::vector<std::array<double, 2>> trace_k1_line(const StateGrid& g, const MetricField& m,
                                                 const AlphaField& alpha, double x_start) {
    std::vector<std::array<double, 2>> line;
    double x = x_start;
    for (size_t l = 0; l < g.levels.size(); ++l) {
        const LevelData& lv = g.levels[l];
        double xlo = g.x_at(lv, 0), xhi = g.x_at(lv, lv.size() - 1);
        if (x < xlo || x > xhi) break;
        line.push_back({x, lv.y});
        if (l + 1 == g.levels.size()) break;

        double r = (x - xlo) / g.dx;
        size_t i = std::min(size_t(std::floor(r)), lv.size() - 2);
        double t = r - double(i);
        auto lerp = [&](const std::vector<double>& a) {
            return (1.0 - t) * a[i] + t * a[i + 1];
        };
        Jet2 jet;
        jet.f = lerp(lv.f);
        jet.p = lerp(lv.p);
        jet.q = lerp(lv.q);
        FundamentalForms ff = fundamental_forms(m, jet, x, lv.y);
        CharSpeeds sp = characteristic_speeds(ff, alpha(x, lv.y));
        x += g.dy * sp.lambda1;
    }
    return line;
}

}  // namespace curverecon
