#include "curverecon/march.hpp"

#include <algorithm>
#include <cmath>

#include "curverecon/errors.hpp"
#include "curverecon/geometry.hpp"
#include "curverecon/hcoeffs.hpp"

namespace curverecon {

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::completed: return "completed";
        case StopReason::closed: return "closed";
        case StopReason::singular: return "singular";
        case StopReason::norm_breach: return "norm_breach";
        case StopReason::cfl_violation: return "cfl_violation";
    }
    return "?";
}

InitialRow initial_row(const StripSolution& strip, const BoundaryData& bd, int nx) {
    if (nx < 5) throw ConfigError("march needs at least 5 nodes");
    InitialRow r;
    double a1 = strip.a1;
    double dx = 2.0 * a1 / (nx - 1);
    for (int i = 0; i < nx; ++i) {
        double x = -a1 + i * dx;
        r.x.push_back(x);
        r.f.push_back(strip.f(x));
        r.p.push_back(strip.p(x));
        r.q.push_back(strip.q(x));
        r.k1.push_back(bd.kbar1(x));
        r.k2.push_back(bd.kbar2(x));
    }
    return r;
}

namespace {

// Per-node stage quantities on a level.
struct NodeEval {
    double lam1, lam2;
    double H11, H12, H22;
    double psi1, psi2;
};

NodeEval eval_node(const MetricField& m, const AlphaField& alpha, double x, double y, double f,
                   double p, double q, double k1, double k2, bool want_sources) {
    Jet2 jet;
    jet.f = f;
    jet.p = p;
    jet.q = q;
    FundamentalForms ff = fundamental_forms(m, jet, x, y);
    double a = alpha(x, y);
    CharSpeeds sp = characteristic_speeds(ff, a);
    HCoefficients hc = h_coefficients_general(ff, a, k1, k2);
    NodeEval e;
    e.lam1 = sp.lambda1;
    e.lam2 = sp.lambda2;
    e.H11 = hc.H11;
    e.H12 = hc.H12;
    e.H22 = hc.H22;
    e.psi1 = e.psi2 = 0;
    if (want_sources) {
        SourceTerms st = source_terms_general(m, alpha, x, y, f, p, q, k1, k2);
        e.psi1 = st.psi1;
        e.psi2 = st.psi2;
    }
    return e;
}

// Linear sample of a per-node array at a fractional index.
double sample(const std::vector<double>& a, double r) {
    double fl = std::floor(r);
    long i = long(fl);
    i = std::clamp<long>(i, 0, long(a.size()) - 2);
    double t = r - double(i);
    return (1.0 - t) * a[size_t(i)] + t * a[size_t(i) + 1];
}

}  // namespace

MarchResult march_cauchy(const MetricField& m, const AlphaField& alpha, const InitialRow& row0,
                         const MarchConfig& cfg) {
    size_t n0 = row0.x.size();
    if (n0 < 5) throw ConfigError("march needs at least 5 nodes");
    if (row0.f.size() != n0 || row0.p.size() != n0 || row0.q.size() != n0 ||
        row0.k1.size() != n0 || row0.k2.size() != n0)
        throw ConfigError("initial row arrays must have matching sizes");
    double dx = row0.x[1] - row0.x[0];
    for (size_t i = 1; i < n0; ++i)
        if (std::abs(row0.x[i] - row0.x[i - 1] - dx) > 1e-9 * std::abs(dx))
            throw ConfigError("initial row must be uniformly spaced");
    if (cfg.cfl <= 0 || cfg.cfl >= 1) throw ConfigError("cfl must lie in (0, 1)");
    if (cfg.eps_target <= 0) throw ConfigError("eps_target must be positive");

    MarchResult res;
    StateGrid& g = res.grid;
    g.dx = dx;
    g.x = row0.x;
    g.levels.push_back(LevelData{0.0, 0, row0.f, row0.p, row0.q, row0.k1, row0.k2});

    // Slope of the shrinking trapezoid from the level-0 speeds.
    double smax0 = 0;
    try {
        for (size_t j = 0; j < n0; ++j) {
            NodeEval e = eval_node(m, alpha, g.x[j], 0.0, row0.f[j], row0.p[j], row0.q[j],
                                   row0.k1[j], row0.k2[j], false);
            smax0 = std::max({smax0, std::abs(e.lam1), std::abs(e.lam2)});
        }
    } catch (const SingularityError& ex) {
        res.stop = StopReason::singular;
        res.message = ex.what();
        return res;
    }
    g.K = cfg.K_override > 0 ? cfg.K_override : std::max(cfg.K_inflate * smax0, 1e-2);
    g.dy = cfg.cfl * dx / g.K;

    long nsteps = long(std::ceil(cfg.eps_target / g.dy - 1e-9));
    nsteps = std::max(nsteps, 1l);

    for (long step = 0; step < nsteps; ++step) {
        const LevelData& cur = g.levels.back();
        size_t n = cur.size();
        if (n < 3) {
            res.stop = StopReason::closed;
            res.message = "domain closed before reaching the target height";
            break;
        }
        double y = cur.y, ynext = (step + 1) * g.dy;

        std::vector<NodeEval> ev(n);
        bool stop = false;
        try {
            for (size_t j = 0; j < n; ++j) {
                ev[j] = eval_node(m, alpha, g.x_at(cur, j), y, cur.f[j], cur.p[j], cur.q[j],
                                  cur.k1[j], cur.k2[j], true);
                double shift = std::max(std::abs(ev[j].lam1), std::abs(ev[j].lam2)) * g.dy / dx;
                if (shift > 1.0 - 1e-12) {
                    res.stop = StopReason::cfl_violation;
                    res.message = "characteristic speed exceeded the grid slope at y = " +
                                  std::to_string(y);
                    stop = true;
                    break;
                }
            }
        } catch (const SingularityError& ex) {
            res.stop = StopReason::singular;
            res.message = std::string(ex.what()) + " at y = " + std::to_string(y);
            stop = true;
        }
        if (stop) break;

        std::vector<double> lam1(n), lam2(n), psi1(n), psi2(n), h12(n), h22(n), k1s(n), k2s(n);
        for (size_t j = 0; j < n; ++j) {
            lam1[j] = ev[j].lam1;
            lam2[j] = ev[j].lam2;
            psi1[j] = ev[j].psi1;
            psi2[j] = ev[j].psi2;
            h12[j] = ev[j].H12;
            h22[j] = ev[j].H22;
            k1s[j] = cur.k1[j];
            k2s[j] = cur.k2[j];
        }

        LevelData next;
        next.y = ynext;
        next.i0 = cur.i0 + 1;
        size_t nn = n - 2;
        next.f.resize(nn);
        next.p.resize(nn);
        next.q.resize(nn);
        next.k1.resize(nn);
        next.k2.resize(nn);

        // Transport feet in index space keeps the update translation
        // equivariant bit for bit.
        std::vector<double> src1(nn), src2(nn);  // foot-sampled sources
        for (size_t jn = 0; jn < nn; ++jn) {
            size_t j = jn + 1;
            double r1 = double(j) - lam1[j] * g.dy / dx;
            double r2 = double(j) - lam2[j] * g.dy / dx;
            src1[jn] = sample(psi1, r1);
            src2[jn] = sample(psi2, r2);
            next.k1[jn] = sample(k1s, r1) + g.dy * src1[jn];
            next.k2[jn] = sample(k2s, r2) + g.dy * src2[jn];
            // predictor jet along the vertical line
            next.f[jn] = cur.f[j] + g.dy * cur.q[j];
            next.p[jn] = cur.p[j] + g.dy * h12[j];
            next.q[jn] = cur.q[j] + g.dy * h22[j];
        }

        // Corrector pass at the predicted state.
        try {
            for (size_t jn = 0; jn < nn; ++jn) {
                size_t j = jn + 1;
                NodeEval eb = eval_node(m, alpha, g.x_at(next, jn), ynext, next.f[jn],
                                        next.p[jn], next.q[jn], next.k1[jn], next.k2[jn],
                                        cfg.second_order);
                next.f[jn] = cur.f[j] + 0.5 * g.dy * (cur.q[j] + next.q[jn]);
                next.p[jn] = cur.p[j] + 0.5 * g.dy * (h12[j] + eb.H12);
                next.q[jn] = cur.q[j] + 0.5 * g.dy * (h22[j] + eb.H22);
                if (cfg.second_order) {
                    double r1 = double(j) - lam1[j] * g.dy / dx;
                    double r2 = double(j) - lam2[j] * g.dy / dx;
                    next.k1[jn] = sample(k1s, r1) + 0.5 * g.dy * (src1[jn] + eb.psi1);
                    next.k2[jn] = sample(k2s, r2) + 0.5 * g.dy * (src2[jn] + eb.psi2);
                }
            }
        } catch (const SingularityError& ex) {
            res.stop = StopReason::singular;
            res.message = std::string(ex.what()) + " at y = " + std::to_string(ynext);
            break;
        }

        double nrm = 0;
        for (size_t jn = 0; jn < nn; ++jn)
            nrm = std::max({nrm, std::abs(next.f[jn]), std::abs(next.p[jn]),
                            std::abs(next.q[jn]), std::abs(next.k1[jn]),
                            std::abs(next.k2[jn])});
        if (nrm > cfg.r) {
            res.stop = StopReason::norm_breach;
            res.message = "state norm " + std::to_string(nrm) + " breached the guard at y = " +
                          std::to_string(ynext);
            break;
        }
        g.levels.push_back(std::move(next));
        if (step + 1 == nsteps) res.stop = StopReason::completed;
    }
    res.eps_reached = g.levels.back().y;
    return res;
}

CompatReport compatibility_residual(const StateGrid& g, const MetricField& m,
                                    const AlphaField& alpha) {
    CompatReport rep;
    if (g.levels.size() < 3) return rep;

    // Cache the second-form fields per level.
    struct Fields {
        std::vector<double> H11, H12, H22;
    };
    std::vector<Fields> fl(g.levels.size());
    for (size_t l = 0; l < g.levels.size(); ++l) {
        const LevelData& lv = g.levels[l];
        fl[l].H11.resize(lv.size());
        fl[l].H12.resize(lv.size());
        fl[l].H22.resize(lv.size());
        for (size_t j = 0; j < lv.size(); ++j) {
            Jet2 jet;
            jet.f = lv.f[j];
            jet.p = lv.p[j];
            jet.q = lv.q[j];
            FundamentalForms ff = fundamental_forms(m, jet, g.x_at(lv, j), lv.y);
            HCoefficients hc =
                h_coefficients_general(ff, alpha(g.x_at(lv, j), lv.y), lv.k1[j], lv.k2[j]);
            fl[l].H11[j] = hc.H11;
            fl[l].H12[j] = hc.H12;
            fl[l].H22[j] = hc.H22;
        }
    }

    double ss = 0;
    for (size_t l = 0; l + 2 < g.levels.size(); ++l) {
        const LevelData& lv = g.levels[l];
        // a node must exist two levels up, so stay 2 in from each edge
        for (size_t j = 2; j + 2 < lv.size(); ++j) {
            size_t gidx = lv.i0 + j;
            size_t j1 = gidx - g.levels[l + 1].i0;
            size_t j2 = gidx - g.levels[l + 2].i0;
            auto dyq = [&](const std::vector<double>& a0, const std::vector<double>& a1,
                           const std::vector<double>& a2) {
                return (-3.0 * a0[j] + 4.0 * a1[j1] - a2[j2]) / (2.0 * g.dy);
            };
            auto dxq = [&](const std::vector<double>& a) {
                return (a[j + 1] - a[j - 1]) / (2.0 * g.dx);
            };
            double r1 = dyq(fl[l].H11, fl[l + 1].H11, fl[l + 2].H11) - dxq(fl[l].H12);
            double r2 = dyq(fl[l].H12, fl[l + 1].H12, fl[l + 2].H12) - dxq(fl[l].H22);
            rep.sup1 = std::max(rep.sup1, std::abs(r1));
            rep.sup2 = std::max(rep.sup2, std::abs(r2));
            ss += r1 * r1 + r2 * r2;
            ++rep.samples;
        }
    }
    if (rep.samples) rep.rms = std::sqrt(ss / (2.0 * rep.samples));
    return rep;
}

}  // namespace curverecon
