#include "curverecon/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "curverecon/boundary.hpp"
#include "curverecon/errors.hpp"
#include "curverecon/expr.hpp"
#include "curverecon/geometry.hpp"
#include "curverecon/io.hpp"
#include "curverecon/march.hpp"
#include "curverecon/metric.hpp"
#include "curverecon/oracle.hpp"
#include "curverecon/pc.hpp"
#include "curverecon/strip.hpp"

namespace curverecon {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Ctx {
    RunOptions opt;
    json cfg;
    fs::path cfg_dir;
    fs::path out;
    bool writing = false;
    uint64_t config_hash = 0;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;
    std::ostream& log;

    explicit Ctx(std::ostream& l) : log(l) {}

    std::string resolve(const std::string& rel) const {
        fs::path p(rel);
        if (p.is_absolute()) return p.string();
        return (cfg_dir / p).string();
    }
    void warn(const std::string& msg) {
        warnings.push_back(msg);
        log << "warning: " << msg << "\n";
    }
};

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

double jnum(const json& obj, const char* key, double def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) throw ConfigError(std::string(key) + ": expected a number");
    return obj[key].get<double>();
}

int jint(const json& obj, const char* key, int def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
    return obj[key].get<int>();
}

bool jbool(const json& obj, const char* key, bool def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_boolean()) throw ConfigError(std::string(key) + ": expected a boolean");
    return obj[key].get<bool>();
}

std::string jstr(const json& obj, const char* key, const std::string& def = "") {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_string()) throw ConfigError(std::string(key) + ": expected a string");
    return obj[key].get<std::string>();
}

// number-or-expression field, canonicalized to an expression string
std::string jexpr(const json& obj, const char* key, const std::string& def = "") {
    if (!obj.contains(key)) return def;
    const json& v = obj[key];
    if (v.is_number()) return format_g17(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    throw ConfigError(std::string(key) + ": expected a number or an expression string");
}

MetricField build_metric(const json& cfg) {
    if (!cfg.contains("metric")) return euclidean_metric();
    const json& m = cfg["metric"];
    if (m.is_string()) return metric_by_id(m.get<std::string>());
    check_keys(m, {"id", "g11", "g12", "g22", "g33", "halfwidth"}, "metric");
    if (m.contains("id")) return metric_by_id(jstr(m, "id"));
    for (const char* k : {"g11", "g22", "g33"})
        if (!m.contains(k)) throw ConfigError(std::string("metric: missing ") + k);
    Vec3<double> hw{1, 1, 1};
    if (m.contains("halfwidth")) {
        const json& h = m["halfwidth"];
        if (!h.is_array() || h.size() != 3)
            throw ConfigError("metric.halfwidth: expected [a1, a2, a3]");
        for (int i = 0; i < 3; ++i) hw[i] = h[i].get<double>();
    }
    return metric_from_expressions(jexpr(m, "g11"), jexpr(m, "g12", "0"), jexpr(m, "g22"),
                                   jexpr(m, "g33"), hw);
}

AlphaField build_alpha(const json& cfg, const Ctx& ctx) {
    if (!cfg.contains("alpha")) throw ConfigError("missing alpha section");
    const json& a = cfg["alpha"];
    if (a.is_number()) return AlphaField::constant(a.get<double>());
    if (a.is_string()) return AlphaField::expression(a.get<std::string>());
    check_keys(a, {"constant", "expr", "csv"}, "alpha");
    if (a.contains("constant")) return AlphaField::constant(jnum(a, "constant", 0));
    if (a.contains("expr")) return AlphaField::expression(jstr(a, "expr"));
    if (a.contains("csv")) {
        CsvTable t = read_csv(ctx.resolve(jstr(a, "csv")));
        int cx = t.column("x"), cy = t.column("y"), cv = t.column("alpha");
        if (cx < 0 || cy < 0 || cv < 0)
            throw ConfigError("alpha csv needs columns x, y, alpha");
        std::vector<double> xs, ys;
        for (const auto& r : t.rows) {
            xs.push_back(r[size_t(cx)]);
            ys.push_back(r[size_t(cy)]);
        }
        auto uniq = [](std::vector<double>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        uniq(xs);
        uniq(ys);
        std::vector<double> vals(xs.size() * ys.size(), std::nan(""));
        for (const auto& r : t.rows) {
            size_t i = size_t(std::lower_bound(xs.begin(), xs.end(), r[size_t(cx)]) - xs.begin());
            size_t j = size_t(std::lower_bound(ys.begin(), ys.end(), r[size_t(cy)]) - ys.begin());
            vals[j * xs.size() + i] = r[size_t(cv)];
        }
        for (double v : vals)
            if (std::isnan(v)) throw ConfigError("alpha csv does not cover a full grid");
        return AlphaField::sampled(std::move(xs), std::move(ys), std::move(vals));
    }
    throw ConfigError("alpha: expected constant, expr, or csv");
}

BoundaryData build_boundary(const json& cfg, const Ctx& ctx) {
    if (!cfg.contains("boundary")) throw ConfigError("missing boundary section");
    const json& b = cfg["boundary"];
    check_keys(b, {"csv", "a1", "kbar1", "kbar2", "alpha0", "lambda", "umbilic_tol"}, "boundary");
    if (b.contains("csv")) return boundary_from_csv(ctx.resolve(jstr(b, "csv")));
    if (!b.contains("a1") || !b.contains("kbar1") || !b.contains("kbar2"))
        throw ConfigError("boundary: need a1, kbar1, kbar2 (or csv)");
    return boundary_analytic(jnum(b, "a1", 1.0), jexpr(b, "kbar1"), jexpr(b, "kbar2"),
                             jexpr(b, "alpha0"), jexpr(b, "lambda"));
}

StripConfig build_strip(const json& cfg) {
    StripConfig sc;
    if (!cfg.contains("strip")) return sc;
    const json& s = cfg["strip"];
    check_keys(s, {"r", "substeps", "f00", "p00", "q00", "enforce_threshold"}, "strip");
    sc.r = jnum(s, "r", sc.r);
    sc.substeps = jint(s, "substeps", sc.substeps);
    sc.f00 = jnum(s, "f00", 0);
    sc.p00 = jnum(s, "p00", 0);
    sc.q00 = jnum(s, "q00", 0);
    sc.enforce_threshold = jbool(s, "enforce_threshold", false);
    return sc;
}

MarchConfig build_march(const json& cfg) {
    MarchConfig mc;
    if (!cfg.contains("march")) return mc;
    const json& m = cfg["march"];
    check_keys(m, {"nx", "cfl", "eps", "r", "K_inflate", "K_override", "second_order"}, "march");
    mc.nx = jint(m, "nx", mc.nx);
    mc.cfl = jnum(m, "cfl", mc.cfl);
    mc.eps_target = jnum(m, "eps", mc.eps_target);
    mc.r = jnum(m, "r", mc.r);
    mc.K_inflate = jnum(m, "K_inflate", mc.K_inflate);
    mc.K_override = jnum(m, "K_override", mc.K_override);
    mc.second_order = jbool(m, "second_order", false);
    return mc;
}

PCConfig build_pc(const json& cfg) {
    PCConfig pc;
    if (!cfg.contains("pc")) return pc;
    const json& p = cfg["pc"];
    check_keys(p,
               {"alpha", "eps", "a_inner", "curve_steps_per_unit", "grid_n", "fp_tol",
                "fp_max_iter", "gamma1_curvature", "u_half", "out_nx", "out_ny"},
               "pc");
    pc.alpha = jnum(p, "alpha", pc.alpha);
    pc.eps = jnum(p, "eps", pc.eps);
    pc.a_inner = jnum(p, "a_inner", 0);
    pc.curve_steps_per_unit = jint(p, "curve_steps_per_unit", pc.curve_steps_per_unit);
    pc.grid_n = jint(p, "grid_n", pc.grid_n);
    pc.fp_tol = jnum(p, "fp_tol", pc.fp_tol);
    pc.fp_max_iter = jint(p, "fp_max_iter", pc.fp_max_iter);
    return pc;
}

json threshold_json(const ThresholdInfo& t) {
    return json{{"delta_r", t.delta_r},
                {"data_sup", t.data_sup},
                {"C", t.C},
                {"Lbar", t.Lbar},
                {"ok", t.ok()}};
}

json thresholds_json(const ThresholdReport& t) {
    json arr = json::array();
    for (const auto& it : t.items)
        arr.push_back(
            {{"name", it.name}, {"measured", it.measured}, {"limit", it.limit}, {"ok", it.ok}});
    return arr;
}

void write_summary(Ctx& ctx, json& s) {
    s["warnings"] = ctx.warnings;
    s["outputs"] = ctx.outputs;
    std::ostringstream hex;
    hex << std::hex << ctx.config_hash;
    s["config_hash"] = hex.str();
    if (ctx.writing) {
        std::ofstream out(ctx.out / "summary.json");
        if (!out) throw IoError("cannot write summary.json");
        out << s.dump(2) << "\n";
        std::ofstream echo(ctx.out / "config_used.json");
        echo << ctx.cfg.dump(2) << "\n";
    }
    ctx.log << s.dump(2) << "\n";
}

struct MarchRun {
    MetricField metric;
    AlphaField alpha;
    BoundaryData bd;
    StripSolution strip;
    MarchConfig mc;
    MarchResult result;
};

MarchRun do_march(const json& cfg, Ctx& ctx) {
    MarchRun r{build_metric(cfg), build_alpha(cfg, ctx), build_boundary(cfg, ctx), {}, {}, {}};
    if (r.bd.has_lambda() && r.metric.kind != MetricKind::euclidean) {
        double tol = jnum(cfg.contains("boundary") ? cfg["boundary"] : json::object(),
                          "umbilic_tol", 1e-6);
        auto lam = r.bd.lambda;
        UmbilicalReport rep =
            umbilical_identities(r.metric, [lam](double x, double) { return lam(x); });
        if (rep.gamma_residual > tol)
            ctx.warn("base surface umbilic residual " + format_g17(rep.gamma_residual) +
                     " exceeds " + format_g17(tol));
    }
    StripConfig sc = build_strip(cfg);
    r.strip = solve_initial_strip(r.bd, r.metric, r.alpha, sc);
    if (!r.strip.threshold.ok())
        ctx.warn("data sup " + format_g17(r.strip.threshold.data_sup) +
                 " exceeds the smallness estimate " + format_g17(r.strip.threshold.delta_r));
    r.mc = build_march(cfg);
    r.result = march_cauchy(r.metric, r.alpha, initial_row(r.strip, r.bd, r.mc.nx), r.mc);
    return r;
}

json march_json(const MarchRun& r) {
    const StateGrid& g = r.result.grid;
    return json{{"nx", r.mc.nx},
                {"dx", g.dx},
                {"dy", g.dy},
                {"K", g.K},
                {"levels", g.levels.size()},
                {"eps_target", r.mc.eps_target},
                {"eps_reached", r.result.eps_reached},
                {"stop", to_string(r.result.stop)},
                {"message", r.result.message}};
}

int finish(Ctx& ctx, json& s, int code) {
    write_summary(ctx, s);
    if (code == exit_ok && !ctx.warnings.empty()) code = exit_warnings;
    return code;
}

int mode_march(Ctx& ctx) {
    MarchRun r = do_march(ctx.cfg, ctx);
    json s;
    s["mode"] = "march";
    s["metric"] = r.metric.id;
    s["strip_threshold"] = threshold_json(r.strip.threshold);
    s["march"] = march_json(r);
    int code = exit_ok;
    if (r.result.stop == StopReason::closed)
        ctx.warn("march closed at y = " + format_g17(r.result.eps_reached) +
                 " before the target height");
    else if (r.result.stop != StopReason::completed)
        code = exit_solver_failure;
    if (ctx.writing) {
        write_state_csv((ctx.out / "state.csv").string(), r.result.grid);
        ctx.outputs.push_back("state.csv");
        write_obj_from_grid((ctx.out / "surface.obj").string(), r.result.grid);
        ctx.outputs.push_back("surface.obj");
    }
    return finish(ctx, s, code);
}

int mode_pc(Ctx& ctx, bool fixed_point) {
    BoundaryData bd = build_boundary(ctx.cfg, ctx);
    PCConfig pc = build_pc(ctx.cfg);
    PCSolution sol;
    if (fixed_point) {
        sol = pc_fixed_point(bd, pc);
    } else {
        const json& p = ctx.cfg.contains("pc") ? ctx.cfg["pc"] : json::object();
        std::string kexpr = jexpr(p, "gamma1_curvature");
        if (kexpr.empty())
            throw ConfigError("pc mode needs pc.gamma1_curvature (or use pc-fixed-point)");
        double s_ = std::sqrt(pc.alpha * pc.alpha + 1.0);
        double u_half = jnum(p, "u_half", pc.alpha * bd.a1 / s_ + 0.35 * bd.a1);
        Expr e = Expr::parse(kexpr);
        PlanarCurveGraph gamma1 = curve_from_curvature(
            [&e](double u) { return e(u, 0.0); }, -u_half, u_half, 0, 0,
            pc.curve_steps_per_unit);
        sol = reconstruct_given_gamma1(bd, pc, gamma1);
    }
    for (const auto& it : sol.thresholds.items)
        if (!it.ok)
            ctx.warn("margin '" + it.name + "': " + format_g17(it.measured) + " > " +
                     format_g17(it.limit));

    // data match along the line
    double a_chk = pc.a_inner > 0 ? pc.a_inner : 0.8 * bd.a1;
    double match = 0;
    for (int i = 0; i < 201; ++i) {
        double x = -a_chk + 2.0 * a_chk * i / 200;
        match = std::max(match, std::abs(sol.at(x, 0).k1 - bd.kbar1(x)));
    }

    json s;
    s["mode"] = fixed_point ? "pc-fixed-point" : "pc";
    s["thresholds"] = thresholds_json(sol.thresholds);
    s["fp_iterations"] = sol.fp_iterations;
    s["fp_residual"] = sol.fp_residual;
    s["k1_line_match_sup"] = match;

    if (ctx.writing) {
        const json& p = ctx.cfg.contains("pc") ? ctx.cfg["pc"] : json::object();
        int out_nx = jint(p, "out_nx", 129), out_ny = jint(p, "out_ny", 33);
        std::vector<double> xs(static_cast<size_t>(out_nx)), ys(static_cast<size_t>(out_ny));
        for (int i = 0; i < out_nx; ++i) xs[size_t(i)] = -bd.a1 + 2.0 * bd.a1 * i / (out_nx - 1);
        for (int j = 0; j < out_ny; ++j) ys[size_t(j)] = pc.eps * j / (out_ny - 1);
        GraphSamples gs = graph_from_pc(sol, xs, ys);
        write_obj_grid((ctx.out / "surface.obj").string(), gs.xs, gs.ys, gs.f);
        ctx.outputs.push_back("surface.obj");
        std::vector<std::vector<double>> rows;
        for (int j = 0; j < out_ny; ++j)
            for (int i = 0; i < out_nx; ++i) {
                if (!gs.valid(size_t(i), size_t(j))) continue;
                auto sp = sol.at(xs[size_t(i)], ys[size_t(j)]);
                rows.push_back({xs[size_t(i)], ys[size_t(j)], sp.f, sp.p, sp.q, sp.k1, sp.k2});
            }
        write_csv((ctx.out / "state.csv").string(), {"x", "y", "f", "p", "q", "k1", "k2"}, rows);
        ctx.outputs.push_back("state.csv");
    }
    return finish(ctx, s, exit_ok);
}

int mode_verify(Ctx& ctx) {
    MarchRun r = do_march(ctx.cfg, ctx);
    const json v = ctx.cfg.contains("verify") ? ctx.cfg["verify"] : json::object();
    check_keys(v, {"tol_compat", "tol_shape", "tol_direction", "umbilic_tol", "samples"},
               "verify");
    double tol_compat = jnum(v, "tol_compat", 1e-2);
    double tol_shape = jnum(v, "tol_shape", 1e-2);
    double tol_dir = jnum(v, "tol_direction", 1e-2);

    json checks = json::array();
    bool all_ok = true;
    auto add = [&](const std::string& name, double value, double tol, bool skipped = false) {
        bool pass = skipped || value <= tol;
        checks.push_back({{"name", name},
                          {"value", value},
                          {"tol", tol},
                          {"status", skipped ? "skipped" : (pass ? "pass" : "fail")}});
        if (!pass) all_ok = false;
    };

    if (r.metric.kind != MetricKind::euclidean && r.bd.has_lambda()) {
        auto lam = r.bd.lambda;
        UmbilicalReport rep = umbilical_identities(
            r.metric, [lam](double x, double) { return lam(x); }, jint(v, "samples", 33));
        add("umbilical", rep.gamma_residual, jnum(v, "umbilic_tol", 1e-6));
    } else {
        add("umbilical", 0, 0, true);
    }

    CompatReport cr = compatibility_residual(r.result.grid, r.metric, r.alpha);
    add("compatibility", std::max(cr.sup1, cr.sup2), tol_compat);

    GraphSamples gs = graph_from_march(r.result.grid);
    double shape_err = 0;
    int shape_n = 0;
    const StateGrid& g = r.result.grid;
    for (size_t l = 1; l + 1 < g.levels.size(); ++l) {
        const LevelData& lv = g.levels[l];
        for (size_t j = 1; j + 1 < lv.size(); ++j) {
            size_t gi = lv.i0 + j;
            double a = r.alpha(g.x_at(lv, j), lv.y);
            ShapeSample ss = fd_shape_operator(gs, r.metric, gi, l, std::array<double, 2>{a, 1});
            if (!ss.valid) continue;
            shape_err = std::max(shape_err, std::max(std::abs(ss.pd.k1 - lv.k1[j]),
                                                     std::abs(ss.pd.k2 - lv.k2[j])));
            ++shape_n;
        }
    }
    add("shape-consistency", shape_err, tol_shape, shape_n == 0);

    DirectionReport dr = direction_projection_check(gs, r.metric, r.alpha);
    add("direction-projection", dr.max_angle, tol_dir, dr.checked == 0);

    json s;
    s["mode"] = "verify";
    s["metric"] = r.metric.id;
    s["march"] = march_json(r);
    s["checks"] = checks;
    if (!all_ok) ctx.warn("one or more verification checks failed");
    if (ctx.writing) {
        std::ofstream out(ctx.out / "verify.json");
        out << checks.dump(2) << "\n";
        ctx.outputs.push_back("verify.json");
    }
    int code = exit_ok;
    if (r.result.stop != StopReason::completed && r.result.stop != StopReason::closed)
        code = exit_solver_failure;
    return finish(ctx, s, code);
}

int mode_converge(Ctx& ctx) {
    const json cc = ctx.cfg.contains("converge") ? ctx.cfg["converge"] : json::object();
    check_keys(cc, {"nx", "eps"}, "converge");
    std::vector<int> nxs{33, 65, 129, 257};
    if (cc.contains("nx")) {
        nxs.clear();
        for (const auto& v : cc["nx"]) nxs.push_back(v.get<int>());
    }
    if (nxs.size() < 3) throw ConfigError("converge.nx needs three or more entries");
    for (size_t i = 1; i < nxs.size(); ++i)
        if (nxs[i] != 2 * nxs[i - 1] - 1)
            throw ConfigError("converge.nx entries must refine as 2n-1 so the grids nest");

    MetricField metric = build_metric(ctx.cfg);
    AlphaField alpha = build_alpha(ctx.cfg, ctx);
    BoundaryData bd = build_boundary(ctx.cfg, ctx);
    StripSolution strip = solve_initial_strip(bd, metric, alpha, build_strip(ctx.cfg));
    if (!strip.threshold.ok())
        ctx.warn("data sup exceeds the smallness estimate; continuing");
    MarchConfig base = build_march(ctx.cfg);
    if (cc.contains("eps")) base.eps_target = jnum(cc, "eps", base.eps_target);

    // all runs share one trapezoid slope so the level grids nest exactly
    if (base.K_override <= 0) {
        InitialRow probe = initial_row(strip, bd, nxs.back());
        MarchConfig tmp = base;
        tmp.nx = nxs.back();
        MarchResult pr = march_cauchy(metric, alpha, probe, tmp);
        base.K_override = pr.grid.K;
    }

    std::vector<MarchResult> results(nxs.size());
    std::vector<std::string> errors(nxs.size());
    {
        std::vector<std::thread> pool;
        std::atomic<size_t> cursor{0};
        int nworkers = ctx.opt.workers;
        if (nworkers <= 0) {
            if (const char* env = std::getenv("CURVERECON_WORKERS")) nworkers = std::atoi(env);
        }
        if (nworkers <= 0) nworkers = int(std::thread::hardware_concurrency());
        nworkers = std::clamp(nworkers, 1, int(nxs.size()));
        auto work = [&]() {
            for (;;) {
                size_t i = cursor.fetch_add(1);
                if (i >= nxs.size()) return;
                try {
                    MarchConfig mc = base;
                    mc.nx = nxs[i];
                    results[i] = march_cauchy(metric, alpha, initial_row(strip, bd, nxs[i]), mc);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        for (int t = 0; t < nworkers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < nxs.size(); ++i)
        if (!errors[i].empty())
            throw SolverError("march at nx " + std::to_string(nxs[i]) + " failed: " + errors[i]);

    const StateGrid& fine = results.back().grid;
    std::vector<double> hs, errs;
    for (size_t i = 0; i + 1 < nxs.size(); ++i) {
        const StateGrid& g = results[i].grid;
        size_t ratio = size_t(nxs.back() - 1) / size_t(nxs[i] - 1);
        double err = 0;
        size_t lmax = std::min(g.levels.size(), (fine.levels.size() - 1) / ratio + 1);
        for (size_t l = 0; l < lmax; ++l) {
            const LevelData& lc = g.levels[l];
            const LevelData& lf = fine.levels[l * ratio];
            for (size_t j = 0; j < lc.size(); ++j) {
                size_t gf = (lc.i0 + j) * ratio;       // global fine index
                size_t jf = gf - lf.i0;
                if (jf >= lf.size()) continue;
                err = std::max({err, std::abs(lc.f[j] - lf.f[jf]), std::abs(lc.p[j] - lf.p[jf]),
                                std::abs(lc.q[j] - lf.q[jf]), std::abs(lc.k1[j] - lf.k1[jf]),
                                std::abs(lc.k2[j] - lf.k2[jf])});
            }
        }
        hs.push_back(g.dx);
        errs.push_back(err);
    }
    OrderFit fit = fit_order(hs, errs);
    if (fit.order < 0.7) ctx.warn("measured order " + format_g17(fit.order) + " is below 0.7");

    json s;
    s["mode"] = "converge";
    s["nx"] = nxs;
    s["h"] = hs;
    s["err"] = errs;
    s["order"] = fit.order;
    if (ctx.writing) {
        std::ofstream out(ctx.out / "converge.json");
        out << s.dump(2) << "\n";
        ctx.outputs.push_back("converge.json");
    }
    return finish(ctx, s, exit_ok);
}

json preset_config(const std::string& name) {
    json c;
    if (name == "plane") {
        c["alpha"] = 0.4;
        c["boundary"] = {{"a1", 1.0}, {"kbar1", 0.0}, {"kbar2", 0.0}};
        c["march"] = {{"nx", 129}, {"eps", 0.2}};
    } else if (name == "cylinder") {
        c["alpha"] = 0.7;
        c["boundary"] = {{"a1", 1.0}, {"kbar1", 0.2}, {"kbar2", 0.0}};
        c["march"] = {{"nx", 257}, {"eps", 0.15}};
        c["pc"] = {{"alpha", 0.7}, {"eps", 0.15}};
    } else if (name == "sphere") {
        c["alpha"] = 0.6;
        c["boundary"] = {{"a1", 0.8}, {"kbar1", 0.25}, {"kbar2", 0.25}};
        c["march"] = {{"nx", 257}, {"eps", 0.12}};
    } else if (name == "spherical") {
        c["metric"] = "sheared-spherical:0.5";
        c["alpha"] = 0.0;
        c["boundary"] = {{"a1", 0.3},
                         {"kbar1", "-" + format_g17(std::tan(0.05)) + "/(1+x)"},
                         {"kbar2", 0.0},
                         {"lambda", 0.0}};
        c["strip"] = {{"f00", -0.05}};
        c["march"] = {{"nx", 129}, {"eps", 0.05}};
    } else {
        throw ConfigError("unknown demo preset '" + name +
                          "' (plane, cylinder, sphere, spherical)");
    }
    return c;
}

int mode_demo(Ctx& ctx) {
    std::string preset = ctx.opt.preset;
    if (preset.empty() && ctx.cfg.contains("demo"))
        preset = jstr(ctx.cfg["demo"], "preset", "");
    if (preset.empty()) preset = "cylinder";
    ctx.cfg = preset_config(preset);
    ctx.config_hash = fnv1a64(ctx.cfg.dump());

    MarchRun r = do_march(ctx.cfg, ctx);
    json s;
    s["mode"] = "demo";
    s["preset"] = preset;
    s["metric"] = r.metric.id;
    s["strip_threshold"] = threshold_json(r.strip.threshold);
    s["march"] = march_json(r);
    int code = exit_ok;
    if (r.result.stop == StopReason::closed)
        ctx.warn("march closed before the target height");
    else if (r.result.stop != StopReason::completed)
        code = exit_solver_failure;

    if (preset == "cylinder" && code == exit_ok) {
        // cross-check the two pipelines on the marched nodes
        PCConfig pc = build_pc(ctx.cfg);
        PCSolution sol = pc_fixed_point(r.bd, pc);
        double sup = 0;
        int n = 0;
        const StateGrid& g = r.result.grid;
        for (size_t l = 0; l < g.levels.size(); l += 4) {
            const LevelData& lv = g.levels[l];
            for (size_t j = 0; j < lv.size(); j += 4) {
                try {
                    sup = std::max(sup,
                                   std::abs(sol.height(g.x_at(lv, j), lv.y) - lv.f[j]));
                    ++n;
                } catch (const DomainError&) {
                }
            }
        }
        s["cross_check"] = {{"sup_diff_f", sup}, {"nodes", n}};
    }
    {
        GraphSamples gs = graph_from_march(r.result.grid);
        DirectionReport dr = direction_projection_check(gs, r.metric, r.alpha);
        s["direction"] = {
            {"max_angle", dr.max_angle}, {"checked", dr.checked}, {"skipped", dr.skipped}};
    }
    if (ctx.writing) {
        write_state_csv((ctx.out / "state.csv").string(), r.result.grid);
        ctx.outputs.push_back("state.csv");
        write_obj_from_grid((ctx.out / "surface.obj").string(), r.result.grid);
        ctx.outputs.push_back("surface.obj");
    }
    return finish(ctx, s, code);
}

}  // namespace

int run(const RunOptions& opt, std::ostream& log) {
    try {
        Ctx ctx(log);
        ctx.opt = opt;
        const std::vector<std::string> modes{"march",  "pc",       "pc-fixed-point",
                                             "verify", "converge", "demo"};
        if (std::find(modes.begin(), modes.end(), opt.mode) == modes.end())
            throw ConfigError("unknown mode '" + opt.mode + "'");

        if (!opt.config_path.empty()) {
            std::ifstream in(opt.config_path);
            if (!in) throw IoError("cannot open config " + opt.config_path);
            std::stringstream raw;
            raw << in.rdbuf();
            ctx.config_hash = fnv1a64(raw.str());
            try {
                ctx.cfg = json::parse(raw.str());
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("config parse: ") + e.what());
            }
            if (!ctx.cfg.is_object()) throw ConfigError("config root must be an object");
            ctx.cfg_dir = fs::path(opt.config_path).parent_path();
        } else if (opt.mode != "demo") {
            throw ConfigError("--config is required for mode '" + opt.mode + "'");
        } else {
            ctx.cfg = json::object();
        }

        if (!opt.out_dir.empty()) {
            ctx.out = opt.out_dir;
            std::error_code ec;
            fs::create_directories(ctx.out, ec);
            if (ec) throw IoError("cannot create " + opt.out_dir + ": " + ec.message());
            if (fs::exists(ctx.out / "summary.json") && !opt.force)
                throw IoError(opt.out_dir + " already holds results (use --force to overwrite)");
            ctx.writing = true;
        }

        if (opt.mode == "march") return mode_march(ctx);
        if (opt.mode == "pc") return mode_pc(ctx, false);
        if (opt.mode == "pc-fixed-point") return mode_pc(ctx, true);
        if (opt.mode == "verify") return mode_verify(ctx);
        if (opt.mode == "converge") return mode_converge(ctx);
        return mode_demo(ctx);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_solver_failure;
    }
}

}  // namespace curverecon
