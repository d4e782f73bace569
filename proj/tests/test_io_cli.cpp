#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "curverecon/boundary.hpp"
#include "curverecon/errors.hpp"
#include "curverecon/io.hpp"
#include "curverecon/march.hpp"
#include "curverecon/metric.hpp"
#include "curverecon/run.hpp"
#include "curverecon/strip.hpp"

using namespace curverecon;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("curverecon_io_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

bool same_bits(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return std::memcmp(&a, &b, sizeof a) == 0;
}

void put(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

int run_quiet(const RunOptions& opt) {
    std::ostringstream sink;
    return curverecon::run(opt, sink);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    return json::parse(in);
}

MarchResult small_march() {
    MetricField m = euclidean_metric();
    AlphaField af = AlphaField::constant(0.7);
    BoundaryData bd = boundary_constant(1.0, 0.2, 0.0);
    StripSolution strip = solve_initial_strip(bd, m, af);
    MarchConfig cfg;
    cfg.K_override = 2.0;
    cfg.eps_target = 0.05;
    return march_cauchy(m, af, initial_row(strip, bd, 65), cfg);
}

}  // namespace

TEST_CASE("numeric formatting round-trips every bit") {
    for (double v : {0.0, -0.0, 1.0 / 3.0, 0.1, 3.141592653589793, 1e-300, 5e-324,
                     1.7976931348623157e308, -2.5e-7, 123456789.123456789}) {
        std::string s = format_g17(v);
        CHECK(same_bits(std::strtod(s.c_str(), nullptr), v));
    }
    CHECK(std::isnan(std::strtod(format_g17(std::nan("")).c_str(), nullptr)));
}

TEST_CASE("hash matches the published reference vectors") {
    CHECK(fnv1a64(std::string{}) == 0xcbf29ce484222325ull);
    CHECK(fnv1a64(std::string{"a"}) == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64(std::string{"foobar"}) == 0x85944171f73967e8ull);
}

TEST_CASE("csv round trip preserves values and holes") {
    TempDir td;
    std::vector<std::vector<double>> rows{{1.0 / 3.0, std::nan(""), -0.0},
                                          {1e-300, 2.0, -7.25},
                                          {5e-324, -1e308, 0.1}};
    write_csv(td.file("t.csv"), {"a", "b", "c"}, rows);
    CsvTable t = read_csv(td.file("t.csv"));
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 3);
    for (size_t j = 0; j < rows.size(); ++j)
        for (size_t i = 0; i < 3; ++i) CHECK(same_bits(t.rows[j][i], rows[j][i]));
    CHECK(t.column("b") == 1);
    CHECK(t.column("missing") == -1);
    CHECK(t.has("c"));
    CHECK_FALSE(t.has("z"));
}

TEST_CASE("csv reader skips comments and flags malformed input") {
    TempDir td;
    put(td.file("ok.csv"), "# leading comment\nx, y\n\n1, 2\n# mid comment\n3,nan\n");
    CsvTable t = read_csv(td.file("ok.csv"));
    CHECK(t.rows.size() == 2);
    CHECK(t.rows[0][1] == 2.0);
    CHECK(std::isnan(t.rows[1][1]));

    CHECK_THROWS_AS(read_csv(td.file("absent.csv")), IoError);
    put(td.file("badnum.csv"), "x,y\n1,fish\n");
    CHECK_THROWS_AS(read_csv(td.file("badnum.csv")), IoError);
    put(td.file("ragged.csv"), "x,y\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(td.file("ragged.csv")), IoError);
    put(td.file("empty.csv"), "");
    CHECK_THROWS_AS(read_csv(td.file("empty.csv")), IoError);
    CHECK_THROWS_AS(write_csv((td.path / "no_dir" / "x.csv").string(), {"a"}, {}), IoError);
}

TEST_CASE("state grid survives the csv round trip bit for bit") {
    TempDir td;
    MarchResult res = small_march();
    REQUIRE(res.stop == StopReason::completed);
    write_state_csv(td.file("state.csv"), res.grid);
    StateGrid g = read_state_csv(td.file("state.csv"));

    REQUIRE(g.levels.size() == res.grid.levels.size());
    CHECK(g.dx == res.grid.dx);
    CHECK(g.dy == res.grid.dy);
    REQUIRE(g.x.size() == res.grid.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) CHECK(g.x[i] == res.grid.x[i]);
    for (size_t l = 0; l < g.levels.size(); ++l) {
        const LevelData &a = g.levels[l], &b = res.grid.levels[l];
        CHECK(a.y == b.y);
        CHECK(a.i0 == b.i0);
        REQUIRE(a.size() == b.size());
        for (size_t j = 0; j < a.size(); ++j) {
            CHECK(a.f[j] == b.f[j]);
            CHECK(a.p[j] == b.p[j]);
            CHECK(a.q[j] == b.q[j]);
            CHECK(a.k1[j] == b.k1[j]);
            CHECK(a.k2[j] == b.k2[j]);
        }
    }
}

TEST_CASE("state csv reader rejects broken files") {
    TempDir td;
    put(td.file("cols.csv"), "x,y,f,p,q,k1\n0,0,0,0,0,0\n");
    CHECK_THROWS_AS(read_state_csv(td.file("cols.csv")), IoError);
    put(td.file("order.csv"),
        "x,y,f,p,q,k1,k2\n0,1,0,0,0,0,0\n1,1,0,0,0,0,0\n0,0,0,0,0,0,0\n");
    CHECK_THROWS_AS(read_state_csv(td.file("order.csv")), IoError);
    put(td.file("offgrid.csv"),
        "x,y,f,p,q,k1,k2\n0,0,0,0,0,0,0\n1,0,0,0,0,0,0\n2,0,0,0,0,0,0\n0.5,1,0,0,0,0,0\n");
    CHECK_THROWS_AS(read_state_csv(td.file("offgrid.csv")), IoError);
    put(td.file("none.csv"), "x,y,f,p,q,k1,k2\n");
    CHECK_THROWS_AS(read_state_csv(td.file("none.csv")), IoError);
}

TEST_CASE("obj writer numbers vertices, splits quads, keeps holes open") {
    TempDir td;
    auto parse = [](const std::string& path) {
        std::ifstream in(path);
        std::pair<std::vector<std::string>, std::vector<std::string>> vf;
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("v ", 0) == 0) vf.first.push_back(line);
            if (line.rfind("f ", 0) == 0) vf.second.push_back(line);
        }
        return vf;
    };

    // hole at a corner removes its quad
    write_obj_grid(td.file("hole.obj"), {0, 1, 2}, {0, 1},
                   {0.0, 0.0, std::nan(""), 0.5, 0.5, 0.5});
    auto [hv, hf] = parse(td.file("hole.obj"));
    CHECK(hv.size() == 5);
    CHECK(hf.size() == 2);

    // diagonal choice follows the flatter split
    write_obj_grid(td.file("d1.obj"), {0, 1}, {0, 1}, {0.0, 0.0, 0.0, 5.0});
    auto [v1, f1] = parse(td.file("d1.obj"));
    REQUIRE(f1.size() == 2);
    CHECK(f1[0] == "f 1 2 3");
    CHECK(f1[1] == "f 2 4 3");
    write_obj_grid(td.file("d2.obj"), {0, 1}, {0, 1}, {0.0, 5.0, 0.0, 0.0});
    auto [v2, f2] = parse(td.file("d2.obj"));
    REQUIRE(f2.size() == 2);
    CHECK(f2[0] == "f 1 2 4");
    CHECK(f2[1] == "f 1 4 3");

    CHECK_THROWS_AS(write_obj_grid(td.file("bad.obj"), {0, 1}, {0, 1}, {1.0, 2.0}), IoError);

    MarchResult res = small_march();
    write_obj_from_grid(td.file("march.obj"), res.grid);
    auto [mv, mf] = parse(td.file("march.obj"));
    size_t nodes = 0;
    for (const auto& lv : res.grid.levels) nodes += lv.size();
    CHECK(mv.size() == nodes);
    CHECK(mf.size() > 0);
}

TEST_CASE("run dispatch maps failures to the exit-code contract") {
    TempDir td;
    RunOptions opt;
    opt.mode = "sideways";
    CHECK(run_quiet(opt) == exit_config);

    opt.mode = "march";  // no config supplied
    CHECK(run_quiet(opt) == exit_config);

    opt.config_path = td.file("absent.json");
    CHECK(run_quiet(opt) == exit_io);

    put(td.file("broken.json"), "{ not json");
    opt.config_path = td.file("broken.json");
    CHECK(run_quiet(opt) == exit_config);

    put(td.file("array.json"), "[1, 2]");
    opt.config_path = td.file("array.json");
    CHECK(run_quiet(opt) == exit_config);

    put(td.file("unknown.json"),
        R"({"alpha": {"constant": 0.7, "bogus": 1},
            "boundary": {"a1": 1.0, "kbar1": 0.05, "kbar2": 0.0}})");
    opt.config_path = td.file("unknown.json");
    CHECK(run_quiet(opt) == exit_config);
}

TEST_CASE("march mode writes a full result set") {
    TempDir td;
    put(td.file("m.json"),
        R"({"alpha": {"constant": 0.7},
            "boundary": {"a1": 1.0, "kbar1": 0.001, "kbar2": 0.0},
            "march": {"nx": 65, "eps": 0.05, "K_override": 2.0}})");
    RunOptions opt;
    opt.mode = "march";
    opt.config_path = td.file("m.json");
    opt.out_dir = (td.path / "out").string();
    CHECK(run_quiet(opt) == exit_ok);  // data below the smallness estimate

    json s = load_json((td.path / "out" / "summary.json").string());
    CHECK(s["mode"] == "march");
    CHECK(s["march"]["stop"] == "completed");
    CHECK(s["march"]["nx"] == 65);
    CHECK(s["strip_threshold"]["ok"] == true);
    CHECK(s["warnings"].empty());
    CHECK(s["config_hash"].is_string());
    for (const auto& name : s["outputs"])
        CHECK(fs::exists(td.path / "out" / name.get<std::string>()));
    CHECK(fs::exists(td.path / "out" / "state.csv"));
    CHECK(fs::exists(td.path / "out" / "surface.obj"));
    CHECK(fs::exists(td.path / "out" / "config_used.json"));

    // state file parses back into the marched trapezoid
    StateGrid g = read_state_csv((td.path / "out" / "state.csv").string());
    CHECK(g.levels.size() == s["march"]["levels"].get<size_t>());

    // a second run in the same directory needs --force
    CHECK(run_quiet(opt) == exit_io);
    opt.force = true;
    CHECK(run_quiet(opt) == exit_ok);
}

TEST_CASE("warning conditions surface as exit code 2") {
    TempDir td;
    put(td.file("w.json"),
        R"({"alpha": {"constant": 0.7},
            "boundary": {"a1": 1.0, "kbar1": 0.2, "kbar2": 0.0},
            "march": {"nx": 65, "eps": 0.05, "K_override": 2.0}})");
    RunOptions opt;
    opt.mode = "march";
    opt.config_path = td.file("w.json");
    opt.out_dir = (td.path / "out").string();
    CHECK(run_quiet(opt) == exit_warnings);
    json s = load_json((td.path / "out" / "summary.json").string());
    CHECK_FALSE(s["warnings"].empty());
    CHECK(s["strip_threshold"]["ok"] == false);
    CHECK(s["march"]["stop"] == "completed");
}

TEST_CASE("verify mode reports its checks") {
    TempDir td;
    put(td.file("v.json"),
        R"({"alpha": {"constant": 0.7},
            "boundary": {"a1": 1.0, "kbar1": 0.001, "kbar2": 0.0},
            "march": {"nx": 65, "eps": 0.05, "K_override": 2.0}})");
    RunOptions opt;
    opt.mode = "verify";
    opt.config_path = td.file("v.json");
    opt.out_dir = (td.path / "out").string();
    CHECK(run_quiet(opt) == exit_ok);
    json checks = load_json((td.path / "out" / "verify.json").string());
    REQUIRE(checks.size() == 4);
    for (const auto& c : checks) {
        CHECK((c["status"] == "pass" || c["status"] == "skipped"));
    }
    CHECK(checks[0]["name"] == "umbilical");
    CHECK(checks[1]["name"] == "compatibility");
    CHECK(checks[2]["name"] == "shape-consistency");
    CHECK(checks[3]["name"] == "direction-projection");
}

TEST_CASE("pc fixed-point mode converges and reports the data-line match") {
    TempDir td;
    put(td.file("p.json"),
        R"({"boundary": {"a1": 1.0, "kbar1": 0.05, "kbar2": 0.0},
            "pc": {"alpha": 0.7}})");
    RunOptions opt;
    opt.mode = "pc-fixed-point";
    opt.config_path = td.file("p.json");
    opt.out_dir = (td.path / "out").string();
    CHECK(run_quiet(opt) == exit_ok);
    json s = load_json((td.path / "out" / "summary.json").string());
    CHECK(s["mode"] == "pc-fixed-point");
    CHECK(s["fp_iterations"].get<int>() > 0);
    CHECK(s["k1_line_match_sup"].get<double>() < 1e-8);
    CHECK(fs::exists(td.path / "out" / "surface.obj"));
}

TEST_CASE("converge mode fits the decay order across nested grids") {
    TempDir td;
    put(td.file("c.json"),
        R"({"alpha": {"constant": 0.7},
            "boundary": {"a1": 1.0, "kbar1": 0.2, "kbar2": 0.0},
            "march": {"K_override": 2.0},
            "converge": {"nx": [33, 65, 129], "eps": 0.1}})");
    RunOptions opt;
    opt.mode = "converge";
    opt.config_path = td.file("c.json");
    opt.out_dir = (td.path / "out").string();
    int code = run_quiet(opt);
    CHECK(code == exit_warnings);  // smallness warning only
    json s = load_json((td.path / "out" / "summary.json").string());
    CHECK(s["mode"] == "converge");
    REQUIRE(s["err"].size() == 2);  // finest grid is the reference
    CHECK(s["err"][0].get<double>() > s["err"][1].get<double>());
    CHECK(s["order"].get<double>() > 1.5);  // constant data: integrator order

    put(td.file("badnest.json"),
        R"({"alpha": {"constant": 0.7},
            "boundary": {"a1": 1.0, "kbar1": 0.2, "kbar2": 0.0},
            "converge": {"nx": [33, 60]}})");
    RunOptions bad = opt;
    bad.config_path = td.file("badnest.json");
    bad.out_dir.clear();
    CHECK(run_quiet(bad) == exit_config);
}

TEST_CASE("installed binary honors the same contract") {
    TempDir td;
    auto shell = [](const std::string& cmd) {
        int rc = std::system(cmd.c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    std::string cli = CURVERECON_CLI_PATH;
    CHECK(shell(cli + " demo --preset plane --out " + td.file("plane") + " > /dev/null 2>&1") ==
          exit_ok);
    CHECK(fs::exists(td.path / "plane" / "summary.json"));
    CHECK(shell(cli + " demo --preset cylinder --out " + td.file("cyl") + " > /dev/null 2>&1") ==
          exit_warnings);
    json s = load_json((td.path / "cyl" / "summary.json").string());
    CHECK(s["preset"] == "cylinder");
    CHECK(s["cross_check"]["sup_diff_f"].get<double>() < 1e-6);
    CHECK(s["direction"]["max_angle"].get<double>() < 1e-5);
    CHECK(shell(cli + " sideways > /dev/null 2>&1") == exit_config);
    CHECK(shell(cli + " --help > /dev/null 2>&1") == 0);
}
