#include <benchmark/benchmark.h>

#include "curverecon/alpha_field.hpp"
#include "curverecon/boundary.hpp"
#include "curverecon/hcoeffs.hpp"
#include "curverecon/march.hpp"
#include "curverecon/metric.hpp"
#include "curverecon/pc.hpp"
#include "curverecon/strip.hpp"

using namespace curverecon;

static void BM_HCoefficientsEuclidean(benchmark::State& state) {
    double acc = 0;
    for (auto _ : state) {
        HCoefficients h = h_coefficients_euclidean(0.1, -0.05, 0.7, 0.2, 0.15);
        acc += h.H11;
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_HCoefficientsEuclidean);

static void BM_SourceTermsGeneral(benchmark::State& state) {
    MetricField m = spherical_metric();
    AlphaField a = AlphaField::constant(0.5);
    for (auto _ : state) {
        SourceTerms st = source_terms_general(m, a, 0.1, 0.05, 0.02, 0.1, -0.05, 0.2, 0.15);
        benchmark::DoNotOptimize(st.psi1);
    }
}
BENCHMARK(BM_SourceTermsGeneral);

static void BM_MarchCylinder(benchmark::State& state) {
    MetricField m = euclidean_metric();
    AlphaField a = AlphaField::constant(0.7);
    BoundaryData bd = boundary_constant(1.0, 0.2, 0.0);
    StripConfig sc;
    sc.substeps = 512;
    StripSolution strip = solve_initial_strip(bd, m, a, sc);
    MarchConfig mc;
    mc.nx = int(state.range(0));
    mc.eps_target = 0.1;
    InitialRow row = initial_row(strip, bd, mc.nx);
    for (auto _ : state) {
        MarchResult r = march_cauchy(m, a, row, mc);
        benchmark::DoNotOptimize(r.grid.levels.size());
    }
}
BENCHMARK(BM_MarchCylinder)->Arg(65)->Arg(129)->Arg(257);

static void BM_PCFixedPoint(benchmark::State& state) {
    BoundaryData bd = boundary_analytic(1.0, "0.2*cos(x)", "0.1*exp(-x^2)", "", "");
    PCConfig pc;
    pc.alpha = 0.8;
    pc.eps = 0.1;
    pc.grid_n = int(state.range(0));
    for (auto _ : state) {
        PCSolution sol = pc_fixed_point(bd, pc);
        benchmark::DoNotOptimize(sol.fp_residual);
    }
}
BENCHMARK(BM_PCFixedPoint)->Arg(513)->Arg(2049);

BENCHMARK_MAIN();
