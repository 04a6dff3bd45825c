#include "wfs/fourier.hpp"
#include "wfs/lattice.hpp"
#include "wfs/localize.hpp"
#include "wfs/wavefront.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

using namespace wfs;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

void BM_LocalizedSpectrumBatch(benchmark::State& state) {
    const Window window(WindowSpec{}, 2);
    const LocalizedSpectrum ls(TestDistribution::gaussian(v2(0.1, -0.05), 0.3), window, v2(0.0, 0.0));
    const auto pts = lattice::enumerate_points(lattice::hexagonal(), 64.0);
    std::vector<Vec> xis;
    for (const auto& p : pts) xis.push_back(p.mu);
    for (auto _ : state) benchmark::DoNotOptimize(ls.log_abs(xis, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(xis.size()));
}

void BM_CoefficientsByRegion(benchmark::State& state) {
    const auto lat = lattice::hexagonal();
    const auto translates = lattice::enumerate_points(lat, 6.0);
    auto g = [&translates](const Vec& x) {
        double s = 0.0;
        for (const auto& t : translates) s += std::exp(-kPi * (x + t.mu).squaredNorm());
        return cplx(s, 0.0);
    };
    fourier::RegionQuadrature q;
    q.order = 48;
    for (auto _ : state) benchmark::DoNotOptimize(fourier::coefficients_by_region(g, lat, 4.0, q, exec_of(state)));
}

void BM_Wavefront(benchmark::State& state) {
    const Window window(WindowSpec{}, 2);
    const auto f = TestDistribution::plane_jump(v2(1.0, 0.0), 0.0);
    const std::vector<Vec> seeds{v2(0.0, 0.1), v2(1.0, 0.2)};
    microlocal::AnalyzerConfig cfg;
    cfg.r_max = 64.0;
    const lattice::Lattice lat(Mat::Identity(2, 2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(microlocal::estimate_wavefront(f, seeds, 8, cfg, lat, window, exec_of(state)));
    }
}

}  // namespace

BENCHMARK(BM_LocalizedSpectrumBatch)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoefficientsByRegion)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wavefront)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
