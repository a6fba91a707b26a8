// Serial reference vs OpenMP kernels. Thread count follows HRVKIT_THREADS.
#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hrvkit/kernels.hpp"

namespace k = hrvkit::kernels;

namespace {

std::vector<double> pareto(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(count);
    for (auto& v : out) v = 1.0 / (1.0 - u(gen));
    return out;
}

std::vector<k::KernelAtom> atoms(std::size_t count, bool planar) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<k::KernelAtom> out;
    out.reserve(count);
    while (out.size() < count) {
        const double x = u(gen), y = planar ? u(gen) : 0.0;
        if (planar && x + y > 1.0) continue;
        out.push_back({1.0 / static_cast<double>(count), x, y});
    }
    return out;
}

template <class F>
void anti_ranks(benchmark::State& state, F f) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 3;
    const auto data = pareto(n * d, 1);
    for (auto _ : state) benchmark::DoNotOptimize(f(data, n, d));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * d));
}

template <class F>
void hill(benchmark::State& state, F f) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto data = pareto(n, 2);
    std::sort(data.begin(), data.end(), std::greater<>());
    for (auto _ : state) benchmark::DoNotOptimize(f(data, 1, n / 2));
}

template <class F>
void kde_interval(benchmark::State& state, F f) {
    const auto a = atoms(static_cast<std::size_t>(state.range(0)), false);
    std::vector<double> grid(401);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 400.0;
    for (auto _ : state) benchmark::DoNotOptimize(f(a, 0.05, grid));
}

template <class F>
void kde_simplex(benchmark::State& state, F f) {
    const auto a = atoms(static_cast<std::size_t>(state.range(0)), true);
    std::vector<double> gx, gy;
    const int m = 60;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; i + j <= m; ++j) {
            gx.push_back(static_cast<double>(i) / m);
            gy.push_back(static_cast<double>(j) / m);
        }
    for (auto _ : state) benchmark::DoNotOptimize(f(a, 0.05, gx, gy));
}

void BM_anti_ranks_serial(benchmark::State& s) { anti_ranks(s, k::serial::anti_ranks); }
void BM_anti_ranks_omp(benchmark::State& s) { anti_ranks(s, k::omp::anti_ranks); }
void BM_hill_serial(benchmark::State& s) { hill(s, k::serial::hill_series); }
void BM_hill_omp(benchmark::State& s) { hill(s, k::omp::hill_series); }
void BM_kde_interval_serial(benchmark::State& s) { kde_interval(s, k::serial::kde_interval); }
void BM_kde_interval_omp(benchmark::State& s) { kde_interval(s, k::omp::kde_interval); }
void BM_kde_simplex_serial(benchmark::State& s) { kde_simplex(s, k::serial::kde_simplex); }
void BM_kde_simplex_omp(benchmark::State& s) { kde_simplex(s, k::omp::kde_simplex); }

} // namespace

BENCHMARK(BM_anti_ranks_serial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_anti_ranks_omp)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_hill_serial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hill_omp)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_kde_interval_serial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kde_interval_omp)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_kde_simplex_serial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kde_simplex_omp)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
