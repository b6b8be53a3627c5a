// Serial reference vs OpenMP kernels on 2D grids, plus one full Picard
// application. Run with --benchmark_counters_tabular=true for a compact table.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <random>

#include "mfg/kernels.hpp"
#include "mfg/solver.hpp"

using namespace mfg;

namespace {

Slice random_slice(std::size_t n, unsigned seed, double lo = 0.1, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Slice s(n);
  for (auto& v : s) v = d(rng);
  return s;
}

Grid grid2d(const benchmark::State& st) { return Grid::make(2, 8.0, static_cast<int>(st.range(0)), 10, 1.0); }

void set_counters(benchmark::State& st, std::size_t nodes) {
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * nodes));
  st.counters["threads"] = omp_get_max_threads();
}

template <bool Parallel>
void BM_Laplacian(benchmark::State& st) {
  const Grid g = grid2d(st);
  const Slice in = random_slice(g.nodes(), 1);
  Slice out(g.nodes());
  for (auto _ : st) {
    if constexpr (Parallel) kernels::omp::laplacian(g, in, out);
    else kernels::serial::laplacian(g, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(st, g.nodes());
}

template <bool Parallel>
void BM_DriftDivergence(benchmark::State& st) {
  const Grid g = grid2d(st);
  FaceField b = FaceField::zeros(g);
  for (int a = 0; a < 2; ++a) b.comp[a] = random_slice(b.comp[a].size(), 2 + a, -3.0, 3.0);
  const Slice mu = random_slice(g.nodes(), 4);
  Slice out(g.nodes());
  for (auto _ : st) {
    if constexpr (Parallel) kernels::omp::drift_divergence(g, b, mu, out);
    else kernels::serial::drift_divergence(g, b, mu, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(st, g.nodes());
}

template <bool Parallel>
void BM_WeightedSum(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0)) * st.range(0);
  const Slice v = random_slice(n, 5), w = random_slice(n, 6);
  for (auto _ : st) {
    double s = Parallel ? kernels::omp::weighted_sum(v, w) : kernels::serial::weighted_sum(v, w);
    benchmark::DoNotOptimize(s);
  }
  set_counters(st, n);
}

template <bool Parallel>
void BM_ThomasBatch(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const std::size_t total = static_cast<std::size_t>(n) * n;
  const Slice sub(total, -1.0), sup(total, -1.0), diag(total, 4.0);
  const Slice rhs0 = random_slice(total, 7);
  Slice rhs(total);
  for (auto _ : st) {
    st.PauseTiming();
    rhs = rhs0;
    st.ResumeTiming();
    if constexpr (Parallel) kernels::omp::thomas_batch(n, n, sub, diag, sup, rhs);
    else kernels::serial::thomas_batch(n, n, sub, diag, sup, rhs);
    benchmark::DoNotOptimize(rhs.data());
  }
  set_counters(st, total);
}

template <kernels::Backend B>
void BM_PicardStep(benchmark::State& st) {
  ProblemSpec p;
  p.dim = 2;
  p.coupling = {2.0, 2.0};
  const Grid g = Grid::make(2, 8.0, static_cast<int>(st.range(0)), 20, 1.0);
  const PicardMap map(p, g, ParabolicOptions{TimeScheme::ImplicitEuler, B});
  const auto m = map.heat_flow();
  for (auto _ : st) {
    auto r = map(m);
    benchmark::DoNotOptimize(r.mu.values().data());
  }
  set_counters(st, g.nodes() * g.time_nodes());
}

}  // namespace

BENCHMARK(BM_Laplacian<false>)->Name("laplacian/serial")->Arg(257)->Arg(1025);
BENCHMARK(BM_Laplacian<true>)->Name("laplacian/omp")->Arg(257)->Arg(1025);
BENCHMARK(BM_DriftDivergence<false>)->Name("drift_divergence/serial")->Arg(257)->Arg(1025);
BENCHMARK(BM_DriftDivergence<true>)->Name("drift_divergence/omp")->Arg(257)->Arg(1025);
BENCHMARK(BM_WeightedSum<false>)->Name("weighted_sum/serial")->Arg(257)->Arg(1025);
BENCHMARK(BM_WeightedSum<true>)->Name("weighted_sum/omp")->Arg(257)->Arg(1025);
BENCHMARK(BM_ThomasBatch<false>)->Name("thomas_batch/serial")->Arg(257)->Arg(1025);
BENCHMARK(BM_ThomasBatch<true>)->Name("thomas_batch/omp")->Arg(257)->Arg(1025);
BENCHMARK(BM_PicardStep<kernels::Backend::Serial>)->Name("picard_map/serial")->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PicardStep<kernels::Backend::OpenMP>)->Name("picard_map/omp")->Arg(129)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
