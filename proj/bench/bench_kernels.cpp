// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "pcalc/kernels.hpp"
#include "pcalc/pderiv.hpp"

using namespace pcalc;

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = 0.1 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
  return pts;
}

// A grid scan where each point costs one limit-definition derivative.
RealFn derivative_scan() {
  static const PFunction P = make_family(FamilyKind::khalil, 0.5);
  return [](double t) { return p_derivative_limit(P, [](double x) { return std::sin(x); }, t, Side::both, 1e-9).value; };
}

template <class MapFn>
void map_bench(benchmark::State& state, MapFn map) {
  const auto pts = grid(static_cast<std::size_t>(state.range(0)));
  const RealFn f = derivative_scan();
  for (auto _ : state) benchmark::DoNotOptimize(map(f, pts));
}

void BM_MapGridSerial(benchmark::State& s) { map_bench(s, kernels::serial::map_grid); }
void BM_MapGridOpenMP(benchmark::State& s) { map_bench(s, kernels::map_grid); }

template <class PanelFn>
void panel_bench(benchmark::State& state, PanelFn panels) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), ppp = 8, m = n * ppp;
  std::vector<double> w(m, 1e-3), src(m), sw(4 * m, 0.25), u(n + 1), out(n);
  std::vector<int> si(4 * m);
  for (std::size_t i = 0; i < m; ++i) {
    src[i] = std::sin(0.01 * static_cast<double>(i));
    for (int k = 0; k < 4; ++k) si[4 * i + k] = static_cast<int>(std::min(i / ppp + k, n));
  }
  for (std::size_t j = 0; j <= n; ++j) u[j] = std::cos(0.1 * static_cast<double>(j));
  for (auto _ : state) {
    panels(w, src, si, sw, u, ppp, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_PanelSumsSerial(benchmark::State& s) { panel_bench(s, kernels::serial::panel_sums); }
void BM_PanelSumsOpenMP(benchmark::State& s) { panel_bench(s, kernels::panel_sums); }

template <class ForEach>
void index_bench(benchmark::State& state, ForEach each) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> out(n);
  const RealFn f = derivative_scan();
  for (auto _ : state) {
    each(n, [&](std::size_t i) { out[i] = f(0.1 + 0.001 * static_cast<double>(i)); });
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_ForEachSerial(benchmark::State& s) { index_bench(s, kernels::serial::for_each_index); }
void BM_ForEachOpenMP(benchmark::State& s) { index_bench(s, kernels::for_each_index); }

}  // namespace

BENCHMARK(BM_MapGridSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_MapGridOpenMP)->Arg(256)->Arg(1024);
BENCHMARK(BM_ForEachSerial)->Arg(1024);
BENCHMARK(BM_ForEachOpenMP)->Arg(1024);
BENCHMARK(BM_PanelSumsSerial)->Arg(64)->Arg(4096);
BENCHMARK(BM_PanelSumsOpenMP)->Arg(64)->Arg(4096);

BENCHMARK_MAIN();
