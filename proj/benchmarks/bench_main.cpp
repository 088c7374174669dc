#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "lhunt/diophantine.hpp"
#include "lhunt/lfun_eval.hpp"
#include "lhunt/prime_lattice.hpp"

using namespace lhunt;

static void BM_Sieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sieve_primes(limit));
}
BENCHMARK(BM_Sieve)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

static void BM_ZetaPoint(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const LEvaluator ev(builtin_zeta(), 0.75, t);
  double dt = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.value({0.75, t - dt}));
    dt += 1e-3;
  }
}
BENCHMARK(BM_ZetaPoint)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

static void BM_ZetaGrid(benchmark::State& state) {
  const LEvaluator ev(builtin_zeta(), 0.75, 2e6);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ev.value_grid(1.5e6, 0.01, n));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ZetaGrid)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_SearchT(benchmark::State& state) {
  const auto window = build_window(50.0, 0.75);
  std::vector<double> thetas(window.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) thetas[i] = std::fmod(0.618 * static_cast<double>(i), 1.0);
  const auto inst = DiophantineInstance::from_window(window, thetas, 1e6, 1e6 + static_cast<double>(state.range(0)), 1);
  double max_lambda = 0.0;
  for (double l : inst.lambdas) max_lambda = std::max(max_lambda, l);
  for (auto _ : state) benchmark::DoNotOptimize(search_t(inst, 0.05 / max_lambda, 60));
}
BENCHMARK(BM_SearchT)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
