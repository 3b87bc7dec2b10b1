#include <benchmark/benchmark.h>

#include "levytrim/catalog.hpp"
#include "levytrim/charfn.hpp"
#include "levytrim/pathsim.hpp"
#include "levytrim/representation.hpp"
#include "levytrim/rng.hpp"

#include <cstdint>

using namespace levytrim;

namespace {

void BM_Philox(benchmark::State& state) {
  Stream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_Philox);

// Closed-form inverse against the tabulated two-sided sum.
void BM_InverseTail(benchmark::State& state) {
  const auto spec = state.range(0) == 0 ? catalog("symmetric-stable", {{"alpha", 1.5}})
                                        : catalog("gamma-type");
  Stream rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(spec.tail_abs.inverse(1e3 * rng.exponential()));
}
BENCHMARK(BM_InverseTail)->Arg(0)->Arg(1);

void BM_SamplePath(benchmark::State& state) {
  const char* names[] = {"gamma-type", "symmetric-stable", "atomic-comb"};
  const auto spec = catalog(names[state.range(0)]);
  const PathSimulator sim(spec, 0.1);
  std::uint64_t i = 0;
  std::size_t jumps = 0;
  for (auto _ : state) {
    Stream rng(3, i++);
    const PathSample p = sim.sample(rng);
    jumps += p.jumps.size();
    benchmark::DoNotOptimize(trim(p, TrimMode::modulus(1)).trimmed_value);
  }
  state.counters["jumps/path"] =
      benchmark::Counter(static_cast<double>(jumps), benchmark::Counter::kAvgIterations);
  state.SetLabel(names[state.range(0)]);
}
BENCHMARK(BM_SamplePath)->DenseRange(0, 2);

void BM_RepresentationSample(benchmark::State& state) {
  const auto spec = state.range(0) == 0 ? catalog("gamma-type")
                                        : catalog("symmetric-stable", {{"alpha", 1.5}});
  const TrimMode mode = TrimMode::modulus(1);
  SimConfig cfg;
  cfg.trim_orders = mode.total_orders();
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream rng(4, i++);
    benchmark::DoNotOptimize(sample_trimmed_rep(spec, 0.1, mode, cfg, rng));
  }
}
BENCHMARK(BM_RepresentationSample)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_CharfnTrimmed(benchmark::State& state) {
  const auto spec = catalog("gamma-type");
  const double theta = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(charfn_trimmed(spec, theta, 0.1, TrimMode::modulus(1)));
  }
}
BENCHMARK(BM_CharfnTrimmed)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
