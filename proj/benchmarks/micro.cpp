#include <benchmark/benchmark.h>

#include <random>

#include "mcdc/came.hpp"
#include "mcdc/metrics.hpp"
#include "mcdc/mgcpl.hpp"
#include "mcdc/similarity.hpp"

namespace {

mcdc::Dataset data(std::size_t n, std::size_t d) {
  mcdc::SynthSpec s;
  s.n = n;
  s.d = d;
  s.k_true = 3;
  s.purity = 0.9;
  s.seed = 1;
  return mcdc::generate_synthetic(s).first;
}

void BM_ObjectClusterSimilarity(benchmark::State& state) {
  const auto ds = data(1000, std::size_t(state.range(0)));
  std::vector<std::size_t> members(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) members[i] = i;
  const auto table = mcdc::build_table(ds.values(), ds.cardinalities(), members);
  const std::vector<double> w(ds.d(), 1.0 / double(ds.d()));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcdc::object_cluster_similarity(ds.row(i), table, w));
    i = (i + 1) % ds.n();
  }
}
BENCHMARK(BM_ObjectClusterSimilarity)->Arg(10)->Arg(100)->Arg(1000);

void BM_LearnerPass(benchmark::State& state) {
  const auto ds = data(std::size_t(state.range(0)), 10);
  for (auto _ : state) {
    state.PauseTiming();
    mcdc::Learner learner(ds, {});
    std::mt19937_64 rng(3);
    learner.seed_random(32, rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(learner.pass());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LearnerPass)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_RunCame(benchmark::State& state) {
  const auto ds = data(20000, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcdc::run_came(ds.values(), std::size_t(state.range(0)), 5));
  }
}
BENCHMARK(BM_RunCame)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Metrics(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  std::mt19937_64 rng(9);
  mcdc::Labels a(n), b(n);
  for (auto& x : a) x = mcdc::Label(rng() % 10);
  for (auto& x : b) x = mcdc::Label(rng() % 10);
  for (auto _ : state) benchmark::DoNotOptimize(mcdc::evaluate(a, b));
}
BENCHMARK(BM_Metrics)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
