#include <benchmark/benchmark.h>

#include "catgraph/inference.hpp"
#include "catgraph/mst.hpp"
#include "catgraph/sim.hpp"
#include "catgraph/stats.hpp"

namespace {

using namespace catgraph;

DistanceMatrix hypercube(int length) {
  std::vector<std::string> ids;
  for (int b = 0; b < (1 << length); ++b) {
    std::string s(static_cast<std::size_t>(length), '0');
    for (int i = 0; i < length; ++i) {
      if ((b >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
    }
    ids.push_back(s);
  }
  return pairwise_hamming(ids);
}

void BM_umst_haplotype(benchmark::State& state) {
  const auto data = haplotype_scenario(static_cast<int>(state.range(0)), 10, {}, "", 7, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(umst_edges(data.distance));
  }
}
BENCHMARK(BM_umst_haplotype)->Arg(200)->Arg(500)->Arg(1000);

void BM_count_msts_hypercube(benchmark::State& state) {
  const auto d = hypercube(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_msts(d));
  }
}
BENCHMARK(BM_count_msts_hypercube)->Arg(3)->Arg(4)->Arg(5)->Arg(6);

void BM_perm_pvalue_c_umst(benchmark::State& state) {
  const auto data = haplotype_scenario(500, 8, {}, "", 11, 0.5);
  const auto prepared = prepare_statistic(TestStatistic::c_umst, data.table, &data.distance,
                                          nullptr);
  const long long b = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_perm_pvalue(prepared.eval, data.table, b, 99));
  }
}
BENCHMARK(BM_perm_pvalue_c_umst)->Arg(1000)->Arg(10000);

void BM_perm_pvalue_amdp(benchmark::State& state) {
  const auto data =
      binned_scenario(SampleDist::normal(0, 1), SampleDist::normal(1, 1), 30, 12, 3);
  const auto prepared =
      prepare_statistic(TestStatistic::amdp, data.table, &data.distance, nullptr);
  const long long b = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_perm_pvalue(prepared.eval, data.table, b, 99));
  }
}
BENCHMARK(BM_perm_pvalue_amdp)->Arg(1000);

void BM_enumerate_msts_ties(benchmark::State& state) {
  // dense tie structure: hypercube of the given length
  const auto d = hypercube(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_msts(d, 1'000'000));
  }
}
BENCHMARK(BM_enumerate_msts_ties)->Arg(2)->Arg(3);

void BM_exact_perm_distribution(benchmark::State& state) {
  const auto data =
      binned_scenario(SampleDist::normal(0, 1), SampleDist::normal(0, 1), 8, 6, 5);
  const auto prepared =
      prepare_statistic(TestStatistic::c_umst, data.table, &data.distance, nullptr);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_perm_distribution(prepared.eval, data.table));
  }
}
BENCHMARK(BM_exact_perm_distribution);

}  // namespace

BENCHMARK_MAIN();
