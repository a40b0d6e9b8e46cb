// Serial reference vs OpenMP kernels.

#include "holo/harness.hpp"

#include <benchmark/benchmark.h>

namespace {

holo::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? holo::Exec::serial : holo::Exec::parallel;
}

void BM_TransportCatalog(benchmark::State& state) {
  const holo::MetricFamily fam = holo::builtin_family("fubini_study_chart");
  const holo::ConnectionField conn = holo::levi_civita(fam.member(2), fam.chart, fam.chart.default_step());
  holo::LoopSpec spec;
  spec.square_scales = {0.05};
  spec.random_count = 8;
  spec.seed = 3;
  const auto loops = holo::loop_catalog(fam.basepoint, spec, fam.chart).loops;
  for (auto _ : state) {
    auto out = holo::transport_all(conn, loops, 256, fam.chart, exec_of(state));
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_TransportCatalog)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConnectionDistance(benchmark::State& state) {
  const holo::MetricFamily fam = holo::builtin_family("poincare2d");
  const double step = fam.chart.default_step();
  const auto a = holo::levi_civita(fam.member(4), fam.chart, step);
  const auto b = holo::levi_civita(fam.limit, fam.chart, step);
  for (auto _ : state) benchmark::DoNotOptimize(holo::c0_connection_distance(a, b, fam.chart, 41, exec_of(state)));
}
BENCHMARK(BM_ConnectionDistance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConjugacySearch(benchmark::State& state) {
  const holo::SubgroupSpec u2 = holo::catalog_entry("u2", 4);
  const holo::Matrix v = holo::random_rotation(4, 99);
  std::vector<holo::Matrix> source;
  for (const auto& b : u2.algebra_basis) source.push_back(v * b * v.transpose());
  holo::SearchOptions opt;
  opt.exec = exec_of(state);
  opt.tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(holo::conjugacy_search(source, u2, opt));
}
BENCHMARK(BM_ConjugacySearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
