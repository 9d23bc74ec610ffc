#include <benchmark/benchmark.h>

#include <random>

#include "heisfock/fock.hpp"
#include "heisfock/geometry.hpp"
#include "heisfock/montecarlo.hpp"
#include "heisfock/polynomial.hpp"

using namespace heisfock;

namespace {

HoloPoly bench_poly(const StructurePtr& s) {
  std::map<HoloPoly::Monomial, cplx> terms;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    HoloPoly::Monomial m(s->dim(), 0);
    m[i % s->n()] += 1 + (i % 2);
    if (s->N() > 0 && i % 3 == 0) m[s->n()] += 1;
    terms[m] = cplx(g(rng), g(rng));
  }
  return HoloPoly::from_terms(s, std::move(terms));
}

void BM_path_sampler(benchmark::State& state) {
  auto s = make_standard_heisenberg(static_cast<int>(state.range(0)) / 2);
  const McConfig cfg{1.0, static_cast<int>(state.range(1)), 1000, 1, 1};
  PathSampler sampler(s, cfg, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.next());
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_path_sampler)->Args({2, 100})->Args({2, 1000})->Args({4, 500});

void BM_estimate_sq_norm(benchmark::State& state) {
  auto s = make_standard_heisenberg(1);
  const HoloPoly f = bench_poly(s);
  const McConfig cfg{1.0, 50, state.range(0), 3, 2};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_sq_norm(f, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_estimate_sq_norm)->Arg(2000)->Arg(20000);

void BM_taylor_tensor(benchmark::State& state) {
  auto s = make_weighted_family(static_cast<int>(state.range(0)), 1,
                                std::vector<double>(state.range(0), 1.0), 5);
  const HoloPoly f = bench_poly(s);
  const int R = std::max(0, f.weighted_degree());
  for (auto _ : state) benchmark::DoNotOptimize(taylor_tensor(f, R));
}
BENCHMARK(BM_taylor_tensor)->Arg(4)->Arg(8);

void BM_fock_norm(benchmark::State& state) {
  auto s = make_weighted_family(8, 1, std::vector<double>(8, 1.0), 5);
  const GradedTensor alpha = taylor_tensor(bench_poly(s), 4);
  for (auto _ : state) benchmark::DoNotOptimize(fock_norm_sq(alpha, 1.0));
}
BENCHMARK(BM_fock_norm);

void BM_distance_optimize(benchmark::State& state) {
  auto s = make_standard_heisenberg(1);
  GroupElement x = identity_element(*s);
  x.w[0] = cplx(0.5, 0.5);
  x.c[0] = 0.4;
  const HorizontalPath init = distance_upper(s, x, 96).witness;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        distance_optimize(s, x, init, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_distance_optimize)->Arg(200)->Arg(1000);

}  // namespace

int main(int argc, char** argv) {
  ::benchmark::Initialize(&argc, argv);
  if (::benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  ::benchmark::RunSpecifiedBenchmarks();
  return 0;
}
