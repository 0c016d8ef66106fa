// Fit-time comparison of the estimators on block-model ego samples.
#include <benchmark/benchmark.h>

#include "egolink/egolink.hpp"

using namespace egolink;

namespace {

struct Fixture {
  AdjacencyMatrix adjacency;
  EgoSample sample;
};

Fixture make_fixture(Index n_total, double rho) {
  Rng rng = make_rng(42);
  const ProbabilityMatrix p = generate_probability(ModelSpec{ModelFamily::sbm, n_total, 50.0, 42}, rng);
  AdjacencyMatrix a = sample_adjacency(p, rng);
  EgoSample s = sample_ego(a, static_cast<Index>(rho * static_cast<double>(n_total)), rng);
  return {std::move(a), std::move(s)};
}

void BM_se_fixed_rank(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(se_estimate(f.sample, SeConfig::with_rank(5)));
}

void BM_se_select_rank(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  for (auto _ : state) {
    Rng rng = make_rng(1);
    benchmark::DoNotOptimize(select_rank(f.sample, SeConfig{}, rng));
  }
}

void BM_cur(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(cur_estimate(f.sample));
}

void BM_usvt(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  const MaskedMatrix m = MaskedMatrix::egocentric(f.sample);
  for (auto _ : state) benchmark::DoNotOptimize(usvt_estimate(m));
}

void BM_mc(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  const MaskedMatrix m = MaskedMatrix::egocentric(f.sample);
  for (auto _ : state) benchmark::DoNotOptimize(mc_nuclear_estimate(m));
}

void BM_ns(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(ns_estimate(f.sample));
}

void BM_predictive_auc(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 0.2);
  const ScoreMatrix scores = se_estimate(f.sample, SeConfig::with_rank(5));
  for (auto _ : state)
    benchmark::DoNotOptimize(predictive_auc(scores, f.adjacency, f.sample.indices()));
}

}  // namespace

BENCHMARK(BM_se_fixed_rank)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_se_select_rank)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cur)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_usvt)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ns)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predictive_auc)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
