#include <benchmark/benchmark.h>

#include <random>

#include "stripbound/blaschke.hpp"
#include "stripbound/certify.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/operator.hpp"

namespace sb = stripbound;

static sb::blaschke::ProductConfig spaced_config(int n) {
  sb::blaschke::ProductConfig cfg;
  for (int j = 0; j < n; ++j) cfg.nodes.push_back({1.0 + 3.0 * j, static_cast<double>(1 + j % 7)});
  return cfg;
}

static void BM_ProductEval(benchmark::State& state) {
  const auto cfg = spaced_config(static_cast<int>(state.range(0)));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::blaschke::product_eval(cfg, {x, 0.5}));
    x += 0.37;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProductEval)->RangeMultiplier(8)->Range(8, 4096);

static void BM_DyadicEstimate(benchmark::State& state) {
  std::vector<sb::ZeroEntry> raw;
  for (int j = 1; j <= state.range(0); ++j) raw.push_back({sb::Complex(j, 1.0), 1.0});
  const auto zs = sb::make_zero_set(raw);
  const sb::SeparationParams p;
  for (auto _ : state) benchmark::DoNotOptimize(sb::certify::dyadic_estimate(zs, 0.5 * state.range(0), p));
}
BENCHMARK(BM_DyadicEstimate)->RangeMultiplier(10)->Range(100, 100000);

static void BM_PoissonOuter(benchmark::State& state) {
  const auto f = sb::FunctionModel::rational(1.0, {sb::Complex{0, -2}}, {sb::Complex{0, -1}});
  const auto bm = sb::factorization::BoundaryModulus::of_model(f, sb::factorization::DecayClass::power(1.5, -2.0, 1.0));
  sb::QuadratureSpec q;
  q.abs_tol = 1e-8;
  double x = -20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::factorization::poisson_outer(bm, x, 0.5, q));
    x = x > 20.0 ? -20.0 : x + 0.9;
  }
}
BENCHMARK(BM_PoissonOuter);

static void BM_RegularizedInverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  sb::op::CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = sb::Complex(nd(gen), nd(gen)) / static_cast<double>(n);
  const sb::op::TraceClassMatrix t(m);
  for (auto _ : state) benchmark::DoNotOptimize(sb::op::regularized_inverse(t, sb::Complex(0.3, 1.1)));
}
BENCHMARK(BM_RegularizedInverse)->DenseRange(4, 16, 4);

static void BM_FiniteRankSolve(benchmark::State& state) {
  const int n = 8, d = static_cast<int>(state.range(0));
  sb::op::CMatrix basis = sb::op::CMatrix::Identity(d, n);
  const auto spec = sb::op::FiniteRankSpec(basis, sb::op::make_family("blaschke_diagonal",
      {{"zeros", {{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {6, 2}, {7, 2}, {8, 2}}}}, n), {});
  const sb::op::CVector g = sb::op::CVector::Ones(d);
  for (auto _ : state) benchmark::DoNotOptimize(sb::op::finite_rank_solve(spec, {0.5, 0.5}, g));
}
BENCHMARK(BM_FiniteRankSolve)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK_MAIN();
