#include "tsmkit/harmonics.hpp"
#include "tsmkit/quadrature.hpp"
#include "tsmkit/symplectic.hpp"
#include "tsmkit/twisted_mean.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace tsmkit;

void BM_GaussJacobi(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  std::vector<double> x, w;
  for (auto _ : state) {
    gauss_jacobi(order, 1.0, 0.0, x, w);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_GaussJacobi)->Arg(32)->Arg(64)->Arg(128);

void BM_SphereIntegrate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rule = product_sphere_rule(n, static_cast<int>(state.range(1)));
  auto f = [n](const cplx* w) {
    cplx v = 1.0;
    for (int l = 0; l < n; ++l) v *= w[l] * std::conj(w[l]);
    return v;
  };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_sphere(*rule, f).value);
  state.counters["nodes"] = static_cast<double>(rule->size());
}
BENCHMARK(BM_SphereIntegrate)->Args({2, 16})->Args({2, 32})->Args({3, 8})->Unit(benchmark::kMicrosecond);

void BM_TwistedMean(benchmark::State& state) {
  const StepTwoGroup q = quaternionic_group();
  RVec lambda(3);
  lambda << 0.6, 0.0, 0.8;
  const Evaluable f(TypeFunction::product(RadialSum::term(1.0, 0.25, -2), BiPolynomial::z(2, 0)));
  CVec z(2);
  z << cplx(0.3, 0.1), cplx(-0.2, 0.05);
  QuadratureRule rule = QuadratureRule::parse("angles:" + std::to_string(state.range(0)));
  rule.error_estimate = false;
  for (auto _ : state) benchmark::DoNotOptimize(tsm(q, lambda, f, z, 1.3, rule).value);
  state.counters["nodes"] = static_cast<double>(product_sphere_rule_size(2, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TwistedMean)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HarmonicDecompose(benchmark::State& state) {
  const int n = 3;
  const int deg = static_cast<int>(state.range(0));
  std::mt19937_64 eng(1);
  std::normal_distribution<double> nd;
  BiPolynomial p(n);
  BiIndex idx(n);
  for (int t = 0; t < 12; ++t) {
    idx = BiIndex(n);
    for (int s = 0; s < deg; ++s) ++idx.alpha(static_cast<int>(eng() % n));
    for (int s = 0; s < deg; ++s) ++idx.beta(static_cast<int>(eng() % n));
    p.add_term(idx, cplx(nd(eng), nd(eng)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(harmonic_decompose(p, deg, deg).layers.size());
}
BENCHMARK(BM_HarmonicDecompose)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_Reduce(benchmark::State& state) {
  const int dim = static_cast<int>(2 * state.range(0));
  std::mt19937_64 eng(2);
  std::normal_distribution<double> nd;
  RMat a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = nd(eng);
  const RMat v = a - a.transpose();
  for (auto _ : state) benchmark::DoNotOptimize(reduce(v).mu.data());
}
BENCHMARK(BM_Reduce)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
