#include <benchmark/benchmark.h>

#include "kamnf/algebra.hpp"
#include "kamnf/diophantine.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/kam.hpp"
#include "kamnf/nls.hpp"
#include "kamnf/norms.hpp"
#include "kamnf/rng.hpp"

namespace {

using namespace kamnf;

ham::HamParams bench_params(int d, int radius) {
  ham::HamParams p;
  p.lattice.d = d;
  p.mode_radius = radius;
  return p;
}

void BM_PoissonBracket(benchmark::State& state) {
  const auto p = bench_params(static_cast<int>(state.range(0)), 2);
  rng::Stream st(7);
  gen::HamiltonianLaw law;
  law.terms = static_cast<int>(state.range(1));
  const auto f = gen::random_hamiltonian(p, law, st);
  const auto g = gen::random_hamiltonian(p, law, st);
  for (auto _ : state) benchmark::DoNotOptimize(ham::poisson_bracket(f, g));
}
BENCHMARK(BM_PoissonBracket)->Args({1, 8})->Args({1, 32})->Args({2, 32});

void BM_StarNorm(benchmark::State& state) {
  const auto p = bench_params(2, 2);
  rng::Stream st(11);
  gen::HamiltonianLaw law;
  law.terms = 64;
  const auto h = gen::random_hamiltonian(p, law, st);
  for (auto _ : state) benchmark::DoNotOptimize(ham::star_norm(h, 0.4));
}
BENCHMARK(BM_StarNorm);

void BM_DiophantineCheck(benchmark::State& state) {
  const dioph::DiophParams p{0.1, 1, static_cast<int>(state.range(0)), 2};
  const auto modes = lattice::truncated_modes(p.d, p.mode_radius);
  const auto omega = dioph::sample_frequency(modes, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dioph::check_frequency(omega, p));
}
BENCHMARK(BM_DiophantineCheck)->Arg(4)->Arg(6);

void BM_BuildNls(benchmark::State& state) {
  nls::NlsConfig cfg;
  cfg.d = static_cast<int>(state.range(0));
  cfg.mode_radius = 2;
  for (auto _ : state) benchmark::DoNotOptimize(nls::build_cubic_nls(cfg));
}
BENCHMARK(BM_BuildNls)->Arg(1)->Arg(2);

void BM_KamStep(benchmark::State& state) {
  kam::KamConfig cfg;
  cfg.d = static_cast<int>(state.range(0));
  cfg.mode_radius = cfg.d == 1 ? 2 : 1;
  cfg.steps = 1;
  if (cfg.d > 1) {
    cfg.gamma = 0.01;
    cfg.ell_budget = 2;
  }
  for (auto _ : state) benchmark::DoNotOptimize(kam::run(cfg));
}
BENCHMARK(BM_KamStep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
