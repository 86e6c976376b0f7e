#include <random>

#include <benchmark/benchmark.h>

#include "qtorus/kp.hpp"
#include "qtorus/quantum_torus.hpp"
#include "qtorus/reductions.hpp"
#include "random_ops.hpp"

using namespace qtorus;

static void BM_ComposeRandom(benchmark::State& state) {
  std::mt19937 rng(1);
  PsiDO a = testing::random_operator(rng), b = testing::random_operator(rng);
  a = testing::deepen(a, -static_cast<int>(state.range(0)), rng);
  b = testing::deepen(b, -static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(compose(a, b));
}
BENCHMARK(BM_ComposeRandom)->Arg(6)->Arg(10)->Arg(14);

static void BM_InvertDressing(benchmark::State& state) {
  int depth = static_cast<int>(state.range(0));
  PsiDO s = generic_dressing(depth, Family::kOmega);
  for (auto _ : state) benchmark::DoNotOptimize(invert_unit(s, depth));
}
BENCHMARK(BM_InvertDressing)->Arg(6)->Arg(8)->Arg(10);

static void BM_KpContext(benchmark::State& state) {
  int O = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(KpContext::init(3, O, 2));
}
BENCHMARK(BM_KpContext)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_SatoCommutator(benchmark::State& state) {
  KpContext ctx = KpContext::init(3, static_cast<int>(state.range(0)), 2);
  Derivation d1 = sato_flow(ctx, 2), d2 = sato_flow(ctx, 3);
  for (auto _ : state) benchmark::DoNotOptimize(flow_commutator(d1, d2, ctx.S()));
}
BENCHMARK(BM_SatoCommutator)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_QuantumFlow(benchmark::State& state) {
  KpContext ctx = KpContext::init(3, 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(quantum_flow(ctx, 1, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_QuantumFlow)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BkpBtype(benchmark::State& state) {
  BkpContext ctx = BkpContext::init(3, 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_btype(build_Bmn(ctx, 2, 2), ctx.substitution(), "B"));
}
BENCHMARK(BM_BkpBtype)->Unit(benchmark::kMillisecond);

static void BM_TorusBracket(benchmark::State& state) {
  int cap = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bracket_formula_check(2, -3, 3, 1, cap));
}
BENCHMARK(BM_TorusBracket)->Arg(1)->Arg(3)->Arg(6);
BENCHMARK_MAIN();
