#include <benchmark/benchmark.h>

#include "denjoy/aiet.hpp"
#include "denjoy/pipeline.hpp"

namespace {

using namespace denjoy;

const LoopResult& canonical() {
  static const LoopResult loop = make_loop(Permutation({4, 3, 2, 1}), "btbtbtbttbt");
  return loop;
}

const LoopAnalysis& analysis() {
  static const LoopAnalysis a = analyze_loop(canonical(), 2000);
  return a;
}

void BM_FieldMultiply(benchmark::State& state) {
  const FieldPtr f = NumberField::create(IntPolynomial{1, -11, 21, -11, 1});
  const FieldElement a(f, {mpq_class(3, 7), mpq_class(-2, 5), mpq_class(1, 3), mpq_class(5, 11)});
  FieldElement x = a;
  for (auto _ : state) {
    x = x * a;
    if (x.coords()[0].get_num().get_mpz_t()->_mp_size > 64) x = a;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_FieldMultiply);

void BM_SignAt(benchmark::State& state) {
  const auto& g = *analysis().substitution.gamma;
  const FieldElement e = g[0] * mpq_class(1000) + g[1] * mpq_class(-999) + g[2];
  for (auto _ : state) benchmark::DoNotOptimize(e.sign_at(g.root_index));
}
BENCHMARK(BM_SignAt);

void BM_PerronField(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(perron_field(canonical().r));
}
BENCHMARK(BM_PerronField)->Unit(benchmark::kMillisecond);

void BM_LoopSearch(benchmark::State& state) {
  const Permutation pi({4, 3, 2, 1});
  for (auto _ : state) benchmark::DoNotOptimize(loop_search(pi, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_LoopSearch)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MinimalPoints(benchmark::State& state) {
  const auto& g = *analysis().substitution.gamma;
  for (auto _ : state)
    benchmark::DoNotOptimize(minimal_points(g, canonical().sigma, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_MinimalPoints)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildMeasure(benchmark::State& state) {
  const LoopAnalysis& a = analysis();
  const auto& cand = a.minimal.candidates.front();
  for (auto _ : state)
    benchmark::DoNotOptimize(build_measure(*a.substitution.gamma, cand, a.loop.sigma, a.iet,
                                           static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BuildMeasure)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DenjoyRun(benchmark::State& state) {
  const LoopAnalysis& a = analysis();
  for (auto _ : state) benchmark::DoNotOptimize(run_denjoy(a, 10000, 200, 10000));
}
BENCHMARK(BM_DenjoyRun)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
