#include <benchmark/benchmark.h>

#include "rmalg/channels.hpp"
#include "rmalg/expr_parser.hpp"

using namespace rmalg;

namespace {

void BM_CompileCorrWishAtoms(benchmark::State& state) {
    ExprPtr expr = parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1/4)");
    for (auto _ : state) benchmark::DoNotOptimize(compile(expr));
}
BENCHMARK(BM_CompileCorrWishAtoms);

void BM_CompileCorrWishAr1(benchmark::State& state) {
    ExprPtr expr = parse_channel_expr("corrWish(ar1(1/2),ar1(1/2),1/2)");
    for (auto _ : state) benchmark::DoNotOptimize(compile(expr));
}
BENCHMARK(BM_CompileCorrWishAr1);

void BM_MomentSeriesK8(benchmark::State& state) {
    CompiledChannel ch =
        compile(parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1/4)"));
    BiPoly muz = mz_to_muz(ch.lmz);
    for (auto _ : state)
        benchmark::DoNotOptimize(moment_series(muz, 8, ch.mean, ch.second_moment));
}
BENCHMARK(BM_MomentSeriesK8);

}  // namespace
