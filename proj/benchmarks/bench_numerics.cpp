#include <benchmark/benchmark.h>

#include "rmalg/expr_parser.hpp"
#include "rmalg/numerics.hpp"

using namespace rmalg;

namespace {

void BM_RootsInM(benchmark::State& state) {
    CompiledChannel ch =
        compile(parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1/4)"));
    std::complex<double> z(2.0, 1e-7);
    for (auto _ : state) benchmark::DoNotOptimize(roots_in_m(ch.lmz, z));
}
BENCHMARK(BM_RootsInM);

void BM_DensityMp(benchmark::State& state) {
    CompiledChannel ch = compile(parse_channel_expr("mp(1/4)"));
    GridSpec grid{0.2, 2.3, 256};
    for (auto _ : state) benchmark::DoNotOptimize(density(ch, &grid));
}
BENCHMARK(BM_DensityMp);

void BM_ShannonQuadrature(benchmark::State& state) {
    CompiledChannel ch = compile(parse_channel_expr("mp(1/4)"));
    std::vector<double> gammas = {0.1, 1.0, 10.0};
    for (auto _ : state) benchmark::DoNotOptimize(shannon_transform(ch, gammas));
}
BENCHMARK(BM_ShannonQuadrature);

}  // namespace
