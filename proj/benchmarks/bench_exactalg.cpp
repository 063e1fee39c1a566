#include <benchmark/benchmark.h>

#include "rmalg/polyops.hpp"
#include "rmalg/transforms.hpp"

using namespace rmalg;

namespace {

BiPoly two_atom() {
    return atomic_lmz({{rational(1, 2), Rational(1)}, {rational(1, 2), Rational(2)}});
}

void BM_Resultant(benchmark::State& state) {
    BiPoly p = mp_lmz(rational(25, 13));
    BiPoly q = p.derivative1();
    for (auto _ : state) benchmark::DoNotOptimize(resultant_in_first(p, q));
}
BENCHMARK(BM_Resultant);

void BM_SquarefreeReduce(benchmark::State& state) {
    BiPoly f = two_atom();
    BiPoly sq = f * f * mp_lmz(rational(1, 2));
    for (auto _ : state) benchmark::DoNotOptimize(squarefree_in_first(sq));
}
BENCHMARK(BM_SquarefreeReduce);

void BM_MzMuzInvolution(benchmark::State& state) {
    BiPoly p = mp_lmz(rational(25, 13));
    for (auto _ : state) benchmark::DoNotOptimize(muz_to_mz(mz_to_muz(p)));
}
BENCHMARK(BM_MzMuzInvolution);

}  // namespace
