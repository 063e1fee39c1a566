#include <benchmark/benchmark.h>

#include "rmalg/expr_parser.hpp"
#include "rmalg/montecarlo.hpp"

using namespace rmalg;

namespace {

void BM_SampleTrial(benchmark::State& state) {
    McConfig cfg;
    cfg.expr = parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1/4)");
    cfg.Nr = 50;
    cfg.Nt = 200;
    cfg.K = 3;
    cfg.gammas = {1.0};
    FactorPlan plan = realize_factors(cfg.expr, cfg.Nr, cfg.Nt);
    std::uint64_t trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_trial(cfg, plan, trial++));
}
BENCHMARK(BM_SampleTrial);

void BM_GaussStream(benchmark::State& state) {
    GaussStream gs(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(gs.next_cn());
}
BENCHMARK(BM_GaussStream);

}  // namespace
