#include <benchmark/benchmark.h>

#include "vaxmed/estimands.hpp"
#include "vaxmed/estimation.hpp"
#include "vaxmed/graph.hpp"
#include "vaxmed/interference.hpp"
#include "vaxmed/scenario.hpp"

using namespace vaxmed;

namespace {

StructuralModel builtin_model(const char* name) { return parse_scenario(*builtin_source(name)).model(); }

void BM_NdeEnumeration(benchmark::State& state) {
    const auto m = builtin_model("fig2");
    for (auto _ : state) benchmark::DoNotOptimize(natural_direct_effect(m, "A", "B", "Y").difference);
}
BENCHMARK(BM_NdeEnumeration);

void BM_DSeparation(benchmark::State& state) {
    const auto m = builtin_model("fig3-panel1-yr");
    for (auto _ : state) benchmark::DoNotOptimize(d_separated(m.dag(), "A", "R", {"H", "Y"}));
}
BENCHMARK(BM_DSeparation);

void BM_Sampling(benchmark::State& state) {
    const auto m = builtin_model("fig1-panel3");
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_units(m, n, 1).rows());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sampling)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_PluginNde(benchmark::State& state) {
    const auto d = sample_units(builtin_model("fig1-panel3"), static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(plugin_nde(d, "A", "B", "Y", {"H"}, {0, 0}).estimate);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PluginNde)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
    const auto d = sample_units(builtin_model("table1"), 100000, 1);
    for (auto _ : state) benchmark::DoNotOptimize(plugin_nde(d, "A", "B", "Y", {}, {200, 3}).se);
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

void BM_InterferenceAverage(benchmark::State& state) {
    UnitTemplate unit;
    unit.pr_b = {0.30, 0.70};
    unit.pr_y = {{{0.25, 0.35}, {0.14, 0.21}}};
    unit.y_coef = -0.05;
    const GroupedModel gm({2, 4, 6}, unit, SummaryKind::Fraction);
    for (auto _ : state) benchmark::DoNotOptimize(average_effects(gm, EffectKind::Nde, Weighting::Units, 0.5));
}
BENCHMARK(BM_InterferenceAverage);

}  // namespace

BENCHMARK_MAIN();
