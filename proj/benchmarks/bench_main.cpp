#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "gridlens/eval.hpp"
#include "gridlens/factors.hpp"
#include "gridlens/graph.hpp"
#include "gridlens/sensitivity.hpp"
#include "gridlens/workbook.hpp"

using namespace gridlens;

namespace {

// Layered model: inputs in column A, each formula row reads a few earlier
// cells, and C1 totals the formula column as the KPI.
Workbook layered(std::size_t cells, std::uint64_t seed) {
    Workbook wb;
    wb.add_sheet("M");
    std::mt19937_64 rng(seed);
    const int inputs = static_cast<int>(cells / 4);
    for (int r = 1; r <= inputs; ++r) wb.set_cell(make_literal_cell({"M", 1, r}, Value(1.0 + r % 7)));
    std::vector<std::string> refs;
    for (int r = 1; r <= inputs; ++r) refs.push_back("A" + std::to_string(r));
    for (int r = 1; r <= static_cast<int>(cells) - inputs; ++r) {
        std::uniform_int_distribution<std::size_t> pick(0, refs.size() - 1);
        std::string f = "=" + refs[pick(rng)] + "*0.5+" + refs[pick(rng)];
        if (r % 5 == 0) f += "+SUM(A1:A" + std::to_string(std::min(inputs, 20)) + ")";
        wb.set_cell(make_formula_cell({"M", 2, r}, f));
        refs.push_back("B" + std::to_string(r));
    }
    wb.set_cell(make_formula_cell({"M", 3, 1}, "=SUM(B1:B" + std::to_string(cells - inputs) + ")"));
    return wb;
}

const CellAddress kKpi{"M", 3, 1};

void BM_BuildGraph(benchmark::State& state) {
    Workbook wb = layered(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(build_graph(wb));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildGraph)->Arg(1000)->Arg(10000);

void BM_Slice(benchmark::State& state) {
    Workbook wb = layered(static_cast<std::size_t>(state.range(0)), 2);
    DependencyGraph g = build_graph(wb);
    std::vector<CellAddress> kpis{kKpi};
    for (auto _ : state) benchmark::DoNotOptimize(slice(wb, g, kpis));
}
BENCHMARK(BM_Slice)->Arg(1000)->Arg(10000);

void BM_Evaluate(benchmark::State& state) {
    Workbook wb = layered(static_cast<std::size_t>(state.range(0)), 3);
    CompiledModel model(wb);
    std::vector<Value> values;
    std::vector<std::pair<std::size_t, Value>> overrides{{*model.slot_of({"M", 1, 1}), Value(4.0)}};
    for (auto _ : state) {
        model.evaluate_into(overrides, values);
        benchmark::DoNotOptimize(values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(1000)->Arg(10000);

void BM_PBDesign(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pb_design(k));
}
BENCHMARK(BM_PBDesign)->Arg(11)->Arg(127)->Arg(933);

void BM_Screening(benchmark::State& state) {
    Workbook wb = layered(1000, 4);
    std::vector<CellAddress> kpis{kKpi};
    ModelSlice s = slice(wb, build_graph(wb), kpis);
    std::vector<FactorFileEntry> entries;
    for (const auto& a : s.inputs) entries.push_back({a, 0.5, 2.0, std::nullopt});
    std::vector<FactorSpec> factors;
    for (auto& f : identify_variable_inputs(s, &entries))
        if (f.variable) factors.push_back(f);
    PBDesign d = pb_design(factors.size());
    const ExperimentOptions opts{static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(run_experiments(s, factors, d, kpis, opts));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.runs()));
}
BENCHMARK(BM_Screening)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
