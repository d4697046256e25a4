#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "gridlens/error.hpp"
#include "gridlens/eval.hpp"
#include "gridlens/graph.hpp"

using namespace gridlens;

namespace {

CellAddress at(const char* a) { return *parse_address(a, "S"); }

Workbook chain() {
    return load_workbook(R"J({"sheets":[{"name":"S","cells":[
        {"addr":"A1","value":5},{"addr":"B1","formula":"=A1*2"},{"addr":"C1","formula":"=B1+1"}]}]})J");
}

std::set<CellAddress> node_set(const DependencyGraph& g) { return {g.nodes().begin(), g.nodes().end()}; }

}  // namespace

TEST_CASE("three-cell chain") {
    DependencyGraph g = build_graph(chain());
    CHECK(g.node_count() == 3);
    REQUIRE(g.edge_count() == 2);
    auto b1 = *g.index_of(at("B1"));
    auto c1 = *g.index_of(at("C1"));
    CHECK(g.precedents(c1) == std::vector<std::size_t>{b1});
    CHECK(g.node(g.precedents(b1).at(0)) == at("A1"));
    CHECK(g.kind(*g.index_of(at("A1"))) == NodeKind::Literal);
    CHECK(g.kind(c1) == NodeKind::Formula);
}

TEST_CASE("ranges expand to members and large ones are aggregated") {
    Workbook wb;
    wb.add_sheet("S");
    wb.set_cell(make_formula_cell(at("B1"), "=SUM(A1:A100)"));
    wb.set_cell(make_formula_cell(at("B2"), "=SUM(C1:C3)"));
    DependencyGraph g = build_graph(wb);
    CHECK(g.edge_count() == 103);
    CHECK(g.node_count() == 105);
    REQUIRE(g.aggregates().size() == 1);
    CHECK(g.aggregates()[0].range == *parse_range("S!A1:A100"));
    CHECK(g.aggregates()[0].dependents == std::vector<CellAddress>{at("B1")});
    CHECK(g.aggregates()[0].context == ReferenceContext::Aggregate);
    CHECK(g.kind(*g.index_of(at("A50"))) == NodeKind::Implicit);

    DependencyGraph wide = build_graph(wb, 200);
    CHECK(wide.aggregates().empty());
    CHECK(wide.edge_count() == 103);
}

TEST_CASE("empty workbook gives an empty graph") {
    DependencyGraph g = build_graph(Workbook{});
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("parallel references collapse to one edge") {
    Workbook wb;
    wb.add_sheet("S");
    wb.set_cell(make_literal_cell(at("A1"), Value(1.0)));
    wb.set_cell(make_formula_cell(at("B1"), "=A1+A1*SUM(A1:A2)"));
    DependencyGraph g = build_graph(wb);
    CHECK(g.edge_count() == 2);
    CHECK(g.edges()[0].context == ReferenceContext::Arithmetic);
}

TEST_CASE("references to missing sheets become dangling nodes") {
    Workbook wb;
    wb.add_sheet("S");
    wb.set_cell(make_formula_cell(at("B1"), "=Gone!A1"));
    DependencyGraph g = build_graph(wb);
    CHECK(g.kind(*g.index_of(CellAddress{"Gone", 1, 1})) == NodeKind::Dangling);
}

TEST_CASE("self references and cycles are found") {
    Workbook wb;
    wb.add_sheet("S");
    wb.set_cell(make_formula_cell(at("A1"), "=A1"));
    wb.set_cell(make_formula_cell(at("B1"), "=C1"));
    wb.set_cell(make_formula_cell(at("C1"), "=B1"));
    wb.set_cell(make_formula_cell(at("D1"), "=C1"));
    DependencyGraph g = build_graph(wb);
    auto cycles = find_cycles(g);
    REQUIRE(cycles.size() == 2);
    CHECK(cycles[0] == std::vector<CellAddress>{at("A1")});
    CHECK(cycles[1] == std::vector<CellAddress>{at("B1"), at("C1")});
    std::set<CellAddress> within{at("A1")};
    CHECK(find_cycles(g, &within).size() == 1);
}

TEST_CASE("slicing a chain") {
    Workbook wb = chain();
    wb.set_cell(make_literal_cell(at("D1"), Value(7.0)));
    DependencyGraph g = build_graph(wb);
    std::vector<CellAddress> kpis{at("C1")};
    ModelSlice s = slice(wb, g, kpis);
    CHECK(node_set(s.graph) == std::set<CellAddress>{at("A1"), at("B1"), at("C1")});
    CHECK(s.inputs == std::set<CellAddress>{at("A1")});
    CHECK(s.reference_count() == 2);
    CHECK(s.model.find_cell(at("D1")) == nullptr);
    CHECK(s.model.sheets().size() == 1);

    std::vector<CellAddress> missing{at("Z99")};
    CHECK_THROWS_AS(slice(wb, g, missing), UnknownKpiError);
}

TEST_CASE("implicit blanks inside ranges are inputs") {
    Workbook wb;
    wb.add_sheet("S");
    wb.set_cell(make_literal_cell(at("A1"), Value(1.0)));
    wb.set_cell(make_formula_cell(at("B1"), "=SUM(A1:A3)"));
    std::vector<CellAddress> kpis{at("B1")};
    ModelSlice s = slice(wb, build_graph(wb), kpis);
    CHECK(s.inputs == std::set<CellAddress>{at("A1"), at("A2"), at("A3")});
}

TEST_CASE("slice invariants hold on generated workbooks") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto g = testing::generate_workbook(seed);
        auto kpis = testing::pick_kpis(g, seed, 3);
        if (kpis.empty()) continue;
        DependencyGraph graph = build_graph(g.workbook);
        ModelSlice s = slice(g.workbook, graph, kpis);

        for (const auto& k : kpis) REQUIRE(s.graph.contains(k));
        for (const auto& i : s.inputs) {
            auto idx = s.graph.index_of(i);
            REQUIRE(idx);
            REQUIRE(s.graph.kind(*idx) != NodeKind::Formula);
            REQUIRE(s.graph.out_degree(*idx) == 0);
        }
        // Every node reaches back to a KPI.
        std::set<std::size_t> seen;
        std::vector<std::size_t> stack;
        for (const auto& k : kpis) stack.push_back(*s.graph.index_of(k));
        while (!stack.empty()) {
            auto n = stack.back();
            stack.pop_back();
            if (!seen.insert(n).second) continue;
            for (auto p : s.graph.precedents(n)) stack.push_back(p);
        }
        REQUIRE(seen.size() == s.cell_count());

        // Re-slicing with the same KPIs changes nothing.
        REQUIRE(slice(s, kpis) == s);
        // The slice's edges are exactly the full graph's edges among slice nodes.
        std::size_t inner = 0;
        for (const auto& e : graph.edges())
            if (s.graph.contains(graph.node(e.dependent))) ++inner;
        REQUIRE(inner == s.reference_count());
    }
}

TEST_CASE("property: slice nodes equal breadth-first reachability") {
    for (std::uint64_t seed = 1000; seed < 1300; ++seed) {
        auto g = testing::generate_workbook(seed);
        auto kpis = testing::pick_kpis(g, seed, 1 + seed % 4);
        if (kpis.empty()) continue;
        ModelSlice s = slice(g.workbook, build_graph(g.workbook), kpis);
        REQUIRE_MESSAGE(node_set(s.graph) == testing::reachable_cells(g, kpis), "seed " << seed);
    }
}

TEST_CASE("property: sliced evaluation equals full evaluation bit for bit") {
    for (std::uint64_t seed = 2000; seed < 2200; ++seed) {
        auto g = testing::generate_workbook(seed);
        auto kpis = testing::pick_kpis(g, seed, 1 + seed % 4);
        if (kpis.empty()) continue;
        ModelSlice s = slice(g.workbook, build_graph(g.workbook), kpis);
        auto full = evaluate(g.workbook);
        auto part = evaluate(s.model);
        for (const auto& k : kpis)
            REQUIRE_MESSAGE(bitwise_equal(full.at(k), part.at(k)), "seed " << seed << " kpi " << format_address(k));
    }
}

TEST_CASE("property: overriding inputs outside the slice leaves KPIs unchanged") {
    for (std::uint64_t seed = 3000; seed < 3100; ++seed) {
        auto g = testing::generate_workbook(seed);
        auto kpis = testing::pick_kpis(g, seed, 1);
        if (kpis.empty()) continue;
        ModelSlice s = slice(g.workbook, build_graph(g.workbook), kpis);
        ScenarioOverlay o;
        for (const auto& [a, v] : g.literals)
            if (!s.graph.contains(a)) o.overrides[a] = Value(12345.0);
        auto base = evaluate(g.workbook);
        auto moved = evaluate(g.workbook, nullptr, &o);
        REQUIRE(bitwise_equal(base.at(kpis[0]), moved.at(kpis[0])));
    }
}

TEST_CASE("slice minimality: blanking any slice cell moves the KPI") {
    auto m = testing::sized_workbook(120, 260, {}, 5);
    std::vector<CellAddress> kpis{m.kpi};
    ModelSlice s = slice(m.workbook, build_graph(m.workbook), kpis);
    REQUIRE(s.cell_count() == 120);
    const double base = evaluate(s.model).at(m.kpi).number();
    for (const auto& node : s.graph.nodes()) {
        if (node == m.kpi) continue;
        Workbook cut;
        for (const auto& sheet : s.model.sheets()) {
            cut.add_sheet(sheet.name);
            for (const auto& [a, c] : sheet.cells)
                if (a != node) cut.set_cell(c);
        }
        const Value v = evaluate(cut).at(m.kpi);
        REQUIRE_MESSAGE((!v.is_number() || v.number() != base), "removing " << format_address(node));
    }
}
