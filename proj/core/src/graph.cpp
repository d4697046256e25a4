#include "gridlens/graph.hpp"

#include <algorithm>
#include <map>

#include "gridlens/error.hpp"
#include "scc.hpp"

namespace gridlens {

std::optional<std::size_t> DependencyGraph::index_of(const CellAddress& a) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), a);
    if (it == nodes_.end() || *it != a) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

DependencyGraph build_graph(const Workbook& wb, std::size_t collapse_threshold) {
    const NameResolver names = wb.resolver();

    struct PendingAggregate {
        std::set<CellAddress> dependents;
        ReferenceContext context;
    };
    std::set<CellAddress> nodes;
    std::map<std::pair<CellAddress, CellAddress>, ReferenceContext> edges;
    std::map<CellRange, PendingAggregate> aggregates;

    for (const auto& sheet : wb.sheets()) {
        for (const auto& [addr, c] : sheet.cells) {
            nodes.insert(addr);
            if (!c.is_formula()) continue;
            for (const auto& occ : extract_references(c.formula().ast, names).occurrences) {
                if (auto* a = std::get_if<CellAddress>(&occ.target)) {
                    nodes.insert(*a);
                    edges.try_emplace({addr, *a}, occ.context);
                    continue;
                }
                const auto& r = std::get<CellRange>(occ.target);
                for (const auto& m : r.members()) {
                    nodes.insert(m);
                    edges.try_emplace({addr, m}, occ.context);
                }
                if (r.size() > collapse_threshold) {
                    auto [it, _] = aggregates.try_emplace(r, PendingAggregate{{}, occ.context});
                    it->second.dependents.insert(addr);
                }
            }
        }
    }

    DependencyGraph g;
    g.collapse_threshold_ = collapse_threshold;
    g.nodes_.assign(nodes.begin(), nodes.end());
    g.kinds_.reserve(g.nodes_.size());
    for (const auto& a : g.nodes_) {
        if (const Cell* c = wb.find_cell(a)) g.kinds_.push_back(c->is_formula() ? NodeKind::Formula : NodeKind::Literal);
        else g.kinds_.push_back(wb.has_sheet(a.sheet) ? NodeKind::Implicit : NodeKind::Dangling);
    }
    g.precedents_.resize(g.nodes_.size());
    g.dependents_.resize(g.nodes_.size());
    g.edges_.reserve(edges.size());
    for (const auto& [key, ctx] : edges) {
        std::size_t from = *g.index_of(key.first);
        std::size_t to = *g.index_of(key.second);
        g.edges_.push_back({from, to, ctx});
        g.precedents_[from].push_back(to);
        g.dependents_[to].push_back(from);
    }
    for (auto& d : g.dependents_) std::sort(d.begin(), d.end());
    for (auto& [r, agg] : aggregates)
        g.aggregates_.push_back({r, {agg.dependents.begin(), agg.dependents.end()}, agg.context});
    return g;
}

std::vector<std::vector<CellAddress>> find_cycles(const DependencyGraph& g, const std::set<CellAddress>* within) {
    std::vector<std::vector<std::size_t>> succ(g.node_count());
    std::vector<char> active(g.node_count(), within ? 0 : 1);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        succ[i] = g.precedents(i);
        if (within && within->contains(g.node(i))) active[i] = 1;
    }
    std::vector<std::vector<CellAddress>> out;
    for (const auto& comp : detail::cyclic_components(succ, active)) {
        std::vector<CellAddress> cells;
        for (std::size_t i : comp) cells.push_back(g.node(i));
        out.push_back(std::move(cells));
    }
    return out;
}

namespace {

std::set<CellAddress> compute_inputs(const DependencyGraph& g) {
    std::set<CellAddress> inputs;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        NodeKind k = g.kind(i);
        if ((k == NodeKind::Literal || k == NodeKind::Implicit) && g.out_degree(i) == 0) inputs.insert(g.node(i));
    }
    return inputs;
}

}  // namespace

ModelSlice slice(const Workbook& wb, const DependencyGraph& g, std::span<const CellAddress> kpis) {
    std::vector<CellAddress> ordered;
    std::vector<char> reached(g.node_count(), 0);
    std::vector<std::size_t> frontier;
    for (const auto& k : kpis) {
        auto i = g.index_of(k);
        if (!i) throw UnknownKpiError("KPI " + format_address(k) + " is not a cell of the model");
        if (std::find(ordered.begin(), ordered.end(), k) != ordered.end()) continue;
        ordered.push_back(k);
        if (!reached[*i]) {
            reached[*i] = 1;
            frontier.push_back(*i);
        }
    }
    while (!frontier.empty()) {
        std::size_t v = frontier.back();
        frontier.pop_back();
        for (std::size_t p : g.precedents(v)) {
            if (reached[p]) continue;
            reached[p] = 1;
            frontier.push_back(p);
        }
    }

    ModelSlice s;
    for (const auto& sheet : wb.sheets()) s.model.add_sheet(sheet.name);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!reached[i]) continue;
        if (const Cell* c = wb.find_cell(g.node(i))) s.model.set_cell(*c);
    }
    for (const auto& [name, target] : wb.defined_names()) s.model.set_defined_name(name, target);
    for (const auto& [sheet, disc] : wb.discipline_overrides()) s.model.set_discipline(sheet, disc);

    s.graph = build_graph(s.model, g.collapse_threshold());
    s.kpis = std::move(ordered);
    s.inputs = compute_inputs(s.graph);
    return s;
}

ModelSlice slice(const ModelSlice& s, std::span<const CellAddress> kpis) { return slice(s.model, s.graph, kpis); }

ModelSlice adopt_slice(Workbook model, std::vector<CellAddress> kpis, std::size_t collapse_threshold) {
    DependencyGraph g = build_graph(model, collapse_threshold);
    return slice(model, g, kpis);
}

}  // namespace gridlens
