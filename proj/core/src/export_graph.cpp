#include <algorithm>
#include <map>
#include <set>

#include "gridlens/error.hpp"
#include "gridlens/export.hpp"
#include "json_util.hpp"

namespace gridlens {

using nlohmann::json;

MetricsBundle compute_metrics(const ModelSlice& s, std::size_t top_k) {
    MetricsBundle m;
    m.cell_count = s.cell_count();
    m.reference_count = s.reference_count();
    m.global_valency = s.cell_count() == 0 ? 0.0 : global_valency(s);
    m.disciplines = discipline_metrics(s);
    m.coupling = coupling_matrix(s);
    m.coupling_metrics = coupling_metrics(m.coupling);
    m.functions = function_histogram(s);
    m.top_referenced = top_referenced(s, top_k);
    m.findings = validate_workbook(s.model);
    return m;
}

GraphExport export_graph(const ModelSlice& s, const MetricsBundle& metrics, const EvaluationResult* baseline) {
    const DependencyGraph& g = s.graph;
    GraphExport out;
    const std::set<CellAddress> kpis(s.kpis.begin(), s.kpis.end());

    // Member cell -> first aggregate covering it; (dependent, precedent) pairs
    // drawn through an aggregate instead of individually.
    std::map<CellAddress, std::string> owner;
    std::set<std::pair<CellAddress, CellAddress>> elided;
    std::vector<std::pair<std::string, CellAddress>> aggregate_edges;
    for (const auto& agg : g.aggregates()) {
        const std::string id = format_range(agg.range);
        for (const auto& m : agg.range.members()) owner.emplace(m, id);
        for (const auto& d : agg.dependents) {
            aggregate_edges.emplace_back(id, d);
            for (const auto& m : agg.range.members()) elided.emplace(d, m);
        }
    }

    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const CellAddress& a = g.node(i);
        ExportNode n;
        n.id = format_address(a);
        n.sheet = a.sheet;
        n.discipline = s.discipline_of(a);
        const Cell* cell = s.model.find_cell(a);
        if (kpis.contains(a)) n.kind = "kpi";
        else if (g.kind(i) == NodeKind::Formula) n.kind = "formula";
        else n.kind = "input";
        if (cell) {
            n.label = cell->label;
            if (cell->is_formula()) {
                n.formula_text = serialize(cell->formula().ast);
                if (baseline) n.value = baseline->at(a);
            } else {
                n.value = cell->literal();
            }
        }
        if (auto it = owner.find(a); it != owner.end()) n.aggregate = it->second;
        out.nodes.push_back(std::move(n));
    }
    for (const auto& agg : g.aggregates()) {
        ExportNode n;
        n.id = format_range(agg.range);
        n.kind = "range-aggregate";
        n.sheet = agg.range.sheet();
        n.discipline = s.model.discipline_of(agg.range.sheet());
        n.member_count = agg.range.size();
        out.nodes.push_back(std::move(n));
    }

    for (const auto& e : g.edges()) {
        const CellAddress& dep = g.node(e.dependent);
        const CellAddress& prec = g.node(e.precedent);
        if (elided.contains({dep, prec})) continue;
        out.edges.push_back({format_address(prec), format_address(dep)});
    }
    for (const auto& [id, dep] : aggregate_edges) out.edges.push_back({id, format_address(dep)});
    std::sort(out.edges.begin(), out.edges.end(),
              [](const ExportEdge& a, const ExportEdge& b) { return std::tie(a.to, a.from) < std::tie(b.to, b.from); });
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());

    for (const auto& k : s.kpis) out.meta.kpis.push_back(format_address(k));
    out.meta.cell_count = s.cell_count();
    out.meta.expanded_reference_count = s.reference_count();
    out.meta.collapse_threshold = g.collapse_threshold();
    out.meta.disciplines = metrics.coupling.disciplines;
    out.meta.discipline_metrics = metrics.disciplines;
    out.meta.coupling_matrix = metrics.coupling;
    return out;
}

namespace {

json value_to_json(const Value& v) {
    if (v.is_number()) return v.number();
    if (v.is_text()) return v.text();
    if (v.is_bool()) return v.boolean();
    if (v.is_error()) return json{{"error", std::string(error_name(v.error()))}};
    return nullptr;
}

Value value_from_json(const json& v) {
    if (v.is_number()) return Value(v.get<double>());
    if (v.is_string()) return Value(v.get<std::string>());
    if (v.is_boolean()) return Value(v.get<bool>());
    if (v.is_null()) return Value();
    if (v.is_object() && v.contains("error") && v["error"].is_string()) {
        if (auto k = error_from_name(v["error"].get<std::string>())) return Value(*k);
    }
    throw SchemaError("graph export: bad node value");
}

template <class T>
T field(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key)) throw SchemaError(std::string("graph export: ") + where + " lacks \"" + key + "\"");
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("graph export: ") + where + " has a malformed \"" + key + "\"");
    }
}

const std::set<std::string>& node_kinds() {
    static const std::set<std::string> kinds{"input", "formula", "kpi", "range-aggregate"};
    return kinds;
}

}  // namespace

std::string to_json(const GraphExport& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes) {
        json j = {{"id", n.id}, {"kind", n.kind}, {"sheet", n.sheet}, {"discipline", n.discipline}};
        if (n.label) j["label"] = *n.label;
        if (n.value) j["value"] = value_to_json(*n.value);
        if (n.formula_text) j["formulaText"] = *n.formula_text;
        if (n.member_count) j["memberCount"] = *n.member_count;
        if (n.aggregate) j["aggregate"] = *n.aggregate;
        nodes.push_back(std::move(j));
    }
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}});

    json rows = json::array();
    for (const auto& r : g.meta.discipline_metrics)
        rows.push_back({{"discipline", r.discipline},
                        {"cellCount", r.cell_count},
                        {"inputCount", r.input_count},
                        {"pctInputs", r.pct_inputs},
                        {"avgValency", r.avg_valency}});
    json meta = {{"kpis", g.meta.kpis},
                 {"cellCount", g.meta.cell_count},
                 {"expandedReferenceCount", g.meta.expanded_reference_count},
                 {"collapseThreshold", g.meta.collapse_threshold},
                 {"disciplines", g.meta.disciplines},
                 {"disciplineMetrics", std::move(rows)},
                 {"couplingMatrix",
                  {{"disciplines", g.meta.coupling_matrix.disciplines},
                   {"direct", g.meta.coupling_matrix.direct},
                   {"indirect", g.meta.coupling_matrix.indirect}}}};
    json doc = {{"version", g.version}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"meta", std::move(meta)}};
    return doc.dump(1) + "\n";
}

GraphExport graph_export_from_json(std::string_view document) {
    json doc = detail::parse_json(document, "graph export");
    if (!doc.is_object()) throw SchemaError("graph export must be a JSON object");
    auto version = field<std::string>(doc, "version", "document");
    if (version != kGraphExportVersion)
        throw ArtifactVersionError("unsupported graph export version '" + version + "', expected '" +
                                   std::string(kGraphExportVersion) + "'");
    GraphExport g;
    g.version = version;
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw SchemaError("graph export: \"nodes\" must be an array");
    if (!doc.contains("edges") || !doc["edges"].is_array()) throw SchemaError("graph export: \"edges\" must be an array");

    std::set<std::string> ids;
    for (const auto& j : doc["nodes"]) {
        ExportNode n;
        n.id = field<std::string>(j, "id", "node");
        n.kind = field<std::string>(j, "kind", "node");
        n.sheet = field<std::string>(j, "sheet", "node");
        n.discipline = field<std::string>(j, "discipline", "node");
        if (!node_kinds().contains(n.kind)) throw SchemaError("graph export: node " + n.id + " has unknown kind '" + n.kind + "'");
        if (j.contains("label")) n.label = field<std::string>(j, "label", "node");
        if (j.contains("value")) n.value = value_from_json(j["value"]);
        if (j.contains("formulaText")) n.formula_text = field<std::string>(j, "formulaText", "node");
        if (j.contains("memberCount")) n.member_count = field<std::size_t>(j, "memberCount", "node");
        if (j.contains("aggregate")) n.aggregate = field<std::string>(j, "aggregate", "node");
        if (!ids.insert(n.id).second) throw SchemaError("graph export: duplicate node id " + n.id);
        g.nodes.push_back(std::move(n));
    }
    for (const auto& j : doc["edges"]) {
        ExportEdge e{field<std::string>(j, "from", "edge"), field<std::string>(j, "to", "edge")};
        if (!ids.contains(e.from) || !ids.contains(e.to))
            throw SchemaError("graph export: edge " + e.from + " -> " + e.to + " references an undeclared node");
        g.edges.push_back(std::move(e));
    }

    const json& meta = doc.contains("meta") ? doc["meta"] : json();
    g.meta.kpis = field<std::vector<std::string>>(meta, "kpis", "meta");
    g.meta.cell_count = field<std::size_t>(meta, "cellCount", "meta");
    g.meta.expanded_reference_count = field<std::size_t>(meta, "expandedReferenceCount", "meta");
    g.meta.collapse_threshold = field<std::size_t>(meta, "collapseThreshold", "meta");
    g.meta.disciplines = field<std::vector<std::string>>(meta, "disciplines", "meta");
    for (const auto& r : field<json>(meta, "disciplineMetrics", "meta")) {
        DisciplineMetricsRow row;
        row.discipline = field<std::string>(r, "discipline", "discipline metrics row");
        row.cell_count = field<std::size_t>(r, "cellCount", "discipline metrics row");
        row.input_count = field<std::size_t>(r, "inputCount", "discipline metrics row");
        row.pct_inputs = field<double>(r, "pctInputs", "discipline metrics row");
        row.avg_valency = field<double>(r, "avgValency", "discipline metrics row");
        g.meta.discipline_metrics.push_back(std::move(row));
    }
    const json cm = field<json>(meta, "couplingMatrix", "meta");
    g.meta.coupling_matrix.disciplines = field<std::vector<std::string>>(cm, "disciplines", "coupling matrix");
    g.meta.coupling_matrix.direct = field<std::vector<std::vector<std::size_t>>>(cm, "direct", "coupling matrix");
    g.meta.coupling_matrix.indirect = field<std::vector<std::vector<bool>>>(cm, "indirect", "coupling matrix");

    std::size_t cells = 0;
    for (const auto& n : g.nodes) cells += n.kind != "range-aggregate";
    if (cells != g.meta.cell_count)
        throw SchemaError("graph export: meta.cellCount disagrees with the node list");
    for (const auto& k : g.meta.kpis)
        if (!ids.contains(k)) throw SchemaError("graph export: KPI " + k + " is not a node");
    return g;
}

}  // namespace gridlens
