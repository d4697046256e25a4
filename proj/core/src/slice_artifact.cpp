#include <set>
#include <utility>

#include "gridlens/artifact.hpp"
#include "gridlens/error.hpp"
#include "json_util.hpp"

namespace gridlens {

using nlohmann::json;

namespace {

CellAddress read_address(const json& v, const char* what) {
    if (!v.is_string()) throw SchemaError(std::string("slice artifact: ") + what + " entries must be strings");
    auto a = parse_address(v.get<std::string>());
    if (!a || v.get<std::string>().find('!') == std::string::npos)
        throw SchemaError(std::string("slice artifact: bad ") + what + " address '" + v.get<std::string>() + "'");
    return *a;
}

std::size_t read_count(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_unsigned())
        throw SchemaError(std::string("slice artifact: \"") + key + "\" must be a non-negative integer");
    return doc[key].get<std::size_t>();
}

const json& require_array(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array())
        throw SchemaError(std::string("slice artifact: \"") + key + "\" must be an array");
    return doc[key];
}

}  // namespace

std::string save_slice(const ModelSlice& s) {
    json kpis = json::array();
    for (const auto& k : s.kpis) kpis.push_back(format_address(k));
    json inputs = json::array();
    for (const auto& i : s.inputs) inputs.push_back(format_address(i));
    json edges = json::array();
    for (const auto& e : s.graph.edges())
        edges.push_back(json::array({format_address(s.graph.node(e.dependent)), format_address(s.graph.node(e.precedent))}));

    json doc = json::object();
    doc["version"] = kSliceArtifactVersion;
    doc["kpis"] = std::move(kpis);
    doc["inputs"] = std::move(inputs);
    doc["collapseThreshold"] = s.graph.collapse_threshold();
    doc["cellCount"] = s.cell_count();
    doc["expandedReferenceCount"] = s.reference_count();
    doc["workbook"] = workbook_to_json(s.model);
    doc["edges"] = std::move(edges);
    return doc.dump(1) + "\n";
}

ModelSlice load_slice(std::string_view document) {
    json doc = detail::parse_json(document, "slice artifact");
    if (!doc.is_object()) throw SchemaError("slice artifact must be a JSON object");
    if (!doc.contains("version") || !doc["version"].is_string())
        throw SchemaError("slice artifact has no version tag");
    if (doc["version"].get<std::string>() != kSliceArtifactVersion)
        throw ArtifactVersionError("unsupported slice artifact version '" + doc["version"].get<std::string>() +
                                   "', expected '" + std::string(kSliceArtifactVersion) + "'");

    std::vector<CellAddress> kpis;
    for (const auto& k : require_array(doc, "kpis")) kpis.push_back(read_address(k, "kpi"));
    std::set<CellAddress> inputs;
    for (const auto& i : require_array(doc, "inputs")) inputs.insert(read_address(i, "input"));
    const std::size_t threshold = read_count(doc, "collapseThreshold");
    const std::size_t cells = read_count(doc, "cellCount");
    const std::size_t references = read_count(doc, "expandedReferenceCount");
    if (!doc.contains("workbook")) throw SchemaError("slice artifact has no workbook");

    Workbook model = workbook_from_json(doc["workbook"]);
    ModelSlice s;
    try {
        s = adopt_slice(std::move(model), std::move(kpis), threshold);
    } catch (const UnknownKpiError& e) {
        throw SchemaError(std::string("slice artifact: ") + e.what());
    }

    if (s.cell_count() != cells)
        throw SchemaError("slice artifact records " + std::to_string(cells) + " cells but its workbook yields " +
                          std::to_string(s.cell_count()));
    if (s.reference_count() != references)
        throw SchemaError("slice artifact records " + std::to_string(references) +
                          " references but its workbook yields " + std::to_string(s.reference_count()));
    if (s.inputs != inputs) throw SchemaError("slice artifact input list disagrees with its workbook");

    std::set<std::pair<CellAddress, CellAddress>> recorded;
    for (const auto& e : require_array(doc, "edges")) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("slice artifact: edges must be [dependent, precedent] pairs");
        recorded.emplace(read_address(e[0], "edge"), read_address(e[1], "edge"));
    }
    std::set<std::pair<CellAddress, CellAddress>> derived;
    for (const auto& e : s.graph.edges()) derived.emplace(s.graph.node(e.dependent), s.graph.node(e.precedent));
    if (recorded != derived) throw SchemaError("slice artifact edge list disagrees with its workbook");
    return s;
}

}  // namespace gridlens
