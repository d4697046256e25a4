#include <nlohmann/json.hpp>

#include "gridlens/error.hpp"
#include "gridlens/workbook.hpp"
#include "json_util.hpp"

namespace gridlens {

using nlohmann::json;

namespace {

Value literal_from_json(const json& v, const std::string& where) {
    if (v.is_number()) return Value(v.get<double>());
    if (v.is_string()) return Value(v.get<std::string>());
    if (v.is_boolean()) return Value(v.get<bool>());
    if (v.is_null()) return Value();
    throw SchemaError(where + ": \"value\" must be a number, string or boolean");
}

json literal_to_json(const Value& v, const std::string& where) {
    if (v.is_number()) return v.number();
    if (v.is_text()) return v.text();
    if (v.is_bool()) return v.boolean();
    if (v.is_blank()) return nullptr;
    throw SchemaError(where + ": error values cannot be stored as literals");
}

void read_cell(Workbook& wb, const std::string& sheet, const json& c) {
    if (!c.is_object()) throw SchemaError("sheet '" + sheet + "': cell entry must be an object");
    for (const auto& [key, _] : c.items())
        if (key != "addr" && key != "value" && key != "formula" && key != "label")
            throw SchemaError("sheet '" + sheet + "': unknown cell key '" + key + "'");
    std::string addr = detail::require_string(c, "addr", "sheet '" + sheet + "' cell");
    auto address = parse_address(addr, sheet);
    if (!address || addr.find('!') != std::string::npos)
        throw SchemaError("sheet '" + sheet + "': bad cell address '" + addr + "'");
    std::string where = format_address(*address);
    if (wb.find_cell(*address)) throw SchemaError(where + ": duplicate cell");

    std::optional<std::string> label;
    if (c.contains("label")) {
        if (!c["label"].is_string() || c["label"].get<std::string>().empty())
            throw SchemaError(where + ": \"label\" must be a non-empty string");
        label = c["label"].get<std::string>();
    }
    bool has_value = c.contains("value");
    bool has_formula = c.contains("formula");
    if (has_value == has_formula) throw SchemaError(where + ": exactly one of \"value\" or \"formula\" required");
    if (has_formula) {
        if (!c["formula"].is_string()) throw SchemaError(where + ": \"formula\" must be a string");
        std::string f = c["formula"].get<std::string>();
        if (f.empty() || f.front() != '=') throw SchemaError(where + ": formula must begin with '='");
        wb.set_cell(make_formula_cell(*address, std::move(f), std::move(label)));
    } else {
        wb.set_cell(make_literal_cell(*address, literal_from_json(c["value"], where), std::move(label)));
    }
}

}  // namespace

Workbook workbook_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("workbook document must be a JSON object");
    if (!doc.contains("sheets") || !doc["sheets"].is_array()) throw SchemaError("workbook requires a \"sheets\" array");

    Workbook wb;
    for (const auto& s : doc["sheets"]) {
        if (!s.is_object()) throw SchemaError("sheet entry must be an object");
        wb.add_sheet(detail::require_string(s, "name", "sheet"));
    }
    for (const auto& s : doc["sheets"]) {
        std::string name = s["name"].get<std::string>();
        if (!s.contains("cells")) continue;
        if (!s["cells"].is_array()) throw SchemaError("sheet '" + name + "': \"cells\" must be an array");
        for (const auto& c : s["cells"]) read_cell(wb, name, c);
    }
    if (doc.contains("definedNames")) {
        const auto& names = doc["definedNames"];
        if (!names.is_object()) throw SchemaError("\"definedNames\" must be an object");
        for (const auto& [name, target] : names.items()) {
            if (!target.is_string()) throw SchemaError("defined name '" + name + "' must map to a reference string");
            auto t = target.get<std::string>();
            auto r = parse_range(t);
            if (!r || t.find('!') == std::string::npos)
                throw SchemaError("defined name '" + name + "': bad reference '" + t + "'");
            if (r->size() == 1 && t.find(':') == std::string::npos) wb.set_defined_name(name, r->start());
            else wb.set_defined_name(name, *r);
        }
    }
    if (doc.contains("disciplines")) {
        const auto& d = doc["disciplines"];
        if (!d.is_object()) throw SchemaError("\"disciplines\" must be an object");
        for (const auto& [sheet, disc] : d.items()) {
            if (!disc.is_string()) throw SchemaError("discipline of '" + sheet + "' must be a string");
            wb.set_discipline(sheet, disc.get<std::string>());
        }
    }
    return wb;
}

json workbook_to_json(const Workbook& wb) {
    json sheets = json::array();
    for (const auto& s : wb.sheets()) {
        json cells = json::array();
        for (const auto& [addr, c] : s.cells) {
            json jc = json::object();
            jc["addr"] = format_local(addr);
            if (c.is_formula()) jc["formula"] = serialize(c.formula().ast);
            else jc["value"] = literal_to_json(c.literal(), format_address(addr));
            if (c.label) jc["label"] = *c.label;
            cells.push_back(std::move(jc));
        }
        sheets.push_back({{"name", s.name}, {"cells", std::move(cells)}});
    }
    json doc = {{"sheets", std::move(sheets)}};
    if (!wb.defined_names().empty()) {
        json names = json::object();
        for (const auto& [name, target] : wb.defined_names())
            names[name] = std::visit(
                [](const auto& t) {
                    using T = std::decay_t<decltype(t)>;
                    if constexpr (std::is_same_v<T, CellAddress>) return format_address(t);
                    else return quote_sheet(t.sheet()) + "!" + format_local(t.start()) + ":" + format_local(t.end());
                },
                target);
        doc["definedNames"] = std::move(names);
    }
    if (!wb.discipline_overrides().empty()) doc["disciplines"] = wb.discipline_overrides();
    return doc;
}

Workbook load_workbook(std::string_view document) {
    return workbook_from_json(detail::parse_json(document, "workbook"));
}

std::string save_workbook(const Workbook& wb) { return workbook_to_json(wb).dump(2); }

void apply_disciplines(Workbook& wb, std::string_view document) {
    json doc = detail::parse_json(document, "disciplines file");
    if (doc.is_object() && doc.contains("disciplines")) doc = doc["disciplines"];
    if (!doc.is_object()) throw SchemaError("disciplines file must map sheet names to disciplines");
    for (const auto& [sheet, disc] : doc.items()) {
        if (!disc.is_string()) throw SchemaError("discipline of '" + sheet + "' must be a string");
        wb.set_discipline(sheet, disc.get<std::string>());
    }
}

}  // namespace gridlens
