#include "gridlens/factors.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "gridlens/error.hpp"

namespace gridlens {

using nlohmann::json;

std::vector<FactorFileEntry> load_factor_file(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw FactorFileError(std::string("factor file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("factors") || !doc["factors"].is_array())
        throw FactorFileError("factor file requires a \"factors\" array");

    std::vector<FactorFileEntry> out;
    for (const auto& f : doc["factors"]) {
        if (!f.is_object() || !f.contains("cell") || !f["cell"].is_string())
            throw FactorFileError("factor entry requires a \"cell\" string");
        std::string cell = f["cell"].get<std::string>();
        auto a = parse_address(cell);
        if (!a || a->sheet.empty()) throw FactorFileError("factor cell '" + cell + "' must be a Sheet!A1 reference");
        std::string label = f.contains("name") && f["name"].is_string() ? f["name"].get<std::string>() : cell;
        if (!f.contains("min") || !f["min"].is_number() || !f.contains("max") || !f["max"].is_number())
            throw FactorFileError("factor '" + label + "' requires numeric \"min\" and \"max\"");
        FactorFileEntry e{*a, f["min"].get<double>(), f["max"].get<double>(), std::nullopt};
        if (f.contains("name")) {
            if (!f["name"].is_string()) throw FactorFileError("factor '" + cell + "': \"name\" must be a string");
            e.name = f["name"].get<std::string>();
        }
        if (e.min > e.max)
            throw FactorFileError("factor '" + label + "' has min " + std::to_string(e.min) + " > max " +
                                  std::to_string(e.max));
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<FactorSpec> identify_variable_inputs(const ModelSlice& s, const std::vector<FactorFileEntry>* factors) {
    std::map<CellAddress, const FactorFileEntry*> listed;
    if (factors) {
        for (const auto& f : *factors) {
            const Cell* c = s.model.find_cell(f.cell);
            bool numeric_input = s.inputs.contains(f.cell) && c && !c->is_formula() && c->literal().is_number();
            if (!numeric_input)
                throw FactorTargetError("factor cell " + format_address(f.cell) +
                                        " is not a numeric input of the slice");
            listed[f.cell] = &f;
        }
    }

    std::vector<FactorSpec> out;
    for (const auto& a : s.inputs) {
        const Cell* c = s.model.find_cell(a);
        if (!c || c->is_formula() || !c->literal().is_number()) continue;
        FactorSpec spec;
        spec.cell = a;
        spec.name = c->label ? *c->label : format_address(a);
        spec.discipline = s.discipline_of(a);
        double v = c->literal().number();
        spec.min = spec.max = v;
        if (auto it = listed.find(a); it != listed.end()) {
            const FactorFileEntry& f = *it->second;
            if (f.name) spec.name = *f.name;
            spec.min = f.min;
            spec.max = f.max;
            spec.variable = f.min < f.max;
        } else {
            spec.range_missing = factors == nullptr;
        }
        out.push_back(std::move(spec));
    }
    return out;
}

}  // namespace gridlens
