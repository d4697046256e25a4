#include "gridlens/workbook.hpp"

#include <algorithm>

#include "gridlens/error.hpp"

namespace gridlens {

void Workbook::add_sheet(std::string name) {
    if (name.empty()) throw SchemaError("sheet name must not be empty");
    if (has_sheet(name)) throw DuplicateSheetError(name);
    sheets_.push_back(Sheet{std::move(name), {}});
}

void Workbook::set_cell(Cell cell) {
    auto it = std::find_if(sheets_.begin(), sheets_.end(),
                           [&](const Sheet& s) { return s.name == cell.address.sheet; });
    if (it == sheets_.end()) throw SchemaError("cell " + format_address(cell.address) + " on unknown sheet");
    if (cell.label && cell.label->empty()) throw SchemaError("empty label on " + format_address(cell.address));
    auto key = cell.address;
    it->cells.insert_or_assign(std::move(key), std::move(cell));
}

void Workbook::set_defined_name(std::string name, NamedTarget target) {
    if (name.empty()) throw SchemaError("defined name must not be empty");
    names_.insert_or_assign(std::move(name), std::move(target));
}

void Workbook::set_discipline(const std::string& sheet, std::string discipline) {
    if (!has_sheet(sheet)) throw SchemaError("discipline given for unknown sheet '" + sheet + "'");
    if (discipline.empty()) throw SchemaError("empty discipline for sheet '" + sheet + "'");
    disciplines_.insert_or_assign(sheet, std::move(discipline));
}

bool Workbook::has_sheet(std::string_view name) const { return find_sheet(name) != nullptr; }

const Sheet* Workbook::find_sheet(std::string_view name) const {
    for (const auto& s : sheets_)
        if (s.name == name) return &s;
    return nullptr;
}

const Cell* Workbook::find_cell(const CellAddress& a) const {
    const Sheet* s = find_sheet(a.sheet);
    if (!s) return nullptr;
    auto it = s->cells.find(a);
    return it == s->cells.end() ? nullptr : &it->second;
}

std::size_t Workbook::cell_count() const {
    std::size_t n = 0;
    for (const auto& s : sheets_) n += s.cells.size();
    return n;
}

NameResolver Workbook::resolver() const {
    NameResolver out;
    for (const auto& [name, target] : names_) out.emplace(to_upper(name), target);
    return out;
}

std::string Workbook::discipline_of(std::string_view sheet) const {
    auto it = disciplines_.find(std::string(sheet));
    return it == disciplines_.end() ? std::string(sheet) : it->second;
}

std::vector<std::string> Workbook::discipline_order() const {
    std::vector<std::string> out;
    for (const auto& s : sheets_) {
        auto d = discipline_of(s.name);
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
    }
    return out;
}

Cell make_formula_cell(CellAddress address, std::string formula_text, std::optional<std::string> label) {
    Expr ast;
    try {
        ast = parse_formula(formula_text, address.sheet);
    } catch (const FormulaParseError& e) {
        throw e.at(format_address(address));
    }
    return Cell{std::move(address), Formula{std::move(formula_text), std::move(ast)}, std::move(label)};
}

Cell make_literal_cell(CellAddress address, Value value, std::optional<std::string> label) {
    return Cell{std::move(address), std::move(value), std::move(label)};
}

}  // namespace gridlens
