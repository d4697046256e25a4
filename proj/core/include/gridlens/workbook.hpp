#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridlens/address.hpp"
#include "gridlens/formula.hpp"
#include "gridlens/value.hpp"

namespace gridlens {

struct Formula {
    std::string text;  // as written, begins with '='
    Expr ast;
    friend bool operator==(const Formula&, const Formula&) = default;
};

struct Cell {
    CellAddress address;
    std::variant<Value, Formula> content;
    std::optional<std::string> label;

    bool is_formula() const noexcept { return std::holds_alternative<Formula>(content); }
    const Formula& formula() const { return std::get<Formula>(content); }
    const Value& literal() const { return std::get<Value>(content); }

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Sheet {
    std::string name;
    std::map<CellAddress, Cell> cells;
    friend bool operator==(const Sheet&, const Sheet&) = default;
};

using NamedTarget = std::variant<CellAddress, CellRange>;

/// A spreadsheet model: ordered sheets, optional defined names and the
/// sheet -> discipline grouping. Immutable once loaded.
class Workbook {
public:
    Workbook() = default;

    /// Throws DuplicateSheetError or SchemaError on invariant violations.
    void add_sheet(std::string name);
    /// The cell's sheet must already exist.
    void set_cell(Cell cell);
    void set_defined_name(std::string name, NamedTarget target);
    void set_discipline(const std::string& sheet, std::string discipline);

    const std::vector<Sheet>& sheets() const noexcept { return sheets_; }
    bool has_sheet(std::string_view name) const;
    const Sheet* find_sheet(std::string_view name) const;
    const Cell* find_cell(const CellAddress& a) const;
    std::size_t cell_count() const;

    /// Original spelling -> target.
    const std::map<std::string, NamedTarget>& defined_names() const noexcept { return names_; }
    /// Upper-cased keys, for formula resolution.
    NameResolver resolver() const;

    /// Discipline of a sheet; defaults to the sheet name.
    std::string discipline_of(std::string_view sheet) const;
    const std::map<std::string, std::string>& discipline_overrides() const noexcept { return disciplines_; }
    /// Disciplines in order of first appearance over the sheet list.
    std::vector<std::string> discipline_order() const;

    friend bool operator==(const Workbook&, const Workbook&) = default;

private:
    std::vector<Sheet> sheets_;
    std::map<std::string, NamedTarget> names_;
    std::map<std::string, std::string> disciplines_;
};

/// Builds a cell from interchange content; parses the formula when present.
Cell make_formula_cell(CellAddress address, std::string formula_text,
                       std::optional<std::string> label = std::nullopt);
Cell make_literal_cell(CellAddress address, Value value,
                       std::optional<std::string> label = std::nullopt);

/// Reads the workbook interchange JSON document. Throws SchemaError,
/// DuplicateSheetError or FormulaParseError (located at Sheet!Cell).
Workbook load_workbook(std::string_view document);
/// Writes the interchange JSON document. Formula text is normalized.
std::string save_workbook(const Workbook& wb);

/// Reads a { "SheetName": "Discipline" } document and applies it.
void apply_disciplines(Workbook& wb, std::string_view document);

}  // namespace gridlens
