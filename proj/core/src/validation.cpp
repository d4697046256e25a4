#include "gridlens/validation.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace gridlens {

std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::Info: return "info";
        case Severity::Warning: return "warning";
        case Severity::Error: return "error";
    }
    return "?";
}

namespace {

struct Checker {
    const Workbook& wb;
    NameResolver names;
    ValidationReport& out;
    std::set<std::tuple<std::string, std::string, std::string>> seen;

    void add(Severity sev, std::string kind, std::string location, std::string message) {
        if (!seen.emplace(kind, location, message).second) return;
        out.push_back({sev, std::move(kind), std::move(location), std::move(message)});
    }

    void check_sheet(const std::string& sheet, const std::string& where) {
        if (!wb.has_sheet(sheet))
            add(Severity::Error, "unknown-sheet", where, "reference to unknown sheet '" + sheet + "'");
    }

    // Numbers of a lookup vector, in order; formulas and non-numbers skipped.
    std::vector<double> visible_numbers(const CellRange& r, bool by_row) const {
        std::vector<double> out;
        int n = by_row ? r.columns() : r.rows();
        for (int i = 0; i < n; ++i) {
            CellAddress a = r.start();
            if (by_row) a.column += i;
            else a.row += i;
            const Cell* c = wb.find_cell(a);
            if (c && !c->is_formula() && c->literal().is_number()) out.push_back(c->literal().number());
        }
        return out;
    }

    static bool approximate_flag(const std::vector<Expr>& args, std::size_t index, bool& descending) {
        descending = false;
        if (args.size() <= index) return true;
        const Expr& flag = args[index];
        if (auto* b = std::get_if<BoolLit>(&flag.node)) return b->value;
        if (auto* n = std::get_if<NumberLit>(&flag.node)) return n->value != 0;
        if (auto* u = std::get_if<UnaryOp>(&flag.node); u && u->op == UnaryOperator::Minus) {
            descending = true;
            return true;
        }
        return false;  // computed flag: cannot tell
    }

    void check_lookup(const FunctionCall& f, const std::string& where) {
        if (f.args.size() < 2) return;
        auto* table = std::get_if<RangeRef>(&f.args[1].node);
        if (!table || !wb.has_sheet(table->range.sheet())) return;
        bool descending = false;
        bool by_row = false;
        bool approximate = false;
        if (f.name == "VLOOKUP") {
            approximate = approximate_flag(f.args, 3, descending);
        } else if (f.name == "HLOOKUP") {
            approximate = approximate_flag(f.args, 3, descending);
            by_row = true;
        } else {
            approximate = approximate_flag(f.args, 2, descending);
            by_row = table->range.rows() == 1;
        }
        if (!approximate) return;
        auto values = visible_numbers(table->range, by_row);
        bool sorted = descending ? std::is_sorted(values.rbegin(), values.rend())
                                 : std::is_sorted(values.begin(), values.end());
        if (!sorted)
            add(Severity::Warning, "unsorted-lookup", where,
                f.name + " approximate match over unsorted " + format_range(table->range));
    }

    void walk(const Expr& e, const std::string& where) {
        if (auto* c = std::get_if<CellRef>(&e.node)) {
            check_sheet(c->address.sheet, where);
        } else if (auto* r = std::get_if<RangeRef>(&e.node)) {
            check_sheet(r->range.sheet(), where);
        } else if (auto* n = std::get_if<NameRef>(&e.node)) {
            if (!names.contains(to_upper(n->name)))
                add(Severity::Error, "unknown-name", where, "undefined name '" + n->name + "'");
        } else if (auto* u = std::get_if<UnaryOp>(&e.node)) {
            walk(u->operand.front(), where);
        } else if (auto* b = std::get_if<BinaryOp>(&e.node)) {
            walk(b->operands[0], where);
            walk(b->operands[1], where);
        } else if (auto* f = std::get_if<FunctionCall>(&e.node)) {
            if (!is_supported_function(f->name))
                add(Severity::Warning, "unknown-function", where, "unsupported function " + f->name);
            if (f->name == "VLOOKUP" || f->name == "HLOOKUP" || f->name == "MATCH") check_lookup(*f, where);
            for (const auto& a : f->args) walk(a, where);
        }
    }
};

}  // namespace

ValidationReport validate_workbook(const Workbook& wb) {
    ValidationReport report;
    Checker check{wb, wb.resolver(), report, {}};

    for (const auto& [name, target] : wb.defined_names()) {
        std::visit(
            [&](const auto& t) {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, CellAddress>) check.check_sheet(t.sheet, name);
                else check.check_sheet(t.sheet(), name);
            },
            target);
    }
    for (const auto& sheet : wb.sheets()) {
        for (const auto& [addr, c] : sheet.cells) {
            std::string where = format_address(addr);
            if (c.label && check.names.contains(to_upper(*c.label)))
                check.add(Severity::Warning, "label-shadows-name", where,
                          "label '" + *c.label + "' collides with a defined name");
            if (c.is_formula()) check.walk(c.formula().ast, where);
        }
    }
    return report;
}

}  // namespace gridlens
