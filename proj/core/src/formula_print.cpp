#include <algorithm>

#include "gridlens/formula.hpp"
#include "gridlens/value.hpp"

namespace gridlens {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

int precedence(BinaryOperator op) {
    switch (op) {
        case BinaryOperator::Equal:
        case BinaryOperator::NotEqual:
        case BinaryOperator::Less:
        case BinaryOperator::LessEqual:
        case BinaryOperator::Greater:
        case BinaryOperator::GreaterEqual: return 1;
        case BinaryOperator::Concat: return 2;
        case BinaryOperator::Add:
        case BinaryOperator::Subtract: return 3;
        case BinaryOperator::Multiply:
        case BinaryOperator::Divide: return 4;
        case BinaryOperator::Power: return 5;
    }
    return 0;
}

constexpr int kUnaryPrecedence = 6;
constexpr int kAtomPrecedence = 7;

int precedence(const Expr& e) {
    if (auto* b = std::get_if<BinaryOp>(&e.node)) return precedence(b->op);
    if (std::holds_alternative<UnaryOp>(e.node)) return kUnaryPrecedence;
    return kAtomPrecedence;
}

void write(const Expr& e, std::string& out);

void write_child(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    write(e, out);
    if (parens) out += ')';
}

void write(const Expr& e, std::string& out) {
    std::visit(overloaded{
                   [&](const NumberLit& n) { out += format_number(n.value); },
                   [&](const TextLit& t) {
                       out += '"';
                       for (char ch : t.value) {
                           if (ch == '"') out += '"';
                           out += ch;
                       }
                       out += '"';
                   },
                   [&](const BoolLit& b) { out += b.value ? "TRUE" : "FALSE"; },
                   [&](const CellRef& c) {
                       if (c.sheet_qualified) out += quote_sheet(c.address.sheet) + "!";
                       out += format_local(c.address);
                   },
                   [&](const RangeRef& r) {
                       if (r.sheet_qualified) out += quote_sheet(r.range.sheet()) + "!";
                       out += format_local(r.range.start()) + ":" + format_local(r.range.end());
                   },
                   [&](const NameRef& n) { out += n.name; },
                   [&](const UnaryOp& u) {
                       out += u.op == UnaryOperator::Minus ? '-' : '+';
                       write_child(u.operand.front(), precedence(u.operand.front()) < kUnaryPrecedence, out);
                   },
                   [&](const BinaryOp& b) {
                       int p = precedence(b.op);
                       write_child(b.operands[0], precedence(b.operands[0]) < p, out);
                       out += operator_symbol(b.op);
                       write_child(b.operands[1], precedence(b.operands[1]) <= p, out);
                   },
                   [&](const FunctionCall& f) {
                       out += f.name;
                       out += '(';
                       for (std::size_t i = 0; i < f.args.size(); ++i) {
                           if (i) out += ',';
                           write(f.args[i], out);
                       }
                       out += ')';
                   },
               },
               e.node);
}

}  // namespace

std::string_view operator_symbol(BinaryOperator op) {
    switch (op) {
        case BinaryOperator::Add: return "+";
        case BinaryOperator::Subtract: return "-";
        case BinaryOperator::Multiply: return "*";
        case BinaryOperator::Divide: return "/";
        case BinaryOperator::Power: return "^";
        case BinaryOperator::Concat: return "&";
        case BinaryOperator::Equal: return "=";
        case BinaryOperator::NotEqual: return "<>";
        case BinaryOperator::Less: return "<";
        case BinaryOperator::LessEqual: return "<=";
        case BinaryOperator::Greater: return ">";
        case BinaryOperator::GreaterEqual: return ">=";
    }
    return "?";
}

std::string serialize(const Expr& e) {
    std::string out = "=";
    write(e, out);
    return out;
}

void count_functions(const Expr& e, std::map<std::string, std::size_t>& counts) {
    if (auto* f = std::get_if<FunctionCall>(&e.node)) {
        ++counts[f->name];
        for (const auto& a : f->args) count_functions(a, counts);
    } else if (auto* u = std::get_if<UnaryOp>(&e.node)) {
        count_functions(u->operand.front(), counts);
    } else if (auto* b = std::get_if<BinaryOp>(&e.node)) {
        count_functions(b->operands[0], counts);
        count_functions(b->operands[1], counts);
    }
}

const std::vector<std::string>& supported_functions() {
    static const std::vector<std::string> names{
        "ABS", "AND", "AVERAGE", "HLOOKUP", "IF", "ISERROR", "ISNUMBER", "MATCH",
        "MAX", "MIN", "ROUNDUP", "SUM", "SUMIF", "TYPE", "VLOOKUP",
    };
    return names;
}

bool is_supported_function(std::string_view upper_name) {
    const auto& names = supported_functions();
    return std::binary_search(names.begin(), names.end(), upper_name);
}

// ---- references ----------------------------------------------------------

std::string_view context_name(ReferenceContext c) {
    switch (c) {
        case ReferenceContext::Arithmetic: return "arithmetic";
        case ReferenceContext::LookupTable: return "lookup-table";
        case ReferenceContext::Aggregate: return "aggregate";
    }
    return "?";
}

std::vector<CellAddress> ReferenceSet::cells() const {
    std::vector<CellAddress> out;
    for (const auto& o : occurrences)
        if (auto* a = std::get_if<CellAddress>(&o.target)) out.push_back(*a);
    return out;
}

std::vector<CellRange> ReferenceSet::ranges() const {
    std::vector<CellRange> out;
    for (const auto& o : occurrences)
        if (auto* r = std::get_if<CellRange>(&o.target)) out.push_back(*r);
    return out;
}

namespace {

bool is_reference(const Expr& e) {
    return std::holds_alternative<CellRef>(e.node) || std::holds_alternative<RangeRef>(e.node) ||
           std::holds_alternative<NameRef>(e.node);
}

ReferenceContext argument_context(const std::string& fn, std::size_t index) {
    if ((fn == "VLOOKUP" || fn == "HLOOKUP" || fn == "MATCH") && index == 1) return ReferenceContext::LookupTable;
    if (fn == "SUM" || fn == "SUMIF") return ReferenceContext::Aggregate;
    return ReferenceContext::Arithmetic;
}

void collect(const Expr& e, ReferenceContext ctx, const NameResolver& names, ReferenceSet& out) {
    if (auto* c = std::get_if<CellRef>(&e.node)) {
        out.occurrences.push_back({c->address, ctx});
    } else if (auto* r = std::get_if<RangeRef>(&e.node)) {
        out.occurrences.push_back({r->range, ctx});
    } else if (auto* n = std::get_if<NameRef>(&e.node)) {
        auto it = names.find(to_upper(n->name));
        if (it == names.end()) {
            out.findings.push_back({n->name, "undefined name '" + n->name + "'"});
        } else {
            std::visit([&](const auto& target) { out.occurrences.push_back({target, ctx}); }, it->second);
        }
    } else if (auto* u = std::get_if<UnaryOp>(&e.node)) {
        collect(u->operand.front(), ReferenceContext::Arithmetic, names, out);
    } else if (auto* b = std::get_if<BinaryOp>(&e.node)) {
        collect(b->operands[0], ReferenceContext::Arithmetic, names, out);
        collect(b->operands[1], ReferenceContext::Arithmetic, names, out);
    } else if (auto* f = std::get_if<FunctionCall>(&e.node)) {
        for (std::size_t i = 0; i < f->args.size(); ++i) {
            const Expr& arg = f->args[i];
            collect(arg, is_reference(arg) ? argument_context(f->name, i) : ReferenceContext::Arithmetic, names,
                    out);
        }
    }
}

}  // namespace

ReferenceSet extract_references(const Expr& e, const NameResolver& names) {
    ReferenceSet out;
    collect(e, ReferenceContext::Arithmetic, names, out);
    return out;
}

}  // namespace gridlens
