#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridlens/address.hpp"

namespace gridlens {

enum class UnaryOperator { Minus, Plus };

enum class BinaryOperator {
    Add, Subtract, Multiply, Divide, Power, Concat,
    Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual,
};

std::string_view operator_symbol(BinaryOperator op);

struct Expr;

struct NumberLit {
    double value = 0;
    friend bool operator==(const NumberLit&, const NumberLit&) = default;
};

struct TextLit {
    std::string value;
    friend bool operator==(const TextLit&, const TextLit&) = default;
};

struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct CellRef {
    CellAddress address;
    bool sheet_qualified = false;
    friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct RangeRef {
    CellRange range;
    bool sheet_qualified = false;
    friend bool operator==(const RangeRef&, const RangeRef&) = default;
};

/// A defined name used as a reference ("TaxRate").
struct NameRef {
    std::string name;
    friend bool operator==(const NameRef&, const NameRef&) = default;
};

struct UnaryOp {
    UnaryOperator op = UnaryOperator::Minus;
    std::vector<Expr> operand;  // exactly one
    friend bool operator==(const UnaryOp&, const UnaryOp&) = default;
};

struct BinaryOp {
    BinaryOperator op = BinaryOperator::Add;
    std::vector<Expr> operands;  // exactly two
    friend bool operator==(const BinaryOp&, const BinaryOp&) = default;
};

struct FunctionCall {
    std::string name;  // upper-case
    std::vector<Expr> args;
    friend bool operator==(const FunctionCall&, const FunctionCall&) = default;
};

/// Formula syntax tree node.
struct Expr {
    using Node = std::variant<NumberLit, TextLit, BoolLit, CellRef, RangeRef, NameRef,
                              UnaryOp, BinaryOp, FunctionCall>;
    Node node;

    friend bool operator==(const Expr&, const Expr&) = default;
};

// Convenience constructors, mostly for tests and generators.
Expr number(double v);
Expr text(std::string v);
Expr boolean(bool v);
Expr cell(CellAddress a, bool qualified = false);
Expr range(CellRange r, bool qualified = false);
Expr unary(UnaryOperator op, Expr operand);
Expr binary(BinaryOperator op, Expr lhs, Expr rhs);
Expr call(std::string name, std::vector<Expr> args);

/// Parses a formula such as "=SUM(B1:B3)+2". Unqualified references are
/// placed on `host_sheet`. Throws FormulaParseError.
Expr parse_formula(std::string_view text, std::string_view host_sheet = {});

/// Normalized text: leading '=', upper-case function names, no whitespace,
/// minimal parentheses. Reparses to a structurally identical tree.
std::string serialize(const Expr& e);

/// Counts FunctionCall nodes by name, including nested calls.
void count_functions(const Expr& e, std::map<std::string, std::size_t>& counts);

/// Functions the evaluator implements.
bool is_supported_function(std::string_view upper_name);
const std::vector<std::string>& supported_functions();

// ---- reference extraction ------------------------------------------------

enum class ReferenceContext { Arithmetic, LookupTable, Aggregate };

std::string_view context_name(ReferenceContext c);

struct ReferenceOccurrence {
    std::variant<CellAddress, CellRange> target;
    ReferenceContext context = ReferenceContext::Arithmetic;

    bool is_range() const noexcept { return std::holds_alternative<CellRange>(target); }
    friend bool operator==(const ReferenceOccurrence&, const ReferenceOccurrence&) = default;
};

struct ReferenceFinding {
    std::string name;  // the unresolved defined name
    std::string message;
};

/// Every reference occurrence of a formula, in tree order, with its usage
/// context. Multiple occurrences of one address are kept.
struct ReferenceSet {
    std::vector<ReferenceOccurrence> occurrences;
    std::vector<ReferenceFinding> findings;

    std::vector<CellAddress> cells() const;
    std::vector<CellRange> ranges() const;
    bool empty() const noexcept { return occurrences.empty(); }
};

using NameResolver = std::map<std::string, std::variant<CellAddress, CellRange>, std::less<>>;

/// Table arguments of VLOOKUP/HLOOKUP/MATCH are lookup-table, direct
/// arguments of SUM/SUMIF are aggregate, everything else arithmetic.
ReferenceSet extract_references(const Expr& e, const NameResolver& names = {});

/// Upper-cases ASCII letters.
std::string to_upper(std::string_view s);

}  // namespace gridlens
