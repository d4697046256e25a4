#include "doctest.h"

#include <algorithm>
#include <random>

#include "generators.hpp"
#include "gridlens/error.hpp"
#include "gridlens/formula.hpp"

using namespace gridlens;

namespace {

CellAddress at(const char* text, const char* sheet = "S") { return *parse_address(text, sheet); }
CellRange span(const char* text, const char* sheet = "S") { return *parse_range(text, sheet); }

std::size_t error_offset(std::string_view text) {
    try {
        parse_formula(text, "S");
    } catch (const FormulaParseError& e) {
        return e.offset();
    }
    FAIL("no parse error for " << text);
    return 0;
}

// Random syntax trees over the whole grammar.
struct TreeGen {
    std::mt19937_64 rng;
    std::size_t pick(std::size_t n) { return rng() % n; }

    Expr leaf() {
        static const char* sheets[] = {"S", "Out Water", "T2"};
        switch (pick(6)) {
            case 0: return number(static_cast<double>(pick(1000)) / 8.0);
            case 1: return text(pick(2) ? "a\"b" : "");
            case 2: return boolean(pick(2) == 0);
            case 3: {
                CellAddress a{sheets[pick(3)], 1 + static_cast<int>(pick(30)), 1 + static_cast<int>(pick(99))};
                return cell(a, a.sheet != "S");
            }
            case 4: {
                std::string s = sheets[pick(3)];
                CellRange r({s, 1 + static_cast<int>(pick(5)), 1 + static_cast<int>(pick(9))},
                            {s, 1 + static_cast<int>(pick(5)), 1 + static_cast<int>(pick(9))});
                return range(r, s != "S");
            }
            default: return Expr{NameRef{pick(2) ? "RATE" : "GROWTH_2"}};
        }
    }

    Expr tree(int depth) {
        if (depth == 0 || pick(4) == 0) return leaf();
        switch (pick(3)) {
            case 0: return unary(pick(2) ? UnaryOperator::Minus : UnaryOperator::Plus, tree(depth - 1));
            case 1: return binary(static_cast<BinaryOperator>(pick(12)), tree(depth - 1), tree(depth - 1));
            default: {
                static const char* fns[] = {"SUM", "IF", "VLOOKUP", "FOO", "AND"};
                std::vector<Expr> args;
                for (std::size_t i = 0, n = pick(4); i < n; ++i) args.push_back(tree(depth - 1));
                return call(fns[pick(5)], std::move(args));
            }
        }
    }
};

void reference_leaves(const Expr& e, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CellRef>) out.push_back(format_address(n.address));
            else if constexpr (std::is_same_v<T, RangeRef>) out.push_back(format_range(n.range) + "#r");
            else if constexpr (std::is_same_v<T, UnaryOp>) reference_leaves(n.operand[0], out);
            else if constexpr (std::is_same_v<T, BinaryOp>) {
                reference_leaves(n.operands[0], out);
                reference_leaves(n.operands[1], out);
            } else if constexpr (std::is_same_v<T, FunctionCall>) {
                for (const auto& a : n.args) reference_leaves(a, out);
            }
        },
        e.node);
}

}  // namespace

TEST_CASE("function call plus number") {
    Expr e = parse_formula("=SUM(B1:B3)+2", "S");
    CHECK(e == binary(BinaryOperator::Add, call("SUM", {range(span("B1:B3"))}), number(2)));
}

TEST_CASE("IF with quoted sheet reference") {
    Expr e = parse_formula("=IF(A1>0,'Out Water'!B2,0)", "S");
    Expr expected = call("IF", {binary(BinaryOperator::Greater, cell(at("A1")), number(0)),
                                cell(CellAddress{"Out Water", 2, 2}, true), number(0)});
    CHECK(e == expected);
}

TEST_CASE("parse errors report the offset") {
    CHECK(error_offset("=1+*2") == 3);
    CHECK(error_offset("=A1+") == 4);
    CHECK(error_offset("=SUM(1,") == 7);
    CHECK(error_offset("=(1") == 3);
    CHECK(error_offset("=\"abc") == 5);
    CHECK(error_offset("1+2") == 0);
    CHECK(error_offset("=1 2") == 3);
}

TEST_CASE("operator precedence") {
    CHECK(parse_formula("=1+2*3") ==
          binary(BinaryOperator::Add, number(1), binary(BinaryOperator::Multiply, number(2), number(3))));
    CHECK(parse_formula("=-2^2") == binary(BinaryOperator::Power, unary(UnaryOperator::Minus, number(2)), number(2)));
    CHECK(parse_formula("=2^3^2") ==
          binary(BinaryOperator::Power, binary(BinaryOperator::Power, number(2), number(3)), number(2)));
    CHECK(parse_formula("=1&2+3") ==
          binary(BinaryOperator::Concat, number(1), binary(BinaryOperator::Add, number(2), number(3))));
    CHECK(parse_formula("=1<2&3") ==
          binary(BinaryOperator::Less, number(1), binary(BinaryOperator::Concat, number(2), number(3))));
    CHECK(parse_formula("=10-4-3") ==
          binary(BinaryOperator::Subtract, binary(BinaryOperator::Subtract, number(10), number(4)), number(3)));
}

TEST_CASE("names, booleans and absolute markers") {
    CHECK(parse_formula("=sum(a1)", "S") == call("SUM", {cell(at("A1"))}));
    CHECK(parse_formula("=TRUE") == boolean(true));
    CHECK(parse_formula("=$B$2", "S") == cell(at("B2")));
    CHECK(parse_formula("=TaxRate*2") == binary(BinaryOperator::Multiply, Expr{NameRef{"TaxRate"}}, number(2)));
    CHECK(parse_formula("=1.5e3") == number(1500));
    CHECK(parse_formula("=\"say \"\"hi\"\"\"") == text("say \"hi\""));
    CHECK(parse_formula("= 1 + A1 ", "S") == binary(BinaryOperator::Add, number(1), cell(at("A1"))));
    CHECK(parse_formula("=S!A1:S!B2", "T") == range(span("A1:B2", "S"), true));
}

TEST_CASE("serialization is normalized") {
    CHECK(serialize(parse_formula("= sum( a1 , 2 )", "S")) == "=SUM(A1,2)");
    CHECK(serialize(parse_formula("=(1+2)*3")) == "=(1+2)*3");
    CHECK(serialize(parse_formula("=1+(2*3)")) == "=1+2*3");
    CHECK(serialize(parse_formula("=1-(2-3)")) == "=1-(2-3)");
    CHECK(serialize(parse_formula("=-(2^2)")) == "=-(2^2)");
    CHECK(serialize(parse_formula("='Out Water'!b2+'Plain'!A1", "S")) == "='Out Water'!B2+Plain!A1");
    CHECK(serialize(parse_formula("=\"a\"\"b\"")) == "=\"a\"\"b\"");
}

TEST_CASE("reference contexts") {
    auto refs = extract_references(parse_formula("=SUM(B1:B3)+C1", "S"));
    REQUIRE(refs.occurrences.size() == 2);
    CHECK(refs.occurrences[0] == ReferenceOccurrence{span("B1:B3"), ReferenceContext::Aggregate});
    CHECK(refs.occurrences[1] == ReferenceOccurrence{at("C1"), ReferenceContext::Arithmetic});

    refs = extract_references(parse_formula("=VLOOKUP(A1,D1:F9,2,FALSE)", "S"));
    REQUIRE(refs.occurrences.size() == 2);
    CHECK(refs.occurrences[0] == ReferenceOccurrence{at("A1"), ReferenceContext::Arithmetic});
    CHECK(refs.occurrences[1] == ReferenceOccurrence{span("D1:F9"), ReferenceContext::LookupTable});

    CHECK(extract_references(parse_formula("=2+2")).empty());
}

TEST_CASE("defined names resolve to their targets") {
    NameResolver names;
    names["RATE"] = at("B7", "Inputs");
    names["TABLE"] = span("A1:A20", "Inputs");
    auto refs = extract_references(parse_formula("=Rate*SUM(table)+Missing"), names);
    REQUIRE(refs.occurrences.size() == 2);
    CHECK(refs.occurrences[0].target == std::variant<CellAddress, CellRange>(at("B7", "Inputs")));
    CHECK(refs.occurrences[1].context == ReferenceContext::Aggregate);
    REQUIRE(refs.findings.size() == 1);
    CHECK(refs.findings[0].name == "Missing");
}

TEST_CASE("function counting includes nested calls") {
    std::map<std::string, std::size_t> counts;
    count_functions(parse_formula("=SUM(A1:A2)"), counts);
    count_functions(parse_formula("=IF(A1>0,SUM(B1:B2),0)"), counts);
    CHECK(counts == std::map<std::string, std::size_t>{{"IF", 1}, {"SUM", 2}});
    CHECK(is_supported_function("VLOOKUP"));
    CHECK_FALSE(is_supported_function("FOO"));
    CHECK(std::is_sorted(supported_functions().begin(), supported_functions().end()));
}

TEST_CASE("property: serialize then parse reproduces random trees") {
    TreeGen gen{std::mt19937_64(11)};
    for (int i = 0; i < 3000; ++i) {
        Expr e = gen.tree(4);
        std::string text = serialize(e);
        Expr back = parse_formula(text, "S");
        REQUIRE_MESSAGE(back == e, text);
        CHECK(serialize(back) == text);
    }
}

TEST_CASE("property: generated formula text round-trips") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        auto g = testing::generate_workbook(seed);
        for (const auto& sheet : g.workbook.sheets())
            for (const auto& [a, c] : sheet.cells) {
                if (!c.is_formula()) continue;
                Expr once = parse_formula(c.formula().text, a.sheet);
                REQUIRE(parse_formula(serialize(once), a.sheet) == once);
            }
    }
}

TEST_CASE("property: extracted references are exactly the reference leaves") {
    TreeGen gen{std::mt19937_64(12)};
    for (int i = 0; i < 3000; ++i) {
        Expr e = gen.tree(4);
        std::vector<std::string> expected;
        reference_leaves(e, expected);
        std::vector<std::string> actual;
        for (const auto& o : extract_references(e).occurrences) {
            if (o.is_range()) actual.push_back(format_range(std::get<CellRange>(o.target)) + "#r");
            else actual.push_back(format_address(std::get<CellAddress>(o.target)));
        }
        std::sort(expected.begin(), expected.end());
        std::sort(actual.begin(), actual.end());
        REQUIRE(actual == expected);
    }
}
