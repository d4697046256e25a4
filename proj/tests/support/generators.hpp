#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridlens/workbook.hpp"

namespace gridlens::testing {

struct GenOptions {
    int max_cells = 200;
    int max_sheets = 4;
    // Restrict to what the reference interpreter below understands:
    // numbers, + - * / by constants, IF over comparisons, SUM, MIN, MAX, ABS.
    bool oracle_subset = false;
};

// Expression model the generator renders into formula text.
struct GenExpr {
    enum Kind { Num, Ref, Sum, Min, Max, Average, Abs, RoundUp, Add, Sub, Mul, Div, If, Compare, Text, Concat };
    Kind kind = Num;
    double num = 0;
    std::string text;
    std::string cmp;  // for Compare
    std::vector<CellAddress> refs;
    std::vector<CellRange> ranges;
    std::vector<GenExpr> kids;
};

struct GeneratedWorkbook {
    Workbook workbook;
    std::vector<std::string> sheets;
    std::map<CellAddress, GenExpr> formulas;
    std::map<CellAddress, Value> literals;
    // Cells each formula reads, ranges expanded.
    std::map<CellAddress, std::set<CellAddress>> reads;
};

GeneratedWorkbook generate_workbook(std::uint64_t seed, const GenOptions& options = {});

// Up to `n` formula cells picked deterministically from the seed.
std::vector<CellAddress> pick_kpis(const GeneratedWorkbook& g, std::uint64_t seed, std::size_t n);

// Plain breadth-first reachability over the generator's own read sets.
std::set<CellAddress> reachable_cells(const GeneratedWorkbook& g, std::span<const CellAddress> kpis);

// Recursive evaluation of an oracle-subset workbook with memoisation.
class ReferenceInterpreter {
public:
    explicit ReferenceInterpreter(const GeneratedWorkbook& g) : g_(g) {}
    double value(const CellAddress& a);

private:
    struct Result {
        double v = 0;
        bool blank = false;
    };
    Result eval(const GenExpr& e);
    const GeneratedWorkbook& g_;
    std::map<CellAddress, double> memo_;
};

}  // namespace gridlens::testing
