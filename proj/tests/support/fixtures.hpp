#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gridlens/factors.hpp"
#include "gridlens/workbook.hpp"

namespace gridlens::testing {

std::filesystem::path fixture_dir();
std::string read_text(const std::filesystem::path& p);

// Discipline-to-discipline counts; counts[r][c] references from r used by c.
struct CountMatrix {
    std::vector<std::string> codes;
    std::vector<std::vector<std::size_t>> counts;
};

CountMatrix read_count_matrix(const std::filesystem::path& tsv);

// One sheet per code, in `sheet_order`. For every counts[r][c] = n the sheet
// of c holds n formulas reading one provider cell on the sheet of r.
struct CouplingWorkbook {
    Workbook workbook;
    std::vector<CellAddress> formulas;
};
CouplingWorkbook coupling_workbook(const CountMatrix& m, const std::vector<std::string>& sheet_order);

// The coupling fixture: sheets in reporting order with discipline names.
CouplingWorkbook published_coupling_workbook();

// Acyclic single-sheet model with exactly `cells` cells and `references`
// distinct references, all feeding the last formula (returned as the KPI).
// `functions` fixes how many formulas call each of SUM, IF and TYPE.
struct SizedWorkbook {
    Workbook workbook;
    CellAddress kpi;
    std::vector<CellAddress> inputs;
};
SizedWorkbook sized_workbook(std::size_t cells, std::size_t references,
                             const std::map<std::string, std::size_t>& functions, std::uint64_t seed);

// y = c0 + sum c_j x_j on sheet "Model", inputs on sheet "Inputs".
struct LinearModel {
    Workbook workbook;
    CellAddress kpi;
    double intercept = 0;
    std::vector<double> coefficients;
    std::vector<FactorFileEntry> factors;
};
LinearModel linear_model(std::size_t k, std::uint64_t seed);

// Two KPIs over disjoint input groups: Model!B1 reads Inputs!A1..A{left},
// Model!B2 reads the remaining inputs.
struct TwoKpiModel {
    Workbook workbook;
    std::vector<CellAddress> kpis;
    std::vector<FactorFileEntry> factors;
    std::size_t left = 0;
};
TwoKpiModel two_kpi_model(std::size_t left, std::size_t right, std::uint64_t seed);

std::string factor_file(const std::vector<FactorFileEntry>& factors);

}  // namespace gridlens::testing
