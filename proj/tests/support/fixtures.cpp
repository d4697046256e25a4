#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifndef GRIDLENS_FIXTURE_DIR
#error "GRIDLENS_FIXTURE_DIR must be defined"
#endif

namespace gridlens::testing {

std::filesystem::path fixture_dir() { return GRIDLENS_FIXTURE_DIR; }

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CountMatrix read_count_matrix(const std::filesystem::path& tsv) {
    std::istringstream in(read_text(tsv));
    CountMatrix m;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == '\t') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    std::getline(in, line);
    auto header = split(line);
    m.codes.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line);
        if (f.size() != m.codes.size() + 1 || f[0] != m.codes[m.counts.size()])
            throw std::runtime_error("malformed count matrix row: " + line);
        std::vector<std::size_t> row;
        for (std::size_t i = 1; i < f.size(); ++i) row.push_back(std::stoul(f[i]));
        m.counts.push_back(std::move(row));
    }
    if (m.counts.size() != m.codes.size()) throw std::runtime_error("count matrix is not square");
    return m;
}

CouplingWorkbook coupling_workbook(const CountMatrix& m, const std::vector<std::string>& sheet_order) {
    CouplingWorkbook out;
    for (const auto& s : sheet_order) out.workbook.add_sheet(s);
    const std::size_t n = m.codes.size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t count = m.counts[r][c];
            if (count == 0) continue;
            CellAddress provider{m.codes[r], 1, static_cast<int>(c) + 1};
            if (!out.workbook.find_cell(provider)) out.workbook.set_cell(make_literal_cell(provider, Value(1.0)));
            for (std::size_t i = 0; i < count; ++i) {
                CellAddress a{m.codes[c], static_cast<int>(r) + 2, static_cast<int>(i) + 1};
                out.workbook.set_cell(make_formula_cell(a, "=" + format_address(provider)));
                out.formulas.push_back(a);
            }
        }
    }
    std::sort(out.formulas.begin(), out.formulas.end());
    return out;
}

CouplingWorkbook published_coupling_workbook() {
    static const std::vector<std::string> order{"01LU", "02SE", "03PT",  "PTCo",  "04ED",  "05Lo",
                                                "LoCo", "Wa",   "08ES",  "ESCo",  "CF",    "SS_ED",
                                                "SS_ES", "SS_Lo", "SS_PT", "SS_SE", "SS_W", "Out"};
    CouplingWorkbook out = coupling_workbook(read_count_matrix(fixture_dir() / "coupling_matrix.tsv"), order);
    apply_disciplines(out.workbook, read_text(fixture_dir() / "coupling_disciplines.json"));
    return out;
}

SizedWorkbook sized_workbook(std::size_t cells, std::size_t references,
                             const std::map<std::string, std::size_t>& functions, std::uint64_t seed) {
    const std::size_t inputs = std::max<std::size_t>(1, cells / 3);
    const std::size_t formulas = cells - inputs;
    if (formulas == 0 || references < cells - 1) throw std::invalid_argument("too few references to connect the model");

    std::mt19937_64 rng(seed);
    auto input_at = [](std::size_t i) { return CellAddress{"Model", 1, static_cast<int>(i) + 1}; };
    auto formula_at = [](std::size_t i) { return CellAddress{"Model", 2, static_cast<int>(i) + 1}; };

    std::vector<std::vector<CellAddress>> reads(formulas);
    std::vector<std::set<CellAddress>> seen(formulas);
    auto add = [&](std::size_t f, const CellAddress& a) {
        if (!seen[f].insert(a).second) return false;
        reads[f].push_back(a);
        return true;
    };
    for (std::size_t f = 1; f < formulas; ++f) add(f, formula_at(f - 1));
    for (std::size_t i = 0; i < inputs; ++i) add(i % formulas, input_at(i));
    std::size_t extra = references - (formulas - 1) - inputs;
    for (std::size_t attempts = 0; extra > 0 && attempts < 100 * references; ++attempts) {
        const std::size_t f = rng() % formulas;
        const std::size_t pool = inputs + f;
        const std::size_t j = rng() % pool;
        if (add(f, j < inputs ? input_at(j) : formula_at(j - inputs))) --extra;
    }
    if (extra > 0) throw std::invalid_argument("could not place every reference");

    std::vector<std::string> wrappers(formulas);
    {
        std::vector<std::size_t> order(formulas);
        for (std::size_t i = 0; i < formulas; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t next = 0;
        for (const auto& [fn, n] : functions)
            for (std::size_t i = 0; i < n; ++i) wrappers.at(order.at(next++)) = fn;
    }

    SizedWorkbook out;
    out.workbook.add_sheet("Model");
    for (std::size_t i = 0; i < inputs; ++i) {
        out.workbook.set_cell(make_literal_cell(input_at(i), Value(static_cast<double>(1 + i % 7))));
        out.inputs.push_back(input_at(i));
    }
    for (std::size_t f = 0; f < formulas; ++f) {
        std::vector<std::string> r;
        for (const auto& a : reads[f]) r.push_back(format_local(a));
        auto join = [&](std::size_t from, const char* sep) {
            std::string s;
            for (std::size_t i = from; i < r.size(); ++i) s += (i > from ? sep : "") + r[i];
            return s;
        };
        std::string text;
        const std::string& w = wrappers[f];
        if (w == "SUM") {
            text = "=SUM(" + join(0, ",") + ")";
        } else if (w == "IF") {
            if (r.size() >= 3) text = "=IF(" + r[0] + ">3," + r[1] + "," + r[2] + ")" + (r.size() > 3 ? "+" + join(3, "+") : "");
            else if (r.size() == 2) text = "=IF(" + r[0] + ">3," + r[1] + ",1)";
            else text = "=IF(" + r[0] + ">3," + r[0] + ",1)";
        } else if (w == "TYPE") {
            text = "=TYPE(" + r[0] + ")" + (r.size() > 1 ? "+" + join(1, "+") : "");
        } else if (!w.empty()) {
            throw std::invalid_argument("unsupported wrapper " + w);
        } else {
            text = "=" + join(0, "+") + "/" + std::to_string(r.size());
        }
        out.workbook.set_cell(make_formula_cell(formula_at(f), text));
    }
    out.kpi = formula_at(formulas - 1);
    return out;
}

namespace {

double rounded(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

LinearModel linear_model(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.5, 5.0), low(-10.0, 10.0), width(0.5, 20.0);
    LinearModel m;
    m.workbook.add_sheet("Inputs");
    m.workbook.add_sheet("Model");
    m.intercept = rounded(low(rng));
    std::string text = "=" + format_number(m.intercept);
    for (std::size_t j = 0; j < k; ++j) {
        double c = rounded(magnitude(rng)) * (rng() % 2 ? 1.0 : -1.0);
        double lo = rounded(low(rng));
        double hi = rounded(lo + width(rng));
        CellAddress x{"Inputs", 1, static_cast<int>(j) + 1};
        m.workbook.set_cell(make_literal_cell(x, Value((lo + hi) / 2)));
        m.coefficients.push_back(c);
        m.factors.push_back({x, lo, hi, "x" + std::to_string(j + 1)});
        text += "+" + format_number(c) + "*Inputs!" + format_local(x);
    }
    m.kpi = CellAddress{"Model", 2, 1};
    m.workbook.set_cell(make_formula_cell(m.kpi, text));
    return m;
}

TwoKpiModel two_kpi_model(std::size_t left, std::size_t right, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(0.5, 5.0), low(0.0, 10.0), width(1.0, 10.0);
    TwoKpiModel m;
    m.left = left;
    m.workbook.add_sheet("Inputs");
    m.workbook.add_sheet("Model");
    std::string a = "=0", b = "=0";
    for (std::size_t j = 0; j < left + right; ++j) {
        CellAddress x{"Inputs", 1, static_cast<int>(j) + 1};
        double lo = rounded(low(rng)), hi = rounded(lo + width(rng));
        m.workbook.set_cell(make_literal_cell(x, Value(lo)));
        m.factors.push_back({x, lo, hi, "x" + std::to_string(j + 1)});
        std::string term = "+" + format_number(rounded(coef(rng))) + "*Inputs!" + format_local(x);
        (j < left ? a : b) += term;
    }
    m.kpis = {CellAddress{"Model", 2, 1}, CellAddress{"Model", 2, 2}};
    m.workbook.set_cell(make_formula_cell(m.kpis[0], a));
    m.workbook.set_cell(make_formula_cell(m.kpis[1], b));
    return m;
}

std::string factor_file(const std::vector<FactorFileEntry>& factors) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& f : factors) {
        nlohmann::json e = {{"cell", format_address(f.cell)}, {"min", f.min}, {"max", f.max}};
        if (f.name) e["name"] = *f.name;
        list.push_back(std::move(e));
    }
    return nlohmann::json{{"factors", std::move(list)}}.dump(2);
}

}  // namespace gridlens::testing
