#include "gridlens/metrics.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "gridlens/error.hpp"

namespace gridlens {

namespace {

// Disciplines with at least one node, in workbook order; disciplines of
// unknown sheets follow alphabetically.
std::vector<std::string> present_disciplines(const ModelSlice& s) {
    std::set<std::string> present;
    for (const auto& a : s.graph.nodes()) present.insert(s.discipline_of(a));
    std::vector<std::string> out;
    for (auto& d : s.model.discipline_order())
        if (present.erase(d)) out.push_back(std::move(d));
    out.insert(out.end(), present.begin(), present.end());
    return out;
}

std::size_t position(const std::vector<std::string>& v, const std::string& x) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

}  // namespace

std::vector<DisciplineMetricsRow> discipline_metrics(const ModelSlice& s) {
    auto order = present_disciplines(s);
    std::vector<DisciplineMetricsRow> rows(order.size());
    std::vector<std::size_t> degree_sum(order.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) rows[i].discipline = order[i];
    const auto& g = s.graph;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        std::size_t d = position(order, s.discipline_of(g.node(i)));
        ++rows[d].cell_count;
        if (s.inputs.contains(g.node(i))) ++rows[d].input_count;
        degree_sum[d] += g.in_degree(i) + g.out_degree(i);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& r = rows[i];
        if (r.cell_count > 0) {
            r.pct_inputs = static_cast<double>(r.input_count) / static_cast<double>(r.cell_count);
            r.avg_valency = static_cast<double>(degree_sum[i]) / static_cast<double>(r.cell_count);
        }
    }
    return rows;
}

double average_valency(std::size_t nodes, std::size_t edges) {
    if (nodes == 0) throw EmptySliceError("valency of an empty slice is undefined");
    return 2.0 * static_cast<double>(edges) / static_cast<double>(nodes);
}

double global_valency(const ModelSlice& s) { return average_valency(s.cell_count(), s.reference_count()); }

std::size_t CouplingMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : direct)
        for (std::size_t x : row) t += x;
    return t;
}

CouplingMatrix make_coupling_matrix(std::vector<std::string> disciplines, std::vector<std::vector<std::size_t>> direct) {
    const std::size_t n = disciplines.size();
    CouplingMatrix m{std::move(disciplines), std::move(direct), std::vector<std::vector<bool>>(n, std::vector<bool>(n))};

    // Discipline graph: c -> r when c reads from r.
    std::vector<std::vector<std::size_t>> reads(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (r != c && m.direct[r][c] > 0) reads[c].push_back(r);

    for (std::size_t c = 0; c < n; ++c) {
        std::vector<char> seen(n, 0);
        std::deque<std::size_t> queue(reads[c].begin(), reads[c].end());
        for (std::size_t x : reads[c]) seen[x] = 1;
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            for (std::size_t y : reads[x]) {
                if (seen[y]) continue;
                seen[y] = 1;
                queue.push_back(y);
            }
        }
        for (std::size_t r = 0; r < n; ++r) m.indirect[r][c] = seen[r] && r != c && m.direct[r][c] == 0;
    }
    return m;
}

CouplingMatrix coupling_matrix(const ModelSlice& s) {
    auto order = present_disciplines(s);
    const auto& g = s.graph;
    std::vector<std::size_t> disc(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) disc[i] = position(order, s.discipline_of(g.node(i)));
    std::vector<std::vector<std::size_t>> direct(order.size(), std::vector<std::size_t>(order.size(), 0));
    for (const auto& e : g.edges()) ++direct[disc[e.precedent]][disc[e.dependent]];
    return make_coupling_matrix(std::move(order), std::move(direct));
}

std::vector<CouplingMetricsRow> coupling_metrics(const CouplingMatrix& m) {
    std::vector<CouplingMetricsRow> rows;
    const std::size_t n = m.size();
    for (std::size_t d = 0; d < n; ++d) {
        CouplingMetricsRow row{m.disciplines[d], 0, 0, 0.0};
        for (std::size_t o = 0; o < n; ++o) {
            if (o == d) continue;
            if (m.direct[d][o] > 0) ++row.afferent;
            if (m.direct[o][d] > 0) ++row.efferent;
        }
        std::size_t total = row.afferent + row.efferent;
        row.instability = total == 0 ? 0.0 : static_cast<double>(row.efferent) / static_cast<double>(total);
        rows.push_back(std::move(row));
    }
    return rows;
}

ValidationReport check_io_quadrant(const CouplingMatrix& m, const std::vector<std::string>& output_disciplines) {
    auto is_output = [&](const std::string& d) {
        return std::find(output_disciplines.begin(), output_disciplines.end(), d) != output_disciplines.end();
    };
    ValidationReport out;
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (!is_output(m.disciplines[r])) continue;
        for (std::size_t c = 0; c < m.size(); ++c) {
            if (is_output(m.disciplines[c]) || m.direct[r][c] == 0) continue;
            out.push_back({Severity::Warning, "input-reads-output", m.disciplines[c] + " <- " + m.disciplines[r],
                           "input model '" + m.disciplines[c] + "' reads " + std::to_string(m.direct[r][c]) +
                               " value(s) from output model '" + m.disciplines[r] + "'"});
        }
    }
    return out;
}

std::vector<std::string> infer_output_disciplines(const std::vector<DisciplineMetricsRow>& rows, double threshold) {
    std::vector<std::string> out;
    for (const auto& r : rows)
        if (r.pct_inputs < threshold) out.push_back(r.discipline);
    return out;
}

FunctionHistogram function_histogram(const ModelSlice& s) {
    FunctionHistogram h;
    for (const auto& sheet : s.model.sheets())
        for (const auto& [_, c] : sheet.cells)
            if (c.is_formula()) count_functions(c.formula().ast, h);
    return h;
}

std::vector<std::pair<std::string, std::size_t>> ranked(const FunctionHistogram& h) {
    std::vector<std::pair<std::string, std::size_t>> out(h.begin(), h.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

std::vector<std::pair<CellAddress, std::size_t>> top_referenced(const ModelSlice& s, std::size_t k) {
    const auto& g = s.graph;
    std::vector<std::pair<CellAddress, std::size_t>> all;
    all.reserve(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) all.emplace_back(g.node(i), g.in_degree(i));
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (all.size() > k) all.resize(k);
    return all;
}

ModelSummary summarize(const ModelSlice& s, std::string name) {
    return {std::move(name), s.cell_count(), s.reference_count(), function_histogram(s), discipline_metrics(s)};
}

EvolutionReport compare_models(const ModelSummary& a, const ModelSummary& b) {
    EvolutionReport r;
    r.before = a;
    r.after = b;
    r.cell_delta = static_cast<long long>(b.cell_count) - static_cast<long long>(a.cell_count);
    r.reference_delta = static_cast<long long>(b.reference_count) - static_cast<long long>(a.reference_count);
    for (const auto& [fn, n] : a.functions) r.function_deltas[fn] -= static_cast<long long>(n);
    for (const auto& [fn, n] : b.functions) r.function_deltas[fn] += static_cast<long long>(n);

    for (const auto& row : b.disciplines) {
        auto it = std::find_if(a.disciplines.begin(), a.disciplines.end(),
                               [&](const auto& x) { return x.discipline == row.discipline; });
        if (it == a.disciplines.end()) {
            r.added.push_back(row.discipline);
            continue;
        }
        r.discipline_deltas.push_back({row.discipline,
                                       static_cast<long long>(row.cell_count) - static_cast<long long>(it->cell_count),
                                       static_cast<long long>(row.input_count) - static_cast<long long>(it->input_count),
                                       row.avg_valency - it->avg_valency});
    }
    for (const auto& row : a.disciplines) {
        bool kept = std::any_of(b.disciplines.begin(), b.disciplines.end(),
                                [&](const auto& x) { return x.discipline == row.discipline; });
        if (!kept) r.removed.push_back(row.discipline);
    }
    return r;
}

EvolutionReport compare_models(const ModelSlice& a, const ModelSlice& b) {
    return compare_models(summarize(a, "a"), summarize(b, "b"));
}

}  // namespace gridlens
