#include <cmath>
#include <cstdio>

#include "gridlens/error.hpp"
#include "gridlens/report.hpp"
#include "json_util.hpp"

namespace gridlens {

using nlohmann::json;

namespace {

std::string fixed2(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string signed_count(long long d) { return d > 0 ? "+" + std::to_string(d) : std::to_string(d); }

std::string signed_fixed2(double d) {
    std::string s = fixed2(d);
    if (s == "-0.00") s = "0.00";
    return d > 0 && s != "0.00" ? "+" + s : s;
}

std::string coupling_cell(const CouplingMatrix& m, std::size_t r, std::size_t c) {
    if (m.direct[r][c] > 0) return std::to_string(m.direct[r][c]);
    return m.indirect[r][c] ? "~" : "";
}

std::string render_tables_csv(const std::vector<Table>& tables) {
    std::string out;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) out += '\n';
        out += render_csv(tables[i]);
    }
    return out;
}

std::string render_tables_markdown(const std::vector<Table>& tables) {
    std::string out;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) out += '\n';
        out += render_markdown(tables[i]);
    }
    return out;
}

json rows_json(const std::vector<DisciplineMetricsRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"discipline", r.discipline},
                       {"cellCount", r.cell_count},
                       {"inputCount", r.input_count},
                       {"pctInputs", r.pct_inputs},
                       {"avgValency", r.avg_valency}});
    return out;
}

json summary_json(const ModelSummary& s) {
    return {{"name", s.name},
            {"cellCount", s.cell_count},
            {"referenceCount", s.reference_count},
            {"functions", s.functions},
            {"disciplines", rows_json(s.disciplines)}};
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    if (name == "json") return ReportFormat::Json;
    throw UnknownFormatError("unknown report format '" + std::string(name) + "' (use csv, markdown or json)");
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string percent(double fraction) { return std::to_string(std::lround(fraction * 100.0)) + "%"; }

std::string render_csv(const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

std::string render_markdown(const Table& t) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '|') out += '\\';
            out += c == '\n' ? ' ' : c;
        }
        return out;
    };
    std::string out = "### " + t.title + "\n\n";
    auto line = [&](const std::vector<std::string>& cells) {
        out += '|';
        for (const auto& c : cells) out += ' ' + escape(c) + " |";
        out += '\n';
    };
    line(t.header);
    out += '|';
    for (std::size_t i = 0; i < t.header.size(); ++i) out += " --- |";
    out += '\n';
    for (const auto& r : t.rows) line(r);
    return out;
}

std::vector<Table> metrics_tables(const MetricsBundle& m) {
    std::vector<Table> out;

    Table summary{"summary", "Model size", {"Metric", "Value"}, {}};
    summary.rows.push_back({"Cells", std::to_string(m.cell_count)});
    summary.rows.push_back({"References", std::to_string(m.reference_count)});
    summary.rows.push_back({"Average valency", fixed2(m.global_valency)});
    out.push_back(std::move(summary));

    Table disc{"discipline_metrics", "Discipline metrics", {"Discipline", "Cells", "Inputs", "% Inputs", "Avg Valency"}, {}};
    for (const auto& r : m.disciplines)
        disc.rows.push_back({r.discipline, std::to_string(r.cell_count), std::to_string(r.input_count),
                             percent(r.pct_inputs), fixed2(r.avg_valency)});
    out.push_back(std::move(disc));

    Table matrix{"coupling_matrix", "Coupling matrix (row provides, column uses; ~ indirect)", {"Provider"}, {}};
    for (const auto& d : m.coupling.disciplines) matrix.header.push_back(d);
    for (std::size_t r = 0; r < m.coupling.size(); ++r) {
        std::vector<std::string> row{m.coupling.disciplines[r]};
        for (std::size_t c = 0; c < m.coupling.size(); ++c) row.push_back(coupling_cell(m.coupling, r, c));
        matrix.rows.push_back(std::move(row));
    }
    out.push_back(std::move(matrix));

    Table coupling{"coupling_metrics", "Coupling metrics", {"Discipline", "Afferent", "Efferent", "Instability"}, {}};
    for (const auto& r : m.coupling_metrics)
        coupling.rows.push_back(
            {r.discipline, std::to_string(r.afferent), std::to_string(r.efferent), percent(r.instability)});
    out.push_back(std::move(coupling));

    Table functions{"function_histogram", "Function usage", {"Function", "Count"}, {}};
    for (const auto& [name, n] : ranked(m.functions)) functions.rows.push_back({name, std::to_string(n)});
    out.push_back(std::move(functions));

    Table top{"top_referenced", "Most referenced cells", {"Cell", "Dependents"}, {}};
    for (const auto& [a, n] : m.top_referenced) top.rows.push_back({format_address(a), std::to_string(n)});
    out.push_back(std::move(top));

    Table findings{"findings", "Findings", {"Severity", "Kind", "Location", "Message"}, {}};
    for (const auto& f : m.findings)
        findings.rows.push_back({std::string(severity_name(f.severity)), f.kind, f.location, f.message});
    out.push_back(std::move(findings));
    return out;
}

std::vector<Table> evolution_tables(const EvolutionReport& r) {
    std::vector<Table> out;
    const std::string a = r.before.name.empty() ? "Before" : r.before.name;
    const std::string b = r.after.name.empty() ? "After" : r.after.name;

    Table summary{"comparison", "Model comparison", {"Metric", a, b, "Delta"}, {}};
    summary.rows.push_back({"Cells", std::to_string(r.before.cell_count), std::to_string(r.after.cell_count),
                            signed_count(r.cell_delta)});
    summary.rows.push_back({"References", std::to_string(r.before.reference_count),
                            std::to_string(r.after.reference_count), signed_count(r.reference_delta)});
    auto valency = [](const ModelSummary& s) {
        return s.cell_count ? 2.0 * static_cast<double>(s.reference_count) / static_cast<double>(s.cell_count) : 0.0;
    };
    summary.rows.push_back({"Average valency", fixed2(valency(r.before)), fixed2(valency(r.after)),
                            signed_fixed2(valency(r.after) - valency(r.before))});
    out.push_back(std::move(summary));

    Table functions{"function_deltas", "Function usage", {"Function", a, b, "Delta"}, {}};
    for (const auto& [name, d] : r.function_deltas) {
        auto count = [&](const ModelSummary& s) {
            auto it = s.functions.find(name);
            return it == s.functions.end() ? std::size_t{0} : it->second;
        };
        functions.rows.push_back({name, std::to_string(count(r.before)), std::to_string(count(r.after)), signed_count(d)});
    }
    out.push_back(std::move(functions));

    Table disc{"discipline_deltas", "Discipline changes", {"Discipline", "Cells", "Inputs", "Avg Valency"}, {}};
    for (const auto& d : r.discipline_deltas)
        disc.rows.push_back({d.discipline, signed_count(d.cell_count), signed_count(d.input_count),
                             signed_fixed2(d.avg_valency)});
    for (const auto& d : r.added) disc.rows.push_back({d, "added", "", ""});
    for (const auto& d : r.removed) disc.rows.push_back({d, "removed", "", ""});
    out.push_back(std::move(disc));
    return out;
}

std::string write_report(const MetricsBundle& m, ReportFormat format) {
    if (format == ReportFormat::Csv) return render_tables_csv(metrics_tables(m));
    if (format == ReportFormat::Markdown) return render_tables_markdown(metrics_tables(m));

    json coupling = json::array();
    for (const auto& r : m.coupling_metrics)
        coupling.push_back(
            {{"discipline", r.discipline}, {"afferent", r.afferent}, {"efferent", r.efferent}, {"instability", r.instability}});
    json top = json::array();
    for (const auto& [a, n] : m.top_referenced) top.push_back({{"cell", format_address(a)}, {"dependents", n}});
    json findings = json::array();
    for (const auto& f : m.findings)
        findings.push_back({{"severity", severity_name(f.severity)},
                            {"kind", f.kind},
                            {"location", f.location},
                            {"message", f.message}});
    json doc = {{"cellCount", m.cell_count},
                {"referenceCount", m.reference_count},
                {"globalValency", m.global_valency},
                {"disciplineMetrics", rows_json(m.disciplines)},
                {"couplingMatrix",
                 {{"disciplines", m.coupling.disciplines},
                  {"direct", m.coupling.direct},
                  {"indirect", m.coupling.indirect}}},
                {"couplingMetrics", std::move(coupling)},
                {"functions", m.functions},
                {"topReferenced", std::move(top)},
                {"findings", std::move(findings)}};
    return doc.dump(2) + "\n";
}

std::string write_report(const EvolutionReport& r, ReportFormat format) {
    if (format == ReportFormat::Csv) return render_tables_csv(evolution_tables(r));
    if (format == ReportFormat::Markdown) return render_tables_markdown(evolution_tables(r));

    json disc = json::array();
    for (const auto& d : r.discipline_deltas)
        disc.push_back({{"discipline", d.discipline},
                        {"cellCount", d.cell_count},
                        {"inputCount", d.input_count},
                        {"avgValency", d.avg_valency}});
    json doc = {{"before", summary_json(r.before)},
                {"after", summary_json(r.after)},
                {"cellDelta", r.cell_delta},
                {"referenceDelta", r.reference_delta},
                {"functionDeltas", r.function_deltas},
                {"disciplineDeltas", std::move(disc)},
                {"added", r.added},
                {"removed", r.removed}};
    return doc.dump(2) + "\n";
}

std::string sensitivity_csv(const SensitivityReport& r) {
    Table t{"sensitivity", "Sensitivity", {"factor", "cell", "discipline"}, {}};
    for (const auto& k : r.kpis) t.header.push_back("raw:" + format_address(k));
    for (const auto& k : r.kpis) t.header.push_back("normalized:" + format_address(k));
    for (std::size_t j : report_order(r)) {
        const auto& f = r.factors[j];
        std::vector<std::string> row{f.name, format_address(f.cell), f.discipline};
        for (std::size_t k = 0; k < r.kpis.size(); ++k) row.push_back(format_number(r.raw[j][k]));
        for (std::size_t k = 0; k < r.kpis.size(); ++k)
            row.push_back(j < r.normalized.size() ? format_number(r.normalized[j][k]) : "");
        t.rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < r.dummy.size(); ++j) {
        std::vector<std::string> row{"dummy" + std::to_string(j + 1), "", ""};
        for (std::size_t k = 0; k < r.kpis.size(); ++k) row.push_back(format_number(r.dummy[j][k]));
        for (std::size_t k = 0; k < r.kpis.size(); ++k) row.push_back("");
        t.rows.push_back(std::move(row));
    }
    return render_csv(t);
}

std::string design_csv(const PBDesign& d, const std::vector<FactorSpec>& factors) {
    Table t{"design", "Design", {"run"}, {}};
    for (std::size_t j = 0; j < d.columns(); ++j)
        t.header.push_back(j < factors.size() ? factors[j].name : "dummy" + std::to_string(j - d.factors() + 1));
    for (std::size_t i = 0; i < d.runs(); ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (std::size_t j = 0; j < d.columns(); ++j) row.push_back(d.level(i, j) > 0 ? "+1" : "-1");
        t.rows.push_back(std::move(row));
    }
    return render_csv(t);
}

std::string responses_csv(const ResponseMatrix& r) {
    Table t{"responses", "Responses", {"run"}, {}};
    for (const auto& k : r.kpis) t.header.push_back(format_address(k));
    std::vector<std::string> base{"baseline"};
    for (double v : r.baseline) base.push_back(std::isnan(v) ? "" : format_number(v));
    t.rows.push_back(std::move(base));
    std::size_t f = 0;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        std::vector<std::string> row{std::to_string(i)};
        if (f < r.failed_runs.size() && r.failed_runs[f].run == i) {
            for (std::size_t k = 0; k < r.kpis.size(); ++k)
                row.push_back("#" + std::string(error_name(r.failed_runs[f].kind)));
            ++f;
        } else {
            for (double v : r.values[i]) row.push_back(format_number(v));
        }
        t.rows.push_back(std::move(row));
    }
    return render_csv(t);
}

}  // namespace gridlens
