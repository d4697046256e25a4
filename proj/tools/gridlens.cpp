// gridlens: slice, measure and screen spreadsheet models from the command line.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gridlens/artifact.hpp"
#include "gridlens/error.hpp"
#include "gridlens/export.hpp"
#include "gridlens/factors.hpp"
#include "gridlens/graph.hpp"
#include "gridlens/metrics.hpp"
#include "gridlens/report.hpp"
#include "gridlens/sensitivity.hpp"
#include "gridlens/validation.hpp"
#include "gridlens/workbook.hpp"

namespace fs = std::filesystem;
using namespace gridlens;

namespace {

enum Exit { kOk = 0, kInternal = 1, kBadInput = 2, kUnknownKpi = 3, kCycle = 4, kFailedRuns = 5 };

class IoError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw IoError("cannot write '" + path.string() + "'");
}

std::string plural(std::size_t n, const char* noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

std::vector<CellAddress> parse_kpis(const std::vector<std::string>& texts) {
    std::vector<CellAddress> out;
    for (const auto& t : texts) {
        auto a = parse_address(t);
        if (!a || t.find('!') == std::string::npos) throw SchemaError("KPI '" + t + "' is not a Sheet!Cell address");
        out.push_back(*a);
    }
    return out;
}

ModelSlice read_slice(const std::string& path) { return load_slice(read_file(path)); }

struct SliceArgs {
    std::string workbook;
    std::vector<std::string> kpis;
    std::string disciplines;
    std::string out;
    std::size_t threshold = kDefaultCollapseThreshold;
};

int run_slice(const SliceArgs& a) {
    Workbook wb = load_workbook(read_file(a.workbook));
    if (!a.disciplines.empty()) apply_disciplines(wb, read_file(a.disciplines));
    const auto kpis = parse_kpis(a.kpis);
    ModelSlice s = slice(wb, build_graph(wb, a.threshold), kpis);

    auto cycles = find_cycles(s.graph);
    if (!cycles.empty()) {
        for (const auto& c : cycles) {
            std::string line = "cycle:";
            for (const auto& cell : c) line += " " + format_address(cell);
            std::cerr << line << "\n";
        }
        return kCycle;
    }
    if (!a.out.empty()) write_file(a.out, save_slice(s));
    std::cout << plural(s.cell_count(), "cell") << ", " << plural(s.inputs.size(), "input") << ", "
              << plural(s.reference_count(), "reference") << "\n";
    return kOk;
}

struct MetricsArgs {
    std::string slice;
    std::string format = "csv";
    std::string out;
    std::size_t top = 10;
    bool check_quadrant = false;
    std::vector<std::string> output_disciplines;
};

int run_metrics(const MetricsArgs& a) {
    const ReportFormat format = parse_report_format(a.format);
    ModelSlice s = read_slice(a.slice);
    MetricsBundle m = compute_metrics(s, a.top);
    if (a.check_quadrant) {
        auto outputs = a.output_disciplines.empty() ? infer_output_disciplines(m.disciplines) : a.output_disciplines;
        for (auto& f : check_io_quadrant(m.coupling, outputs)) m.findings.push_back(std::move(f));
    }

    if (a.out.empty()) {
        std::cout << write_report(m, format);
        return kOk;
    }
    const fs::path dir(a.out);
    switch (format) {
        case ReportFormat::Csv:
            for (const auto& t : metrics_tables(m)) write_file(dir / (t.name + ".csv"), render_csv(t));
            break;
        case ReportFormat::Markdown:
            write_file(dir / "metrics.md", write_report(m, format));
            break;
        case ReportFormat::Json:
            write_file(dir / "metrics.json", write_report(m, format));
            break;
    }
    std::cout << plural(m.cell_count, "cell") << ", " << plural(m.reference_count, "reference") << ", valency "
              << format_number(m.global_valency) << ", " << plural(m.findings.size(), "finding") << "\n";
    return kOk;
}

struct SensitivityArgs {
    std::string slice;
    std::string factors;
    std::vector<std::string> kpis;
    bool foldover = false;
    std::size_t jobs = 1;
    std::string out;
};

int run_sensitivity(const SensitivityArgs& a) {
    ModelSlice s = read_slice(a.slice);
    const auto entries = load_factor_file(read_file(a.factors));
    std::vector<FactorSpec> factors;
    for (auto& f : identify_variable_inputs(s, &entries))
        if (f.variable) factors.push_back(std::move(f));
    if (factors.empty()) throw FactorFileError("factor file leaves no input variable");

    const auto kpis = a.kpis.empty() ? s.kpis : parse_kpis(a.kpis);
    for (const auto& k : kpis)
        if (std::find(s.kpis.begin(), s.kpis.end(), k) == s.kpis.end())
            throw UnknownKpiError("KPI " + format_address(k) + " is not a KPI of the slice");

    PBDesign d = pb_design(factors.size());
    if (a.foldover) d = d.foldover();
    const std::size_t jobs = a.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.jobs;
    ResponseMatrix r = run_experiments(s, factors, d, kpis, {jobs});

    const fs::path dir(a.out);
    write_file(dir / "design.csv", design_csv(d, factors));
    write_file(dir / "responses.csv", responses_csv(r));
    if (!r.failed_runs.empty()) {
        std::cerr << plural(r.failed_runs.size(), "run") << " failed:\n";
        for (const auto& f : r.failed_runs) std::cerr << "  run " << f.run << ": #" << error_name(f.kind) << "\n";
        return kFailedRuns;
    }

    SensitivityReport rep = normalize(estimate_effects(d, r, factors));
    write_file(dir / "sensitivity.csv", sensitivity_csv(rep));
    std::cout << plural(factors.size(), "factor") << ", " << plural(d.runs(), "run") << ", "
              << plural(d.dummy_columns(), "dummy column") << "\n";
    const auto order = report_order(rep);
    for (std::size_t i = 0; i < std::min<std::size_t>(order.size(), 10); ++i) {
        const auto& f = rep.factors[order[i]];
        std::cout << "  " << f.name << "  " << format_number(rep.normalized[order[i]][0]) << "\n";
    }
    return kOk;
}

struct CompareArgs {
    std::vector<std::string> slices;
    std::vector<std::string> names;
    std::string format = "csv";
};

int run_compare(const CompareArgs& a) {
    const ReportFormat format = parse_report_format(a.format);
    std::vector<ModelSummary> summaries;
    for (std::size_t i = 0; i < a.slices.size(); ++i) {
        const std::string name = i < a.names.size() ? a.names[i] : fs::path(a.slices[i]).stem().string();
        summaries.push_back(summarize(read_slice(a.slices[i]), name));
    }
    std::cout << write_report(compare_models(summaries[0], summaries[1]), format);
    return kOk;
}

struct ExportArgs {
    std::string slice;
    std::string out;
    bool with_values = false;
};

int run_export(const ExportArgs& a) {
    ModelSlice s = read_slice(a.slice);
    MetricsBundle m = compute_metrics(s);
    GraphExport g;
    if (a.with_values) {
        auto base = evaluate(s.model);
        g = export_graph(s, m, &base);
    } else {
        g = export_graph(s, m);
    }
    write_file(a.out, to_json(g));
    std::cout << plural(g.nodes.size(), "node") << ", " << plural(g.edges.size(), "edge") << "\n";
    return kOk;
}

int run_validate(const std::string& path) {
    Workbook wb = load_workbook(read_file(path));
    auto findings = validate_workbook(wb);
    for (const auto& f : findings)
        std::cout << severity_name(f.severity) << " " << f.kind << " " << f.location << ": " << f.message << "\n";
    std::cout << plural(wb.cell_count(), "cell") << ", " << plural(findings.size(), "finding") << "\n";
    return kOk;
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const UnknownKpiError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUnknownKpi;
    } catch (const CycleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCycle;
    } catch (const FormulaParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const ArtifactVersionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const DuplicateSheetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const FactorFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const FactorTargetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const UnknownFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridlens - spreadsheet model slicing, metrics and sensitivity screening"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gridlens 1.0.0");

    SliceArgs sa;
    auto* slice_cmd = app.add_subcommand("slice", "Slice a workbook down to what its KPIs need");
    slice_cmd->add_option("--workbook,-w", sa.workbook, "Workbook JSON")->required();
    slice_cmd->add_option("--kpi,-k", sa.kpis, "KPI cell, Sheet!A1 (repeatable)")->required();
    slice_cmd->add_option("--disciplines", sa.disciplines, "JSON map of sheet to discipline");
    slice_cmd->add_option("--collapse-threshold", sa.threshold, "Ranges above this size are aggregated in exports");
    slice_cmd->add_option("--out,-o", sa.out, "Slice artifact to write");

    MetricsArgs ma;
    auto* metrics_cmd = app.add_subcommand("metrics", "Discipline, coupling and function metrics of a slice");
    metrics_cmd->add_option("--slice,-s", ma.slice, "Slice artifact")->required();
    metrics_cmd->add_option("--format,-f", ma.format, "csv, markdown or json");
    metrics_cmd->add_option("--out,-o", ma.out, "Directory for report files (stdout if omitted)");
    metrics_cmd->add_option("--top", ma.top, "Most referenced cells to list");
    metrics_cmd->add_flag("--check-quadrant", ma.check_quadrant, "Flag input models that read output models");
    metrics_cmd->add_option("--output-discipline", ma.output_disciplines,
                            "Disciplines treated as output models (inferred if omitted)");

    SensitivityArgs xa;
    auto* sens_cmd = app.add_subcommand("sensitivity", "Plackett-Burman screening of slice inputs");
    sens_cmd->add_option("--slice,-s", xa.slice, "Slice artifact")->required();
    sens_cmd->add_option("--factors", xa.factors, "Factor file JSON")->required();
    sens_cmd->add_option("--kpi,-k", xa.kpis, "KPIs to report (default: all slice KPIs)");
    sens_cmd->add_flag("--foldover", xa.foldover, "Append the mirrored design");
    sens_cmd->add_option("--jobs,-j", xa.jobs, "Concurrent scenario evaluations (0: all cores)");
    sens_cmd->add_option("--out,-o", xa.out, "Output directory")->required();

    CompareArgs ca;
    auto* compare_cmd = app.add_subcommand("compare", "Compare two slices of a model over time");
    compare_cmd->add_option("--slice,-s", ca.slices, "Slice artifacts, before then after")->required()->expected(2);
    compare_cmd->add_option("--name", ca.names, "Column names for the two models")->expected(0, 2);
    compare_cmd->add_option("--format,-f", ca.format, "csv, markdown or json");

    ExportArgs ea;
    auto* export_cmd = app.add_subcommand("export-graph", "Write the graph explorer document");
    export_cmd->add_option("--slice,-s", ea.slice, "Slice artifact")->required();
    export_cmd->add_option("--out,-o", ea.out, "Export file")->required();
    export_cmd->add_flag("--with-values", ea.with_values, "Attach baseline values to formula nodes");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Static checks on a workbook");
    validate_cmd->add_option("--workbook,-w", validate_path, "Workbook JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kBadInput;
    }

    if (*slice_cmd) return guarded([&] { return run_slice(sa); });
    if (*metrics_cmd) return guarded([&] { return run_metrics(ma); });
    if (*sens_cmd) return guarded([&] { return run_sensitivity(xa); });
    if (*compare_cmd) return guarded([&] { return run_compare(ca); });
    if (*export_cmd) return guarded([&] { return run_export(ea); });
    if (*validate_cmd) return guarded([&] { return run_validate(validate_path); });
    return kInternal;
}
