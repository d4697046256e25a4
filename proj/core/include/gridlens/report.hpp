#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gridlens/export.hpp"
#include "gridlens/metrics.hpp"
#include "gridlens/sensitivity.hpp"

namespace gridlens {

enum class ReportFormat { Csv, Markdown, Json };

/// "csv", "markdown" (or "md"), "json". Throws UnknownFormatError.
ReportFormat parse_report_format(std::string_view name);

/// A named table of preformatted cells.
struct Table {
    std::string name;   // file stem, e.g. "coupling_metrics"
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Discipline metrics, coupling matrix and flags, coupling metrics,
/// function histogram, most referenced cells, findings.
std::vector<Table> metrics_tables(const MetricsBundle& m);
std::vector<Table> evolution_tables(const EvolutionReport& r);

/// RFC 4180 CSV (CRLF-free: rows end in '\n').
std::string render_csv(const Table& t);
std::string render_markdown(const Table& t);

/// Byte-deterministic rendering of a complete bundle. CSV concatenates the
/// tables separated by a blank line.
std::string write_report(const MetricsBundle& m, ReportFormat format);
std::string write_report(const EvolutionReport& r, ReportFormat format);

std::string csv_field(std::string_view s);
/// 0.3333 -> "33%".
std::string percent(double fraction);

/// Columns: factor, cell, discipline, then raw and normalized per KPI. Rows
/// in report_order().
std::string sensitivity_csv(const SensitivityReport& r);
std::string design_csv(const PBDesign& d, const std::vector<FactorSpec>& factors);
std::string responses_csv(const ResponseMatrix& r);

}  // namespace gridlens
