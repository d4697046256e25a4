#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlens/eval.hpp"
#include "gridlens/graph.hpp"
#include "gridlens/metrics.hpp"
#include "gridlens/validation.hpp"

namespace gridlens {

inline constexpr std::string_view kGraphExportVersion = "gridlens-export/1";

/// Everything the metrics step computes for one slice.
struct MetricsBundle {
    std::size_t cell_count = 0;
    std::size_t reference_count = 0;
    double global_valency = 0;
    std::vector<DisciplineMetricsRow> disciplines;
    CouplingMatrix coupling;
    std::vector<CouplingMetricsRow> coupling_metrics;
    FunctionHistogram functions;
    std::vector<std::pair<CellAddress, std::size_t>> top_referenced;
    ValidationReport findings;
};

MetricsBundle compute_metrics(const ModelSlice& s, std::size_t top_k = 10);

struct ExportNode {
    std::string id;
    std::string kind;  // input | formula | kpi | range-aggregate
    std::string sheet;
    std::string discipline;
    std::optional<std::string> label;
    std::optional<Value> value;
    std::optional<std::string> formula_text;
    std::optional<std::size_t> member_count;  // range-aggregate only
    std::optional<std::string> aggregate;     // id of the aggregate holding this cell

    friend bool operator==(const ExportNode&, const ExportNode&) = default;
};

/// Dataflow orientation: precedent -> dependent.
struct ExportEdge {
    std::string from;
    std::string to;
    friend bool operator==(const ExportEdge&, const ExportEdge&) = default;
};

struct ExportMeta {
    std::vector<std::string> kpis;
    std::size_t cell_count = 0;
    std::size_t expanded_reference_count = 0;
    std::size_t collapse_threshold = 0;
    std::vector<std::string> disciplines;
    std::vector<DisciplineMetricsRow> discipline_metrics;
    CouplingMatrix coupling_matrix;

    friend bool operator==(const ExportMeta&, const ExportMeta&) = default;
};

struct GraphExport {
    std::string version{kGraphExportVersion};
    std::vector<ExportNode> nodes;
    std::vector<ExportEdge> edges;
    ExportMeta meta;

    friend bool operator==(const GraphExport&, const GraphExport&) = default;
};

/// Graph document for the explorer. Ranges above the collapse threshold
/// become one range-aggregate node each; references through them are drawn
/// from the aggregate and their member edges are dropped. Values are
/// attached for literals, and for formulas when `baseline` is given.
GraphExport export_graph(const ModelSlice& s, const MetricsBundle& metrics,
                         const EvaluationResult* baseline = nullptr);

std::string to_json(const GraphExport& g);
/// Throws ArtifactVersionError or SchemaError.
GraphExport graph_export_from_json(std::string_view document);

}  // namespace gridlens
