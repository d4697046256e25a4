#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridlens/graph.hpp"
#include "gridlens/validation.hpp"

namespace gridlens {

struct DisciplineMetricsRow {
    std::string discipline;
    std::size_t cell_count = 0;
    std::size_t input_count = 0;
    double pct_inputs = 0;     // fraction in [0, 1]
    double avg_valency = 0;

    friend bool operator==(const DisciplineMetricsRow&, const DisciplineMetricsRow&) = default;
};

/// Per-discipline cell and input counts with mean valency (in + out degree
/// over the slice's expanded edges). Rows follow the workbook's discipline
/// order; disciplines without cells in the slice are omitted.
std::vector<DisciplineMetricsRow> discipline_metrics(const ModelSlice& s);

/// 2E / N. Throws EmptySliceError when N == 0.
double average_valency(std::size_t nodes, std::size_t edges);
double global_valency(const ModelSlice& s);

/// Discipline coupling. `direct[r][c]` counts expanded edges whose dependent
/// cell is in discipline c and whose precedent is in discipline r, i.e.
/// "values in row r are used by column c".
struct CouplingMatrix {
    std::vector<std::string> disciplines;
    std::vector<std::vector<std::size_t>> direct;
    std::vector<std::vector<bool>> indirect;

    std::size_t size() const noexcept { return disciplines.size(); }
    std::size_t total() const;

    friend bool operator==(const CouplingMatrix&, const CouplingMatrix&) = default;
};

/// Wraps an explicit count matrix; the indirect flags are derived.
CouplingMatrix make_coupling_matrix(std::vector<std::string> disciplines,
                                    std::vector<std::vector<std::size_t>> direct);

CouplingMatrix coupling_matrix(const ModelSlice& s);

struct CouplingMetricsRow {
    std::string discipline;
    std::size_t afferent = 0;
    std::size_t efferent = 0;
    double instability = 0;

    friend bool operator==(const CouplingMetricsRow&, const CouplingMetricsRow&) = default;
};

/// Afferent = other disciplines reading from d, efferent = other
/// disciplines d reads from; instability = e / (a + e), 0 when both are 0.
std::vector<CouplingMetricsRow> coupling_metrics(const CouplingMatrix& m);

/// Flags entries where an input model reads from an output model. A
/// discipline is an output model when listed in `output_disciplines`.
ValidationReport check_io_quadrant(const CouplingMatrix& m, const std::vector<std::string>& output_disciplines);

/// Disciplines whose share of inputs is below `threshold`.
std::vector<std::string> infer_output_disciplines(const std::vector<DisciplineMetricsRow>& rows,
                                                  double threshold = 0.5);

using FunctionHistogram = std::map<std::string, std::size_t>;

FunctionHistogram function_histogram(const ModelSlice& s);
/// Histogram entries by descending count, then name.
std::vector<std::pair<std::string, std::size_t>> ranked(const FunctionHistogram& h);

/// The k cells with the highest in-degree, ties in address order.
std::vector<std::pair<CellAddress, std::size_t>> top_referenced(const ModelSlice& s, std::size_t k);

/// Size and composition figures of one model.
struct ModelSummary {
    std::string name;
    std::size_t cell_count = 0;
    std::size_t reference_count = 0;
    FunctionHistogram functions;
    std::vector<DisciplineMetricsRow> disciplines;
};

ModelSummary summarize(const ModelSlice& s, std::string name = {});

struct DisciplineDelta {
    std::string discipline;
    long long cell_count = 0;
    long long input_count = 0;
    double avg_valency = 0;
};

struct EvolutionReport {
    ModelSummary before;
    ModelSummary after;
    long long cell_delta = 0;
    long long reference_delta = 0;
    std::map<std::string, long long> function_deltas;  // union of names
    std::vector<DisciplineDelta> discipline_deltas;    // disciplines in both
    std::vector<std::string> added;                    // only in `after`
    std::vector<std::string> removed;                  // only in `before`
};

EvolutionReport compare_models(const ModelSummary& a, const ModelSummary& b);
EvolutionReport compare_models(const ModelSlice& a, const ModelSlice& b);

}  // namespace gridlens
