#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gridlens/factors.hpp"
#include "gridlens/graph.hpp"
#include "gridlens/value.hpp"

namespace gridlens {

inline constexpr std::size_t kMaxDesignRuns = 4096;

/// Two-level screening design. Columns 0..factors-1 are assigned to factors,
/// the remaining runs-1-factors columns are dummies.
class PBDesign {
public:
    PBDesign() = default;
    /// `matrix` is runs x columns of +1/-1, row-major. Throws
    /// std::invalid_argument on shape errors or factors > columns.
    PBDesign(std::size_t runs, std::size_t factors, std::size_t columns, std::vector<std::int8_t> matrix,
             bool folded = false);

    std::size_t runs() const noexcept { return runs_; }
    std::size_t factors() const noexcept { return factors_; }
    std::size_t columns() const noexcept { return columns_; }
    std::size_t dummy_columns() const noexcept { return columns_ - factors_; }
    bool folded() const noexcept { return folded_; }

    /// +1 or -1.
    int level(std::size_t run, std::size_t column) const {
        return matrix_[run * columns_ + column];
    }

    /// Appends the sign-reversed runs.
    PBDesign foldover() const;

private:
    std::size_t runs_ = 0;
    std::size_t factors_ = 0;
    std::size_t columns_ = 0;
    bool folded_ = false;
    std::vector<std::int8_t> matrix_;  // runs x columns, row-major
};

/// Run counts pb_design can produce, ascending, up to `cap`.
std::vector<std::size_t> supported_design_sizes(std::size_t cap = kMaxDesignRuns);

/// Smallest supported design with more runs than factors. N = 12, 20, 24 use
/// cyclic generators plus a final all-minus run; powers of two use the
/// Sylvester Hadamard matrix without its all-ones column.
/// Throws UnsupportedSizeError when k needs more than `cap` runs, and
/// std::invalid_argument for k == 0.
PBDesign pb_design(std::size_t factors, std::size_t cap = kMaxDesignRuns);
/// Design with exactly `runs` rows (must be a supported size).
PBDesign pb_design_of_size(std::size_t runs, std::size_t factors);

struct FailedRun {
    std::size_t run;
    ErrorKind kind;
    friend bool operator==(const FailedRun&, const FailedRun&) = default;
};

struct ResponseMatrix {
    std::size_t rows = 0;
    std::vector<CellAddress> kpis;
    std::vector<std::vector<double>> values;  // rows x kpis; empty row for a failed run
    std::vector<FailedRun> failed_runs;
    std::vector<double> baseline;  // per KPI, unmodified inputs (NaN if non-numeric)

    friend bool operator==(const ResponseMatrix&, const ResponseMatrix&) = default;
};

struct ExperimentOptions {
    std::size_t jobs = 1;
};

/// Evaluates every design run against the slice with factors at their
/// min/max. Rows are ordered by run index whatever the parallelism. Runs
/// whose KPIs are not numeric are recorded as failed. Throws
/// DesignMismatchError if a factor is fixed, not a slice input, or the
/// factor count differs from the design; UnknownKpiError for KPIs outside
/// the slice.
ResponseMatrix run_experiments(const ModelSlice& s, const std::vector<FactorSpec>& factors,
                               const PBDesign& d, const std::vector<CellAddress>& kpis,
                               const ExperimentOptions& options = {});

struct SensitivityReport {
    std::vector<FactorSpec> factors;
    std::vector<CellAddress> kpis;
    std::vector<double> baseline;                      // per KPI
    std::vector<std::vector<double>> raw;              // factors x kpis
    std::vector<std::vector<double>> normalized;       // factors x kpis, [0, 100]
    std::vector<std::vector<double>> dummy;            // dummy columns x kpis
};

/// Main effects: mean response at +1 minus mean at -1. Throws
/// IncompleteRunsError when any run failed.
SensitivityReport estimate_effects(const PBDesign& d, const ResponseMatrix& r,
                                   const std::vector<FactorSpec>& factors);

/// Scales each KPI's |effects| so the largest is 100.
SensitivityReport normalize(SensitivityReport report);

/// Factor order sorted by normalized effect on the first KPI, descending
/// (stable).
std::vector<std::size_t> report_order(const SensitivityReport& r);

}  // namespace gridlens
