#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gridlens/address.hpp"
#include "gridlens/value.hpp"
#include "gridlens/workbook.hpp"

namespace gridlens {

/// Row-major block of values materialized from a range reference.
struct Grid {
    int rows = 0;
    int columns = 0;
    std::vector<Value> cells;

    const Value& at(int r, int c) const { return cells[static_cast<std::size_t>(r) * columns + c]; }
};

/// A function argument after evaluation: a scalar or a range's values.
using Operand = std::variant<Value, Grid>;

/// Applies a built-in function to already-evaluated arguments. Unknown names
/// yield error(NAME). IF evaluated this way is eager; the evaluator itself
/// only evaluates the chosen branch.
Value call_builtin(std::string_view name, std::span<const Operand> args);

/// Input replacements for one scenario run.
struct ScenarioOverlay {
    std::map<CellAddress, Value> overrides;
};

struct EvaluationResult {
    std::map<CellAddress, Value> values;
    std::vector<std::pair<CellAddress, ErrorKind>> diagnostics;  // formula cells ending in error
    std::vector<std::vector<CellAddress>> cycles;

    /// Blank for cells without an entry.
    const Value& at(const CellAddress& a) const;
};

/// A workbook (or a dependency-closed part of it) bound to slots and sorted
/// topologically, ready for repeated scenario evaluation. Copies share the
/// immutable compiled state, so one model can serve concurrent runs.
class CompiledModel {
public:
    /// Compiles the whole workbook, or `scope` plus everything it depends on.
    explicit CompiledModel(const Workbook& wb, const std::set<CellAddress>* scope = nullptr);

    std::size_t slot_count() const noexcept;
    std::optional<std::size_t> slot_of(const CellAddress& a) const;
    const CellAddress& address_of(std::size_t slot) const;
    bool is_formula(std::size_t slot) const;
    const std::vector<std::vector<CellAddress>>& cycles() const noexcept;

    /// Slot values before any formula runs (literals, blanks, placeholders).
    const std::vector<Value>& initial_values() const noexcept;

    /// Evaluates with slot-level overrides into `values`, which is resized
    /// and overwritten. Override slots must be non-formula slots.
    void evaluate_into(std::span<const std::pair<std::size_t, Value>> overrides,
                       std::vector<Value>& values) const;

    /// Evaluates and reports cells in scope. Cells on or downstream of a
    /// cycle read error(CYCLE). Throws OverlayTargetError.
    EvaluationResult evaluate(const ScenarioOverlay& overlay = {}) const;

    struct Impl;  // opaque

private:
    std::shared_ptr<const Impl> impl_;
};

/// One-shot evaluation. Throws CycleError if the evaluated part of the
/// workbook contains a circular reference, OverlayTargetError if the overlay
/// targets a formula cell.
EvaluationResult evaluate(const Workbook& wb, const std::set<CellAddress>* scope = nullptr,
                          const ScenarioOverlay* overlay = nullptr);

}  // namespace gridlens
