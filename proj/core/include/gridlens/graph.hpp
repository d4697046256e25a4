#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "gridlens/address.hpp"
#include "gridlens/formula.hpp"
#include "gridlens/workbook.hpp"

namespace gridlens {

inline constexpr std::size_t kDefaultCollapseThreshold = 10;

enum class NodeKind {
    Literal,   // cell holding a value
    Formula,
    Implicit,  // referenced but undefined: reads as blank
    Dangling,  // on a sheet the workbook does not have
};

/// Expanded dependency edge: `dependent`'s formula references `precedent`.
/// Parallel references between the same pair of cells form one edge, tagged
/// with the context of the first occurrence.
struct Edge {
    std::size_t dependent;
    std::size_t precedent;
    ReferenceContext context;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A referenced range larger than the collapse threshold. Presentation only:
/// the expanded member edges are still present in the graph.
struct RangeAggregate {
    CellRange range;
    std::vector<CellAddress> dependents;  // sorted, unique
    ReferenceContext context;
    friend bool operator==(const RangeAggregate&, const RangeAggregate&) = default;
};

/// Directed cell-reference graph, edges pointing dependent -> precedent.
class DependencyGraph {
public:
    DependencyGraph() = default;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<CellAddress>& nodes() const noexcept { return nodes_; }
    const CellAddress& node(std::size_t i) const { return nodes_[i]; }
    NodeKind kind(std::size_t i) const { return kinds_[i]; }
    std::optional<std::size_t> index_of(const CellAddress& a) const;
    bool contains(const CellAddress& a) const { return index_of(a).has_value(); }

    /// Sorted by (dependent, precedent).
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& precedents(std::size_t i) const { return precedents_[i]; }
    const std::vector<std::size_t>& dependents(std::size_t i) const { return dependents_[i]; }
    std::size_t out_degree(std::size_t i) const { return precedents_[i].size(); }
    std::size_t in_degree(std::size_t i) const { return dependents_[i].size(); }

    const std::vector<RangeAggregate>& aggregates() const noexcept { return aggregates_; }
    std::size_t collapse_threshold() const noexcept { return collapse_threshold_; }

    friend bool operator==(const DependencyGraph&, const DependencyGraph&) = default;

private:
    friend DependencyGraph build_graph(const Workbook&, std::size_t);

    std::vector<CellAddress> nodes_;  // sorted
    std::vector<NodeKind> kinds_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> precedents_;
    std::vector<std::vector<std::size_t>> dependents_;
    std::vector<RangeAggregate> aggregates_;
    std::size_t collapse_threshold_ = kDefaultCollapseThreshold;
};

/// One node per defined or referenced cell, edges from every formula's
/// references with ranges expanded to their members.
DependencyGraph build_graph(const Workbook& wb, std::size_t collapse_threshold = kDefaultCollapseThreshold);

/// Strongly connected components that form cycles (size > 1, or a
/// self-reference), each sorted; restricted to `within` when given.
std::vector<std::vector<CellAddress>> find_cycles(const DependencyGraph& g,
                                                  const std::set<CellAddress>* within = nullptr);

/// The part of a workbook needed to compute chosen KPI cells.
struct ModelSlice {
    Workbook model;  // only the slice's cells; all sheets, names, disciplines kept
    DependencyGraph graph;
    std::vector<CellAddress> kpis;
    std::set<CellAddress> inputs;  // literal or implicit-blank cells

    std::size_t cell_count() const noexcept { return graph.node_count(); }
    std::size_t reference_count() const noexcept { return graph.edge_count(); }
    std::string discipline_of(const CellAddress& a) const { return model.discipline_of(a.sheet); }

    friend bool operator==(const ModelSlice&, const ModelSlice&) = default;
};

/// Backward reachability closure of `kpis`. Throws UnknownKpiError when a KPI
/// is not a node of `g`.
ModelSlice slice(const Workbook& wb, const DependencyGraph& g, std::span<const CellAddress> kpis);
/// Re-slices an existing slice; slicing with the same KPIs is idempotent.
ModelSlice slice(const ModelSlice& s, std::span<const CellAddress> kpis);

/// Builds a slice from a workbook that is already the slice's contents (used
/// when reading persisted artifacts). Throws UnknownKpiError.
ModelSlice adopt_slice(Workbook model, std::vector<CellAddress> kpis,
                       std::size_t collapse_threshold = kDefaultCollapseThreshold);

}  // namespace gridlens
