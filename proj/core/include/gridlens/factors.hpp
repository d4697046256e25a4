#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlens/address.hpp"
#include "gridlens/graph.hpp"

namespace gridlens {

/// A sensitivity factor: an input cell and the range it is varied over.
struct FactorSpec {
    CellAddress cell;
    std::string name;
    double min = 0;
    double max = 0;
    std::string discipline;
    bool variable = false;
    bool range_missing = false;  // no range supplied for this input

    friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

struct FactorFileEntry {
    CellAddress cell;
    double min = 0;
    double max = 0;
    std::optional<std::string> name;
};

/// Parses { "factors": [ { "cell", "min", "max", "name"? } ] }.
/// Throws FactorFileError for malformed entries and for min > max.
std::vector<FactorFileEntry> load_factor_file(std::string_view document);

/// Numeric-literal inputs of the slice, in address order. Without a factor
/// file every one is returned fixed with `range_missing` set. With one, the
/// listed cells become variable over their range (a zero-width range stays
/// fixed) and the rest are fixed. Throws FactorTargetError when the file
/// names a cell that is not a numeric input of the slice.
std::vector<FactorSpec> identify_variable_inputs(const ModelSlice& s,
                                                 const std::vector<FactorFileEntry>* factors = nullptr);

}  // namespace gridlens
