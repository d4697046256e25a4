#pragma once

#include <string>
#include <string_view>

#include "gridlens/graph.hpp"

namespace gridlens {

inline constexpr std::string_view kSliceArtifactVersion = "gridlens-slice/1";

/// Slice artifact JSON: version, KPIs, inputs, counts, the sliced cells in
/// workbook interchange form and the expanded edge list. Downstream
/// commands work from this alone.
std::string save_slice(const ModelSlice& s);

/// Throws ArtifactVersionError for a foreign version tag, SchemaError when
/// the document is malformed or its recorded edges disagree with its cells.
ModelSlice load_slice(std::string_view document);

}  // namespace gridlens
