#pragma once

#include <span>
#include <string_view>

#include "gridlens/eval.hpp"

namespace gridlens::detail {

using Builtin = Value (*)(std::span<const Operand>);

/// nullptr for unknown names.
Builtin find_builtin(std::string_view upper_name);

}  // namespace gridlens::detail
