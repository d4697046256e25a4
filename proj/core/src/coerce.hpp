#pragma once

#include <optional>
#include <string>
#include <variant>

#include "gridlens/eval.hpp"
#include "gridlens/value.hpp"

namespace gridlens::detail {

/// Number or the error that prevents one. Blank is 0, TRUE is 1, numeric
/// text is parsed.
std::variant<double, ErrorKind> to_number(const Value& v);
std::variant<bool, ErrorKind> to_bool(const Value& v);
/// Text form used by '&'. Errors must be handled by the caller.
std::string to_text(const Value& v);
std::optional<double> parse_number_text(std::string_view s);

/// Three-way spreadsheet comparison: numbers < text < booleans, text
/// compared case-insensitively, blank adopting the other side's type.
int compare(const Value& a, const Value& b);

/// A 1x1 grid collapses to its cell; larger grids are error(VALUE).
Value scalar(const Operand& op);

/// Non-finite results become error(VALUE).
Value finite_or_error(double x);

}  // namespace gridlens::detail
