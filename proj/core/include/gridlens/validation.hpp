#pragma once

#include <string>
#include <vector>

#include "gridlens/workbook.hpp"

namespace gridlens {

enum class Severity { Info, Warning, Error };

std::string_view severity_name(Severity s);

struct Finding {
    Severity severity = Severity::Warning;
    std::string kind;      // "unknown-sheet", "unknown-function", ...
    std::string location;  // "Sheet!A1" or a name
    std::string message;

    friend bool operator==(const Finding&, const Finding&) = default;
};

using ValidationReport = std::vector<Finding>;

/// Static checks over a loaded workbook. Reported kinds:
///   unknown-sheet     reference to a sheet that does not exist (error)
///   unknown-function  call to a function the evaluator lacks (warning)
///   unknown-name      reference to an undefined name (error)
///   label-shadows-name  a cell label equal to a defined name (warning)
///   unsorted-lookup   approximate lookup over a visibly unsorted table (warning)
ValidationReport validate_workbook(const Workbook& wb);

}  // namespace gridlens
