#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gridlens/error.hpp"
#include "gridlens/workbook.hpp"

namespace gridlens {

nlohmann::json workbook_to_json(const Workbook& wb);
Workbook workbook_from_json(const nlohmann::json& doc);

namespace detail {

inline nlohmann::json parse_json(std::string_view text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(what + " is not valid JSON: " + e.what());
    }
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty())
        throw SchemaError(where + ": \"" + key + "\" must be a non-empty string");
    return obj[key].get<std::string>();
}

}  // namespace detail
}  // namespace gridlens
