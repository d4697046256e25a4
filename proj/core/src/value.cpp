#include "gridlens/value.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>

namespace gridlens {

namespace {
constexpr std::array<std::pair<ErrorKind, std::string_view>, 6> kErrorNames{{
    {ErrorKind::Div0, "DIV0"},
    {ErrorKind::NA, "NA"},
    {ErrorKind::Value, "VALUE"},
    {ErrorKind::Ref, "REF"},
    {ErrorKind::Name, "NAME"},
    {ErrorKind::Cycle, "CYCLE"},
}};
}  // namespace

std::string_view error_name(ErrorKind kind) {
    for (const auto& [k, n] : kErrorNames)
        if (k == kind) return n;
    return "?";
}

std::optional<ErrorKind> error_from_name(std::string_view name) {
    for (const auto& [k, n] : kErrorNames)
        if (n == name) return k;
    return std::nullopt;
}

bool bitwise_equal(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number())
        return std::bit_cast<std::uint64_t>(a.number()) == std::bit_cast<std::uint64_t>(b.number());
    return a == b;
}

std::string format_number(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::string display(const Value& v) {
    if (v.is_blank()) return {};
    if (v.is_number()) return format_number(v.number());
    if (v.is_text()) return v.text();
    if (v.is_bool()) return v.boolean() ? "TRUE" : "FALSE";
    return "#" + std::string(error_name(v.error()));
}

}  // namespace gridlens
