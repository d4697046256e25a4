#include "coerce.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace gridlens::detail {

std::optional<double> parse_number_text(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty() || !(std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.')) return std::nullopt;
    double x = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return negative ? -x : x;
}

std::variant<double, ErrorKind> to_number(const Value& v) {
    if (v.is_number()) return v.number();
    if (v.is_blank()) return 0.0;
    if (v.is_bool()) return v.boolean() ? 1.0 : 0.0;
    if (v.is_error()) return v.error();
    if (auto x = parse_number_text(v.text())) return *x;
    return ErrorKind::Value;
}

std::variant<bool, ErrorKind> to_bool(const Value& v) {
    if (v.is_bool()) return v.boolean();
    if (v.is_number()) return v.number() != 0;
    if (v.is_blank()) return false;
    if (v.is_error()) return v.error();
    std::string upper;
    for (char ch : v.text()) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (upper == "TRUE") return true;
    if (upper == "FALSE") return false;
    return ErrorKind::Value;
}

std::string to_text(const Value& v) {
    if (v.is_text()) return v.text();
    if (v.is_blank()) return {};
    if (v.is_bool()) return v.boolean() ? "TRUE" : "FALSE";
    if (v.is_number()) {
        // General format: up to 15 significant digits.
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.15g", v.number());
        return buf;
    }
    return display(v);
}

namespace {

int type_rank(const Value& v) {
    if (v.is_number()) return 0;
    if (v.is_text()) return 1;
    return 2;  // boolean
}

int compare_text(const std::string& a, const std::string& b) {
    auto lower = [](char ch) { return std::tolower(static_cast<unsigned char>(ch)); };
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end(),
                                  [&](char x, char y) { return lower(x) == lower(y); });
    if (ia == a.end() && ib == b.end()) return 0;
    if (ia == a.end()) return -1;
    if (ib == b.end()) return 1;
    return lower(*ia) < lower(*ib) ? -1 : 1;
}

Value blank_as(const Value& other) {
    if (other.is_text()) return Value(std::string{});
    if (other.is_bool()) return Value(false);
    return Value(0.0);
}

}  // namespace

int compare(const Value& a0, const Value& b0) {
    if (a0.is_blank() && b0.is_blank()) return 0;
    const Value a = a0.is_blank() ? blank_as(b0) : a0;
    const Value b = b0.is_blank() ? blank_as(a0) : b0;
    int ra = type_rank(a);
    int rb = type_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (a.is_number()) return a.number() < b.number() ? -1 : (a.number() > b.number() ? 1 : 0);
    if (a.is_text()) return compare_text(a.text(), b.text());
    return static_cast<int>(a.boolean()) - static_cast<int>(b.boolean());
}

Value scalar(const Operand& op) {
    if (auto* v = std::get_if<Value>(&op)) return *v;
    const Grid& g = std::get<Grid>(op);
    if (g.rows == 1 && g.columns == 1) return g.cells.front();
    return Value(ErrorKind::Value);
}

Value finite_or_error(double x) {
    if (!std::isfinite(x)) return Value(ErrorKind::Value);
    return Value(x);
}

}  // namespace gridlens::detail
