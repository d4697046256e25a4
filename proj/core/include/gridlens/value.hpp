#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace gridlens {

enum class ErrorKind { Div0, NA, Value, Ref, Name, Cycle };

std::string_view error_name(ErrorKind kind);          // "DIV0", "NA", ...
std::optional<ErrorKind> error_from_name(std::string_view name);

struct Blank {
    friend bool operator==(Blank, Blank) = default;
};

struct ErrorValue {
    ErrorKind kind;
    friend bool operator==(ErrorValue, ErrorValue) = default;
};

/// A spreadsheet cell value: number, text, boolean, blank or error.
class Value {
public:
    Value() = default;
    Value(double n) : data_(n) {}
    Value(int n) : data_(static_cast<double>(n)) {}
    Value(bool b) : data_(b) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(ErrorKind e) : data_(ErrorValue{e}) {}

    bool is_blank() const noexcept { return std::holds_alternative<Blank>(data_); }
    bool is_number() const noexcept { return std::holds_alternative<double>(data_); }
    bool is_text() const noexcept { return std::holds_alternative<std::string>(data_); }
    bool is_bool() const noexcept { return std::holds_alternative<bool>(data_); }
    bool is_error() const noexcept { return std::holds_alternative<ErrorValue>(data_); }

    double number() const { return std::get<double>(data_); }
    const std::string& text() const { return std::get<std::string>(data_); }
    bool boolean() const { return std::get<bool>(data_); }
    ErrorKind error() const { return std::get<ErrorValue>(data_).kind; }

    const auto& data() const noexcept { return data_; }

    friend bool operator==(const Value&, const Value&) = default;

private:
    std::variant<Blank, double, std::string, bool, ErrorValue> data_;
};

/// Exact equality that also distinguishes 0.0 from -0.0.
bool bitwise_equal(const Value& a, const Value& b);

/// Human-readable rendering ("#DIV0", "TRUE", "3.5", "" for blank).
std::string display(const Value& v);

/// Shortest round-trip decimal text for a double.
std::string format_number(double x);

}  // namespace gridlens
