#include "gridlens/address.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace gridlens {

CellRange::CellRange(CellAddress a, CellAddress b) {
    start_.sheet = a.sheet;
    end_.sheet = a.sheet;
    start_.column = std::min(a.column, b.column);
    end_.column = std::max(a.column, b.column);
    start_.row = std::min(a.row, b.row);
    end_.row = std::max(a.row, b.row);
}

bool CellRange::contains(const CellAddress& a) const noexcept {
    return a.sheet == start_.sheet && a.column >= start_.column && a.column <= end_.column &&
           a.row >= start_.row && a.row <= end_.row;
}

std::vector<CellAddress> CellRange::members() const {
    std::vector<CellAddress> out;
    out.reserve(size());
    for (int r = start_.row; r <= end_.row; ++r)
        for (int c = start_.column; c <= end_.column; ++c) out.push_back({start_.sheet, c, r});
    return out;
}

std::optional<int> column_from_letters(std::string_view letters) {
    if (letters.empty() || letters.size() > 3) return std::nullopt;
    int col = 0;
    for (char ch : letters) {
        if (!std::isalpha(static_cast<unsigned char>(ch))) return std::nullopt;
        col = col * 26 + (std::toupper(static_cast<unsigned char>(ch)) - 'A' + 1);
    }
    if (col > kMaxColumn) return std::nullopt;
    return col;
}

std::string column_letters(int column) {
    std::string s;
    while (column > 0) {
        int rem = (column - 1) % 26;
        s.insert(s.begin(), static_cast<char>('A' + rem));
        column = (column - 1) / 26;
    }
    return s;
}

bool sheet_needs_quotes(std::string_view name) {
    if (name.empty()) return true;
    if (!(std::isalpha(static_cast<unsigned char>(name.front())) || name.front() == '_')) return true;
    return !std::all_of(name.begin(), name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    });
}

std::string quote_sheet(std::string_view name) {
    if (!sheet_needs_quotes(name)) return std::string(name);
    std::string s = "'";
    for (char ch : name) {
        if (ch == '\'') s += '\'';
        s += ch;
    }
    s += '\'';
    return s;
}

namespace {

// Splits "Sheet!A1" into sheet and local part. Returns false on bad quoting.
bool split_sheet(std::string_view text, std::string& sheet, std::string_view& local) {
    if (!text.empty() && text.front() == '\'') {
        std::string name;
        std::size_t i = 1;
        for (; i < text.size(); ++i) {
            if (text[i] == '\'') {
                if (i + 1 < text.size() && text[i + 1] == '\'') {
                    name += '\'';
                    ++i;
                    continue;
                }
                break;
            }
            name += text[i];
        }
        if (i >= text.size() || i + 1 >= text.size() || text[i + 1] != '!') return false;
        sheet = std::move(name);
        local = text.substr(i + 2);
        return true;
    }
    auto bang = text.rfind('!');
    if (bang == std::string_view::npos) {
        local = text;
        return true;
    }
    sheet = std::string(text.substr(0, bang));
    local = text.substr(bang + 1);
    return !sheet.empty();
}

std::optional<CellAddress> parse_local(std::string_view s, const std::string& sheet) {
    std::size_t i = 0;
    if (i < s.size() && s[i] == '$') ++i;
    std::size_t letters_begin = i;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    auto col = column_from_letters(s.substr(letters_begin, i - letters_begin));
    if (!col) return std::nullopt;
    if (i < s.size() && s[i] == '$') ++i;
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '0') return std::nullopt;
    int row = 0;
    auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), row);
    if (ec != std::errc{} || ptr != s.data() + s.size() || row < 1 || row > kMaxRow) return std::nullopt;
    return CellAddress{sheet, *col, row};
}

}  // namespace

std::optional<CellAddress> parse_address(std::string_view text, std::string_view default_sheet) {
    std::string sheet(default_sheet);
    std::string_view local;
    if (!split_sheet(text, sheet, local)) return std::nullopt;
    return parse_local(local, sheet);
}

std::optional<CellRange> parse_range(std::string_view text, std::string_view default_sheet) {
    std::string sheet(default_sheet);
    std::string_view local;
    if (!split_sheet(text, sheet, local)) return std::nullopt;
    auto colon = local.find(':');
    if (colon == std::string_view::npos) {
        auto a = parse_local(local, sheet);
        if (!a) return std::nullopt;
        return CellRange(*a, *a);
    }
    auto a = parse_local(local.substr(0, colon), sheet);
    auto b = parse_local(local.substr(colon + 1), sheet);
    if (!a || !b) return std::nullopt;
    return CellRange(*a, *b);
}

std::string format_local(const CellAddress& a) { return column_letters(a.column) + std::to_string(a.row); }

std::string format_address(const CellAddress& a) {
    if (a.sheet.empty()) return format_local(a);
    return quote_sheet(a.sheet) + "!" + format_local(a);
}

std::string format_range(const CellRange& r) {
    std::string s = format_address(r.start());
    if (r.start() != r.end()) s += ":" + format_local(r.end());
    return s;
}

}  // namespace gridlens
