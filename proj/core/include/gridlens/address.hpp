#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridlens {

inline constexpr int kMaxColumn = 16384;   // XFD
inline constexpr int kMaxRow = 1048576;

/// A single cell position in A1 coordinates (column A == 1).
///
/// Ordering is (sheet, row, column), which is also the tie-break order used
/// by ranked reports.
struct CellAddress {
    std::string sheet;
    int column = 1;
    int row = 1;

    friend bool operator==(const CellAddress&, const CellAddress&) = default;
    friend std::strong_ordering operator<=>(const CellAddress& a, const CellAddress& b) {
        if (auto c = a.sheet <=> b.sheet; c != 0) return c;
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.column <=> b.column;
    }
};

/// Rectangular block of cells on one sheet. Always normalized so that
/// `start` is the top-left and `end` the bottom-right corner.
class CellRange {
public:
    CellRange() = default;
    CellRange(CellAddress a, CellAddress b);

    const CellAddress& start() const noexcept { return start_; }
    const CellAddress& end() const noexcept { return end_; }
    const std::string& sheet() const noexcept { return start_.sheet; }

    int rows() const noexcept { return end_.row - start_.row + 1; }
    int columns() const noexcept { return end_.column - start_.column + 1; }
    std::size_t size() const noexcept {
        return static_cast<std::size_t>(rows()) * static_cast<std::size_t>(columns());
    }
    bool contains(const CellAddress& a) const noexcept;

    /// Members in row-major order.
    std::vector<CellAddress> members() const;

    friend bool operator==(const CellRange&, const CellRange&) = default;
    friend auto operator<=>(const CellRange&, const CellRange&) = default;

private:
    CellAddress start_;
    CellAddress end_;
};

/// "A" -> 1, "AB" -> 28. Returns nullopt for anything that is not 1-3 letters
/// within the column limit.
std::optional<int> column_from_letters(std::string_view letters);
std::string column_letters(int column);

/// True when `name` can be written without quotes in a reference.
bool sheet_needs_quotes(std::string_view name);
std::string quote_sheet(std::string_view name);

/// Parses "A1", "$B$2", "Sheet!C3", "'My Sheet'!D4". Unqualified addresses
/// take `default_sheet`. Returns nullopt on malformed text.
std::optional<CellAddress> parse_address(std::string_view text, std::string_view default_sheet = {});
/// Parses a single cell or "A1:B9" range, optionally sheet-qualified.
std::optional<CellRange> parse_range(std::string_view text, std::string_view default_sheet = {});

/// "A1" without sheet.
std::string format_local(const CellAddress& a);
/// "Sheet!A1", quoting the sheet when required.
std::string format_address(const CellAddress& a);
std::string format_range(const CellRange& r);

}  // namespace gridlens
