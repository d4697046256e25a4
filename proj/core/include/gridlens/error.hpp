#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridlens {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The workbook or artifact document does not match its schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

class DuplicateSheetError : public Error {
public:
    explicit DuplicateSheetError(const std::string& sheet)
        : Error("duplicate sheet name '" + sheet + "'"), sheet_(sheet) {}
    const std::string& sheet() const noexcept { return sheet_; }

private:
    std::string sheet_;
};

/// A formula could not be parsed. `offset` is a 0-based index into the
/// formula text, counting the leading '='.
class FormulaParseError : public Error {
public:
    FormulaParseError(std::size_t offset, std::string expected, std::string location = {})
        : Error(compose(offset, expected, location)),
          offset_(offset),
          expected_(std::move(expected)),
          location_(std::move(location)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& location() const noexcept { return location_; }

    FormulaParseError at(std::string location) const { return {offset_, expected_, std::move(location)}; }

private:
    static std::string compose(std::size_t offset, const std::string& expected, const std::string& location) {
        std::string msg = location.empty() ? std::string("formula") : location;
        msg += ": parse error at offset " + std::to_string(offset) + ", expected " + expected;
        return msg;
    }

    std::size_t offset_;
    std::string expected_;
    std::string location_;
};

class CycleError : public Error {
public:
    explicit CycleError(std::vector<std::string> cells)
        : Error(compose(cells)), cells_(std::move(cells)) {}
    const std::vector<std::string>& cells() const noexcept { return cells_; }

private:
    static std::string compose(const std::vector<std::string>& cells) {
        std::string msg = "circular reference:";
        for (const auto& c : cells) msg += " " + c;
        return msg;
    }
    std::vector<std::string> cells_;
};

class OverlayTargetError : public Error {
public:
    using Error::Error;
};

class UnknownKpiError : public Error {
public:
    using Error::Error;
};

/// A factor file names a cell that is not an input of the slice.
class FactorTargetError : public Error {
public:
    using Error::Error;
};

/// A factor file is malformed or a factor range is inverted.
class FactorFileError : public Error {
public:
    using Error::Error;
};

class UnsupportedSizeError : public Error {
public:
    using Error::Error;
};

class DesignMismatchError : public Error {
public:
    using Error::Error;
};

class IncompleteRunsError : public Error {
public:
    using Error::Error;
};

class EmptySliceError : public Error {
public:
    using Error::Error;
};

class UnknownFormatError : public Error {
public:
    using Error::Error;
};

/// An artifact file carries a version tag this build does not read.
class ArtifactVersionError : public Error {
public:
    using Error::Error;
};

}  // namespace gridlens
