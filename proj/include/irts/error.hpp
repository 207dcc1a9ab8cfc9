#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace irts {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An index (instance, signal, time position) is out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied argument violates a precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A timestamp lookup found no matching entry.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Input data is malformed or inconsistent.
class DataError : public Error {
public:
    using Error::Error;
};

/// A CSV header does not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A dense materialization would exceed the caller's cell budget.
class CapacityError : public Error {
public:
    explicit CapacityError(std::uint64_t required_cells)
        : Error("dense tensor requires " + std::to_string(required_cells) + " cells, exceeding the limit"),
          required_cells_(required_cells) {}

    std::uint64_t required_cells() const noexcept { return required_cells_; }

private:
    std::uint64_t required_cells_;
};

/// A persisted file is structurally invalid. `section()` names the part that failed.
class FormatError : public Error {
public:
    FormatError(std::string section, const std::string& detail)
        : Error("format error in section '" + section + "': " + detail), section_(std::move(section)) {}

    const std::string& section() const noexcept { return section_; }

private:
    std::string section_;
};

/// A persisted file failed its checksum.
class IntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace irts
