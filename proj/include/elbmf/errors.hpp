#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elbmf {

/// Operand shapes do not conform (inner dimensions, equal-shape requirements).
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numeric failure inside the solver: NaN/Inf in a gradient or objective.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The synthetic generator could not place a non-overlapping tile.
struct placement_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed matrix or trace file. `line` is 1-based, 0 when not tied to a line.
struct parse_error : std::runtime_error {
    parse_error(const std::string& what, std::size_t line)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line(line),
          reason(what) {}

    std::size_t line;
    std::string reason; ///< message without the line suffix
};

/// A file could not be opened, read or written.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace elbmf
