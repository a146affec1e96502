#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace divetrack {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented range (odd Hann span, beta outside (0,1), ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Input data violates a precondition (length mismatch, frame mismatch, empty input, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Trajectory fitting failures.
class InsufficientData : public Error {
public:
    using Error::Error;
};

class DegenerateTime : public Error {
public:
    using Error::Error;
};

class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class NoConsensus : public Error {
public:
    using Error::Error;
};

/// Simulator could not place the requested dives without overlap.
class PlacementError : public Error {
public:
    using Error::Error;
};

/// Dive-code parse failure. `position` is 1-based and points at the offending character
/// (or one past the end when the text is too short).
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error("parse error at position " + std::to_string(position) + ": " + what),
          position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace divetrack
