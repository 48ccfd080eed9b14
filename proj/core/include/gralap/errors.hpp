#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gralap {

/// Malformed input stream or file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid input that violates a documented invariant or
/// precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear-algebra step could not produce a result (e.g. singular system).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gralap
