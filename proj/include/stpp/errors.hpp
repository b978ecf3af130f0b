#pragma once

#include <stdexcept>
#include <string>

namespace stpp {

/// Invalid arguments or data supplied by the caller.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Minus-sampling erosion left an empty window for the requested lag.
class ErosionError : public InputError {
public:
    using InputError::InputError;
};

/// Malformed catalog or config text; carries the offending line.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A numerical procedure failed (factorization, quadrature, bound violation).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stpp
