#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfheat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t < a, alpha not in (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Quadrature or time-stepping resolution too small to be meaningful.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// A derivative was requested beyond what the function declares.
class DerivativeOrderError : public Error {
public:
    using Error::Error;
};

/// Fundamental matrix numerically singular.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Inputs of inconsistent shape (time grids, vector lengths, ODE order).
class MismatchError : public Error {
public:
    using Error::Error;
};

/// Invalid problem description (zero leading coefficient, bad horizon, ...).
class ProblemError : public Error {
public:
    using Error::Error;
};

/// Syntax or identifier error in an expression string, with the byte offset.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("offset " + std::to_string(offset) + ": " + message),
          offset_(offset), detail_(message) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t offset_;
    std::string detail_;
};

/// Runtime failure while evaluating an expression (division by zero).
class EvalError : public Error {
public:
    using Error::Error;
};

}  // namespace cfheat
