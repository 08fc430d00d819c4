#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ffdelay {

/// Base of every error the library throws. Callers that only need to
/// distinguish "bad input" from "numerical trouble" can catch the two
/// intermediate classes below.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data or arguments that violate a documented precondition.
class InputError : public Error {
public:
    using Error::Error;
};

/// Model parameters outside their mathematical domain (tau <= 0, NaN, ...).
class ParameterError : public InputError {
public:
    using InputError::InputError;
};

/// Requested horizon longer than the supplied series.
class InputLengthError : public InputError {
public:
    using InputError::InputError;
};

/// A value that parses but breaks a model assumption (negative load, w(0) != 0).
class ConstraintError : public InputError {
public:
    using InputError::InputError;
};

class DuplicateKeyError : public InputError {
public:
    using InputError::InputError;
};

/// Malformed text. `line()` is 1-based; 0 when no line applies.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A metric that is mathematically undefined for the given data (R^2 with SST = 0).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace ffdelay
