#pragma once

#include <stdexcept>
#include <string>

namespace parisian {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its invariant (sigma <= 0, delta <= 0, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Cramér–Lundberg premium does not survive refraction (p - delta <= 0).
class InvalidRefraction : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

/// Argument outside the domain of an operation, e.g. (c1, c2) not in dom(g).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Derivative requested at a point where it does not exist.
class UndefinedDerivative : public DomainError {
public:
    using DomainError::DomainError;
};

/// An exponential would leave the double range.
class OverflowRange : public Error {
public:
    using Error::Error;
};

/// Infinite series did not meet its tail tolerance within the term cap.
class SeriesFailure : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed or validated.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = -1)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace parisian
