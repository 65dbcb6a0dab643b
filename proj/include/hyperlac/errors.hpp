#pragma once

#include <stdexcept>
#include <string>

namespace hyperlac {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violated the documented domain of an operation.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance within its budget.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// A function was not small enough at the edge of the truncated grid.
class TailError : public Error {
public:
    using Error::Error;
};

/// Rejected experiment configuration. The message names the offending key.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hyperlac
