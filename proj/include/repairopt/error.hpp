#pragma once

#include <stdexcept>
#include <string>

namespace repairopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (spec documents, CLI values, dimensions).
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A repair plan that cannot regenerate the lost node.
class InfeasiblePlanError : public Error {
public:
    using Error::Error;
};

/// A randomized step did not reach a valid state within its retry budget.
class RetryExhaustedError : public Error {
public:
    using Error::Error;
};

}  // namespace repairopt
