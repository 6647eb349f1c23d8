#pragma once

#include <stdexcept>
#include <string>

namespace hitpred {

// Base of every error the library raises. The CLI maps the subclasses onto
// exit codes: ConfigError -> 2, SchemaError/DataError -> 3, anything else -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Input file does not match the expected column layout.
class SchemaError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

// Invalid argument to an algorithm (K < 2, k > n, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Two inputs that must agree do not (column names, row counts, topic coverage).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class RunError : public Error {
public:
    using Error::Error;
};

}  // namespace hitpred
