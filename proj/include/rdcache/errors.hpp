#pragma once

#include <stdexcept>
#include <string>

namespace rdcache {

// Base class for all toolkit errors so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed trace or document input (bad hex line, truncated binary, bad JSON).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally valid input with invalid values (non-power-of-2 line size,
// non-monotone level sizes, indivisible ways, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Operation has no defined result for the given inputs (zero-access ratio
// base, empty profile pair, zero-miss error rate denominator).
class UndefinedError : public Error {
public:
    using Error::Error;
};

}  // namespace rdcache
