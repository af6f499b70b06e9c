#pragma once

#include <stdexcept>
#include <string>

namespace troppadic {

// Every failure mode surfaced by the library derives from Error so callers
// (the CLI in particular) can map families of failures to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: files, term syntax, mismatched primes or dimensions.
class InputError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by exact zero") {}
};

// Not enough certified digits (or tail certificate too weak) to decide.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class DomainViolation : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class NotRegular : public Error {
public:
    using Error::Error;
};

class ZeroSeries : public Error {
public:
    ZeroSeries() : Error("series is identically zero") {}
};

class Unbounded : public Error {
public:
    Unbounded() : Error("polyhedron is unbounded") {}
};

class OracleMissing : public Error {
public:
    using Error::Error;
};

class GenericityFailure : public Error {
public:
    using Error::Error;
};

class NotClosedUnderDerivation : public Error {
public:
    explicit NotClosedUnderDerivation(const std::string& symbol)
        : Error("symbol '" + symbol + "' has no derivative rule"), symbol_(symbol) {}
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

}  // namespace troppadic
