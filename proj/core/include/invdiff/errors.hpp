#pragma once

#include <stdexcept>
#include <string>

namespace invdiff {

// Base class for all toolkit errors. The CLI maps these onto exit codes:
// ConfigError/UsageError -> 2, everything else -> 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (trace files, CSV, dumps). Carries a line number
// when one is known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Structurally well-formed input that violates a documented invariant
// (e.g. more than ten variables at a breakpoint).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Caller misuse of a library operation (mismatched ids, empty required input).
class UsageError : public Error {
public:
    using Error::Error;
};

// Bad pipeline configuration (missing subject, invalid thresholds).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace invdiff
