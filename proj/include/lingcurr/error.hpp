#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lingcurr {

// Every data or contract violation raised by the library derives from Error.
// The CLI maps Error to exit code 2 and UsageError to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// A required sample or row is absent.
class CoverageError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but leaves the computation undefined (all columns
// flagged, all-zero batch weights, fewer than two bins, ...).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class UnsupportedInputError : public Error {
public:
    using Error::Error;
};

// Bad flags or configuration, detected before any work starts.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace lingcurr
