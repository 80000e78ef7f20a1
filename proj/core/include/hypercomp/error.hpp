#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypercomp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable category, e.g. "parse" or "domain".
    virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

/// Numeric domain violation (point outside the ball, zero norm, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    std::size_t line_;
};

/// A surface needed for scoring has no vector in the embedding.
class UncoveredError : public Error {
public:
    explicit UncoveredError(std::vector<std::string> missing)
        : Error(make_message(missing)), missing_(std::move(missing)) {}
    const std::vector<std::string>& missing() const noexcept { return missing_; }
    const char* kind() const noexcept override { return "uncovered"; }

private:
    static std::string make_message(const std::vector<std::string>& missing) {
        std::string msg = "no vector for";
        for (const auto& m : missing) msg += " '" + m + "'";
        return msg;
    }
    std::vector<std::string> missing_;
};

/// File could not be opened or read.
class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

}  // namespace hypercomp
