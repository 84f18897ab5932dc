#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twoway {

/// Base of every error raised by the library. `module()` names the
/// component that raised it so front ends can print "module: message".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
        : Error("netcore", (source.empty() ? "" : source + ": ") + "line " + std::to_string(line) +
                               ": " + detail),
          line_(line),
          detail_(detail) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class CoverageError : public Error {
public:
    using Error::Error;
};

// Raised when a metric is undefined on its input (a class missing from a
// fold, a constant rank sequence).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class DegenerateTrainingError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace twoway
