#pragma once

#include <stdexcept>
#include <string>

namespace cci {

/// Input file could not be parsed. Carries the offending line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Input parsed but violates a validation rule (e.g. rating out of scale).
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          line_(line) {}
    explicit ValidationError(const std::string& what)
        : std::runtime_error(what), line_(0) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Operation called outside its mathematical domain (empty dataset,
/// isolated node where a degree is required, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A user or item id that does not exist in the loaded data.
class UnknownEntityError : public std::runtime_error {
public:
    explicit UnknownEntityError(const std::string& what) : std::runtime_error(what) {}
};

/// File system level failure (missing file, unwritable output).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cci
