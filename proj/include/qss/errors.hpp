#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qss {

// Violated precondition of a library call (bad vertex, mismatched sizes, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two field values (or vectors of them) with different moduli were combined.
class ModulusError : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed graph description; carries the 1-based line number (0 = whole file).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace qss
