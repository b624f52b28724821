#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace autoindex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or declaration error in a program text, carrying a 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class RecursionError : public Error {
public:
    using Error::Error;
};

/// Range restriction violated (head or negated variable not bound by a positive atom).
class UnsafeRuleError : public Error {
public:
    using Error::Error;
};

/// A predicate is not a prefix of the index it is supposed to run on.
class CoverViolation : public Error {
public:
    using Error::Error;
};

class MissingIndex : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

/// An exponential oracle was asked to solve an instance beyond its gate.
class InstanceTooLarge : public Error {
public:
    using Error::Error;
};

class MissingRelation : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace autoindex
