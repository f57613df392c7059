#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perfolab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidVertexError : public Error {
public:
    using Error::Error;
};

class CapExceededError : public Error {
public:
    using Error::Error;
};

class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class UnboundVariableError : public Error {
public:
    using Error::Error;
};

class UnknownRelationError : public Error {
public:
    using Error::Error;
};

class NotASentenceError : public Error {
public:
    using Error::Error;
};

class RelationAtomError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CostGuardError : public Error {
public:
    using Error::Error;
};

class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace perfolab
