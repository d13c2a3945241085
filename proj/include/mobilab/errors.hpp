#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mobilab {

// Caller violated an operation's precondition.
class UsageError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

// A configuration value is missing, unknown or out of range.
class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

// Malformed trace input. line/column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

 private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace mobilab
