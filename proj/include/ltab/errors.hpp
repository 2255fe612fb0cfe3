#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltab {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Invalid engine or harness configuration.
class OptionsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Step budget exhausted; the run is a nontermination suspect.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated engine invariant. Always a bug, never a user error.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The reference evaluator cannot handle the given program.
class OracleInapplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ltab
