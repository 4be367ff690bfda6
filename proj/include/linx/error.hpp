#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linx {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when tree structures, shapes or vector lengths do not line up.
class StructureError : public Error {
public:
    using Error::Error;
};

/// Raised when a solver is asked to handle an operator it does not support,
/// e.g. CG on an operator that is not tagged symmetric.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace linx
