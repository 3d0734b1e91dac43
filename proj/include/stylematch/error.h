#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stylematch {

// Base for all library errors. Callers that only care about "something was
// wrong with the input" can catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value violated an operation's precondition (empty text, bad rate, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A file or record could not be parsed. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class NotFound : public Error {
public:
    using Error::Error;
};

}  // namespace stylematch
