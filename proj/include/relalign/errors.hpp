#pragma once

#include <stdexcept>
#include <string>

namespace relalign {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CycleError : public Error {
public:
    using Error::Error;
};

class UnknownRole : public Error {
public:
    using Error::Error;
};

class UnderflowError : public Error {
public:
    using Error::Error;
};

class NotEnabled : public Error {
public:
    using Error::Error;
};

class BadPartition : public Error {
public:
    using Error::Error;
};

class NoAlignment : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class TargetNotFound : public Error {
public:
    using Error::Error;
};

class NoRunFound : public Error {
public:
    using Error::Error;
};

class ModelError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(line > 0 ? what + " at line " + std::to_string(line) + ", column " + std::to_string(column) : what),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace relalign
