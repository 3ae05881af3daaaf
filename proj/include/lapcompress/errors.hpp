#pragma once

#include <stdexcept>
#include <string>

namespace lapcompress {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input data: broken graph invariants, bad dimensions, out-of-range
// parameters. The message names the offending entity (edge, node, line).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// File parsing / writing problems. Messages carry paths and line numbers.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Numerical failures: ill-conditioned eigenbasis, singular systems,
// non-convergent solvers.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace lapcompress
