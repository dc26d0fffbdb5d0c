#pragma once

#include <stdexcept>
#include <string>

namespace indicate {

// Bad input data or configuration: malformed files, violated invariants.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Bad command-line usage (maps to exit code 2 in the CLI).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite results, singular systems, failed numeric evaluations.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A convergence diagnostic could not be computed (e.g. zero-variance chain).
class DiagnosticError : public std::runtime_error {
public:
    explicit DiagnosticError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace indicate
