#pragma once

#include <stdexcept>
#include <string>

namespace wavereg {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An exponent would leave the double-precision range. Carries the exponent
/// that tripped the guard.
class OverflowError : public std::overflow_error {
public:
    OverflowError(const std::string& what, double exponent)
        : std::overflow_error(what), exponent_(exponent) {}
    double exponent() const noexcept { return exponent_; }

private:
    double exponent_;
};

/// Caller-side precondition violated (e.g. a point outside the decay band).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The truncated Fourier integral would drop a non-negligible tail.
class TailTruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sampled data does not cover the region an integral needs.
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sampled data is non-zero outside the declared support.
class SupportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Forward-solver configuration violates stability or domain-size limits.
class SolverConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wavereg
