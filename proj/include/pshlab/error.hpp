#pragma once

#include <stdexcept>
#include <string>

namespace pshlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point outside the admissible domain (r = 0, r >= 1, support leaves the ball).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation needs C^2 regularity that the function kind does not provide.
class SmoothnessError : public Error {
public:
    using Error::Error;
};

/// Invalid sizes, schedules or parameters.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Sampled supremum diverges, so the function cannot be normalized.
class UnboundedError : public Error {
public:
    using Error::Error;
};

/// Boundary method requested on a function that is not S^1-invariant.
class InvarianceError : public Error {
public:
    using Error::Error;
};

/// Lookup of a catalog name that does not exist.
class UnknownFunctionError : public Error {
public:
    explicit UnknownFunctionError(const std::string& name)
        : Error("unknown function: " + name) {}
};

/// An iterative estimate failed to settle.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace pshlab
