#pragma once

#include <stdexcept>
#include <string>

namespace qw {

// Root of every error raised by the library. The CLI maps subclasses onto
// exit codes, the Python module onto exception classes of the same name.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class ZeroStateError : public DomainError {
public:
    using DomainError::DomainError;
};

// Requested time horizon exceeds the configured cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Bin width too narrow for the lattice spacing at the given time.
class BinError : public DomainError {
public:
    using DomainError::DomainError;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

// A denominator that should be bounded away from zero vanished.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Root selection of the transfer quadratic was ambiguous or empty.
class BranchError : public Error {
public:
    using Error::Error;
};

}  // namespace qw
