#pragma once

#include <stdexcept>
#include <string>

namespace smce {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands of a ring operation have different block sizes.
class SizeMismatch : public Error {
public:
    using Error::Error;
};

/// Scheme parameters violate an invariant (even r, d_v >= r, ...).
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// A key or ciphertext does not match the parameters it is used with.
class ParameterMismatch : public Error {
public:
    using Error::Error;
};

/// Serialized data is truncated or malformed.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A retry-bounded procedure exhausted its attempts.
class RetryExhausted : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace smce
