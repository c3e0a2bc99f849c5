#pragma once

#include <stdexcept>
#include <string>

namespace apclust {

/// Base for every error raised by the library. Each subclass maps onto one
/// CLI exit code (see exit_code()).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or missing input data: empty point sets, non-finite coordinates,
/// out-of-range parameters.
class InputError : public Error {
public:
    using Error::Error;
};

/// Input file that cannot be interpreted (missing header columns).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Coordinates outside the region the local projection supports.
class UnsupportedRegionError : public InputError {
public:
    using InputError::InputError;
};

/// A run that would exceed the configured memory cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Clustering did not converge and fallback was disabled.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Meso threshold could not be derived from the intersection grid.
class DerivationError : public Error {
public:
    using Error::Error;
};

/// Synthetic generator could not satisfy its spec.
class GenerationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// 0 success, 1 I/O or unexpected failure, 2 input/format error,
/// 3 resource refusal, 4 convergence failure.
int exit_code(const Error& e) noexcept;

}  // namespace apclust
