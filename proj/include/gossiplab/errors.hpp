#pragma once

#include <stdexcept>
#include <string>

namespace gossiplab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: parameters, config values, malformed files.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Random generation could not satisfy a connectivity requirement within its budget.
class RetryExhausted : public Error {
public:
    using Error::Error;
};

class NotStronglyConnected : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Numerical failure (non-convergent eigensolver, ill-posed normalization, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public NumericalError {
public:
    NoConvergence(const std::string& what, long iterations)
        : NumericalError(what + " (iterations: " + std::to_string(iterations) + ")"),
          iterations_(iterations) {}

    long iterations() const noexcept { return iterations_; }

private:
    long iterations_;
};

/// The requested eigenvalue is not isolated, so its eigenvector normalization is ill-posed.
class NotSimple : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SizeOverflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BadStationaryVector : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidEpsilon : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Laplacian eigenvalue outside the range a closed form is valid for.
class XiOutOfRange : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class BadXi : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class MissingCoords : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace gossiplab
