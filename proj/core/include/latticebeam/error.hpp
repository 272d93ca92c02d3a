#pragma once

#include <stdexcept>
#include <string>

namespace latticebeam {

// Every failure raised by the library derives from Error so callers can
// catch broadly, then narrow down by type where the distinction matters
// (the CLI maps these onto its exit codes).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (x < 0, epsilon not in (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Integer parameter outside its supported range (Bessel order, M, m_limit, bits).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Linear system too close to singular to solve reliably.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Too few plane waves to represent the requested azimuthal orders.
class UndersamplingError : public Error {
public:
    using Error::Error;
};

/// Input carries no usable signal (e.g. every weight is zero).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// An analysis scan finished without locating the feature it looks for.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents or unsupported export format.
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace latticebeam
