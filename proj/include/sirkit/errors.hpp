#pragma once

#include <stdexcept>
#include <string>

namespace sirkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter or configuration values outside their admissible domain.
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Initial compartments would require S(0) < 0.
class InfeasibleInitialState : public Error {
public:
    using Error::Error;
};

/// A fixed-step integration produced a materially negative compartment or
/// broke conservation; the step size is too coarse for the dynamics.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

/// An operation that needs a completed epidemic was given a log with
/// infectious individuals remaining.
class NotExtinct : public Error {
public:
    using Error::Error;
};

/// Too few usable data points (e.g. a minor outbreak cut the fit window short).
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A solved parameter left its admissible range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Requested a nontrivial final size for a non-epidemic regime.
class NoEpidemic : public Error {
public:
    using Error::Error;
};

/// Observed growth rate is not positive; the inversion is undefined.
class Subcritical : public Error {
public:
    using Error::Error;
};

/// A solved estimate violated its domain (reporting fraction or immune
/// fraction outside their intervals).
class DomainViolation : public Error {
public:
    using Error::Error;
};

/// A survey sample contained no individuals of the required class.
class EmptyDenominator : public Error {
public:
    using Error::Error;
};

/// A log-likelihood term has a non-positive argument at the given point.
class LogDomainError : public Error {
public:
    using Error::Error;
};

/// The normalizing integral of the closed-form rate maximizer is not positive.
class DegenerateIntegral : public Error {
public:
    using Error::Error;
};

/// File-format or I/O failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sirkit
