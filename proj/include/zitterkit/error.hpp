#pragma once

#include <stdexcept>
#include <string>

namespace zitterkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model or operation parameter is outside its admissible range.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A derivative stack or sample list is shorter than the operation needs.
class ArityError : public Error {
public:
    using Error::Error;
};

/// The operation is only defined for some Lagrangian orders.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

/// Initial data violates a physical constraint (on-shell, orthogonality, ...).
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

/// Operation precondition not met (e.g. off-shell momentum for a projection).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An eigenspace has the wrong dimension.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state.
class IntegrationDiverged : public Error {
public:
    IntegrationDiverged(const std::string& what, double last_good_time)
        : Error(what + " (last finite state at t=" + std::to_string(last_good_time) + ")"),
          last_good_time_(last_good_time) {}

    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

}  // namespace zitterkit
