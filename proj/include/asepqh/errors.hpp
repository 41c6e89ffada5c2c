#pragma once

#include <stdexcept>
#include <string>

namespace asepqh {

// Base class for all recoverable failures raised by this library. The CLI maps
// these to exit code 2 and reports the concrete type name in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string type, const std::string& msg)
        : std::runtime_error(msg), type_(std::move(type)) {}
    const std::string& type() const noexcept { return type_; }

private:
    std::string type_;
};

// Input arguments outside a function's stated domain (negative rates,
// q outside [0,1), evaluation points off the support).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("DomainError", msg) {}
};

// Boundary parameters map outside the region A*C < 1 where the stationary
// representation converges. Carries the offending product for diagnostics.
class FanRegionViolation : public Error {
public:
    explicit FanRegionViolation(const std::string& msg)
        : Error("FanRegionViolation", msg) {}
};

// An (a,b,c,d,q) quadruple violates the sign/range pattern required to invert
// it back to boundary rates.
class InvalidAwParams : public Error {
public:
    explicit InvalidAwParams(const std::string& msg)
        : Error("InvalidAwParams", msg) {}
};

// Requested lattice size exceeds the supported bound.
class SizeLimitExceeded : public Error {
public:
    explicit SizeLimitExceeded(const std::string& msg)
        : Error("SizeLimitExceeded", msg) {}
};

// A linear or iterative stationary solve failed to reach its residual target.
class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& msg)
        : Error("SingularSystem", msg) {}
};

// A sequence argument has the wrong length.
class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& msg)
        : Error("LengthMismatch", msg) {}
};

// A recurrence denominator factor (1 - abcd q^k) vanished.
class DegenerateDenominator : public Error {
public:
    explicit DegenerateDenominator(const std::string& msg)
        : Error("DegenerateDenominator", msg) {}
};

// The two-point linear extraction of the Jacobi bands failed its third-point
// certification; indicates an implementation bug, not a data condition.
class LinearityViolation : public Error {
public:
    explicit LinearityViolation(const std::string& msg)
        : Error("LinearityViolation", msg) {}
};

// An index argument is outside its admissible range.
class IndexOutOfRange : public Error {
public:
    explicit IndexOutOfRange(const std::string& msg)
        : Error("IndexOutOfRange", msg) {}
};

// A scalar parameter is outside the range a formula is valid for.
class ParameterOutOfRange : public Error {
public:
    explicit ParameterOutOfRange(const std::string& msg)
        : Error("ParameterOutOfRange", msg) {}
};

// Two distinct atom generators exceed 1 simultaneously; defensive, cannot
// arise for the measures this library builds.
class UnsupportedAtomConfiguration : public Error {
public:
    explicit UnsupportedAtomConfiguration(const std::string& msg)
        : Error("UnsupportedAtomConfiguration", msg) {}
};

// A time sequence violates an ordering hypothesis.
class NonMonotoneTimes : public Error {
public:
    explicit NonMonotoneTimes(const std::string& msg)
        : Error("NonMonotoneTimes", msg) {}
};

// Adaptive quadrature failed to reach the requested accuracy within its node
// budget.
class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& msg)
        : Error("QuadratureFailure", msg) {}
};

// A constructed measure failed its internal hygiene checks (total mass,
// weight positivity, support envelope).
class MeasureValidationError : public Error {
public:
    explicit MeasureValidationError(const std::string& msg)
        : Error("MeasureValidationError", msg) {}
};

} // namespace asepqh
