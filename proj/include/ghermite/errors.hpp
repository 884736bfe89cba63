#pragma once

#include <stdexcept>
#include <string>

namespace ghermite {

/// Base class of every numerical failure raised by the library.
/// The CLI maps these to exit status 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside the mathematical domain of an operation.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    QuadratureFailure(const std::string& what, double previous, double last)
        : NumericalError(what), previous_(previous), last_(last) {}
    double previous_estimate() const { return previous_; }
    double last_estimate() const { return last_; }

private:
    double previous_;
    double last_;
};

/// Squared norm of a Stieltjes residual vanished: the grid cannot resolve
/// the requested degree.
class PrecisionExhausted : public NumericalError {
public:
    PrecisionExhausted(const std::string& what, int degree) : NumericalError(what), degree_(degree) {}
    int degree() const { return degree_; }

private:
    int degree_;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Forward recurrence overflowed; the caller should rescale the argument.
class ScaledEvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TableInconsistency : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InfeasibleCase : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FieldSingularity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularConfiguration : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ghermite
