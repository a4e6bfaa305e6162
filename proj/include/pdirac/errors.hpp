#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pdirac {

// Base for run-time numerical failures. Carries the spectral parameter at
// which the failure occurred so the CLI can report it.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::complex<double> lambda = {})
        : std::runtime_error(what), lambda_(lambda) {}
    std::complex<double> lambda() const { return lambda_; }

private:
    std::complex<double> lambda_;
};

// D(lambda) in {-2, 2}: the monodromy matrix has a double eigenvalue and the
// Floquet eigenvectors v_pm are not defined.
class DegenerateMultiplierError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Operation requested at a point of the essential spectrum where it has no
// meaning (e.g. the exclusion threshold, or a resolvent bound with Im k = 0).
class EssentialSpectrumError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// The adaptive integrator could not take a step of representable size.
class StepSizeUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A quadrature did not meet its accuracy target (Richardson check failed).
class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// ||M - sI||_F fell into the guard band between the FullPeriodic and Jordan
// classification thresholds.
class ClassificationAmbiguousError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Configuration file failed to parse or validate.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pdirac
