#pragma once

#include <stdexcept>
#include <string>

namespace fastortho {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix or vector dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition (non-orthonormal basis, bad parameter, ...).
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Argument outside the domain of a closed-form evaluator.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative kernel did not converge within its sweep budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fastortho
