#pragma once

#include <stdexcept>
#include <string>

namespace hahn {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Both lattice seeds collapse onto the fixed point; caller bug.
class DegenerateSeed : public Error {
public:
    using Error::Error;
};

/// No analytic derivative at the fixed point and the lattice limit
/// procedure did not converge.
class DerivativeAtFixedPointUnavailable : public Error {
public:
    using Error::Error;
};

class FixedPointInput : public Error {
public:
    using Error::Error;
};

class SeriesNotConverged : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class MissingNeighbor : public Error {
public:
    using Error::Error;
};

class BothMultipliersZero : public Error {
public:
    using Error::Error;
};

class DegenerateSystem : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    MaxIterations(const std::string& msg, double grad_norm)
        : Error(msg), grad_norm(grad_norm) {}
    double grad_norm;
};

class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class SingularCoefficient : public Error {
public:
    using Error::Error;
};

class ExponentialZero : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnknownFixture : public Error {
public:
    using Error::Error;
};

}  // namespace hahn
