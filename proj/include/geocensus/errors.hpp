#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geocensus {

// Formula text could not be parsed; `offset` is the byte position of the
// offending token in the input string.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Expression evaluation produced a non-finite value (sqrt of a negative,
// division by zero, overflow).
class EvalDomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sphere-cap state within the pole guard band where the metric coefficient
// 1/h blows up.
class PoleProximityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |h'| exceeds 1 somewhere on the requested path, so the surface has no
// classical embedding as a surface of revolution.
class NonEmbeddableError : public std::runtime_error {
public:
    NonEmbeddableError(const std::string& what, double max_slope)
        : std::runtime_error(what), max_slope_(max_slope) {}
    double max_slope() const { return max_slope_; }

private:
    double max_slope_;
};

// Parameter too close to a critical point; trip quantities diverge there.
class BoundaryProximityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double error_estimate)
        : std::runtime_error(what), error_estimate_(error_estimate) {}
    double error_estimate() const { return error_estimate_; }

private:
    double error_estimate_;
};

// ODE event (turning point, pole crossing) not located before the safety
// horizon.
class EventNotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integration finished but violated a conservation tolerance contract.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace geocensus
