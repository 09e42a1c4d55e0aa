#pragma once

#include <stdexcept>
#include <string>

namespace epb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument or precondition violation (bad member id, u <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Exhaustive-enumeration guard exceeded.
struct CapacityError : Error {
    using Error::Error;
};

// Net hierarchy cannot resolve distinct points at the requested depth.
struct ResolutionError : Error {
    using Error::Error;
};

// Experiment phases reused RNG state that must stay disjoint.
struct ProtocolError : Error {
    using Error::Error;
};

// Normalizer is not strictly positive on some class member.
struct NormalizerError : Error {
    using Error::Error;
};

// Quadrature failure (nonfinite integrand, budget exhausted).
struct IntegrationError : Error {
    using Error::Error;
};

// Envelope violates a hypothesis required by the operation (e.g. D(1) >= 2).
struct HypothesisError : Error {
    using Error::Error;
};

// Convex solver exhausted its iteration cap; carries the best value found.
struct OptimizationError : Error {
    double best_value;
    OptimizationError(const std::string& what, double best)
        : Error(what), best_value(best) {}
};

// Config/schema violation; CLI maps this to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace epb
