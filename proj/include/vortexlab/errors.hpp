/// @file errors.hpp
/// @brief Exception types for the library surface.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vortexlab {

/// Input outside the operation's mathematical domain (point outside the disk,
/// evaluation at a kernel singularity, invalid parameter range).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularityError : DomainError {
    using DomainError::DomainError;
};

/// Point-vortex separation guard tripped; carries the offending pair.
struct CollisionImminentError : std::runtime_error {
    CollisionImminentError(std::size_t i_, std::size_t j_, double distance_, double t_)
        : std::runtime_error("collision imminent between vortices " + std::to_string(i_) +
                             " and " + std::to_string(j_) + " (distance " +
                             std::to_string(distance_) + " at t=" + std::to_string(t_) + ")"),
          i(i_), j(j_), distance(distance_), t(t_) {}
    std::size_t i, j;
    double distance;
    double t;
};

/// Deposition grid does not cover the particles with the required margin.
struct GridCoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A particle left the closed unit disk during advection (signals a dt or
/// blob-radius choice too coarse for the run).
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance; carries the residual.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what_, double residual_)
        : std::runtime_error(what_), residual(residual_) {}
    double residual;
};

} // namespace vortexlab
