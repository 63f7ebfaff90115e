#pragma once

#include <stdexcept>
#include <string>

namespace fanoguide {

/// Invalid user-supplied parameters or configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Mesh generation, validation or import failure.
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear-solver failure (singular or numerically unusable system).
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double pivot_magnitude = 0.0)
        : std::runtime_error(what), pivot(pivot_magnitude) {}
    /// Geometric-mean pivot magnitude of the factorization, when available.
    double pivot;
};

/// A bracketing/scan search that did not find its target.
class NotFoundError : public std::runtime_error {
public:
    NotFoundError(const std::string& what, std::string scan = {})
        : std::runtime_error(what), scan_table(std::move(scan)) {}
    /// CSV-formatted scan samples, for diagnostics.
    std::string scan_table;
};

} // namespace fanoguide
