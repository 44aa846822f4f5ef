#pragma once
#include <stdexcept>
#include <string>

namespace nfem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Chart coordinates outside the surface's open domain.
struct DomainError : Error { using Error::Error; };
/// Degenerate geometric input (coincident points, undefined basis).
struct GeometryError : Error { using Error::Error; };
/// Invalid configuration value.
struct ConfigError : Error { using Error::Error; };
/// Stationary-point solver failed to reach residual tolerance.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what), best_residual(residual) {}
    double best_residual;
};
/// Operation precondition violated (e.g. mixed-sign antenna x for the plate closed form).
struct PreconditionError : Error { using Error::Error; };
/// Phase Hessian too close to singular for the stationary-phase formula.
struct DegenerateHessianError : Error { using Error::Error; };
/// Quadrature node count exceeds the configured budget.
struct BudgetError : Error { using Error::Error; };
/// Estimator model has zero energy.
struct ModelError : Error { using Error::Error; };
/// Profile too narrow for the requested lobe metric.
struct MetricsError : Error { using Error::Error; };
/// 1D minimizer ended on the search-interval boundary.
struct BoundaryError : Error { using Error::Error; };
/// All least-squares weights vanished.
struct DegenerateWeightError : Error { using Error::Error; };

} // namespace nfem
