#pragma once

#include <functional>

namespace qw {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

inline constexpr long kDefaultQuadratureBudget = 1'000'000;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [lo, hi].
/// Bisects the interval with the largest |K15 - G7| until the summed
/// estimate drops to tol. Throws QuadratureError when the evaluation budget
/// runs out and DomainError for tol < 1e-12.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi, double tol,
                           long max_evaluations = kDefaultQuadratureBudget);

/// Integral of a density supported on (-1/sqrt(2), 1/sqrt(2)) with inverse
/// square-root endpoint singularities, after x = sin(u) / sqrt(2). The
/// range is split at the origin where the weight may jump.
QuadratureResult integrate_density(const std::function<double(double)>& f, double tol,
                                   long max_evaluations = kDefaultQuadratureBudget);

// Same substitution over [lo, hi], clipped to the support.
QuadratureResult integrate_density(const std::function<double(double)>& f, double lo, double hi, double tol,
                                   long max_evaluations = kDefaultQuadratureBudget);

}  // namespace qw
