#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orderk {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration on [a,b] to an absolute
/// tolerance. Intervals with the largest error estimate are bisected first.
/// split_points seed the initial subdivision (e.g. at a density mode).
/// Throws QuadratureError if the tolerance cannot be met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, const std::vector<double>& split_points = {},
                           std::size_t max_intervals = 4000);

/// Integral over (0, infinity) via the substitution x = scale * v/(1-v).
/// scale should sit near the bulk of the integrand's mass; interior split
/// hints (in x coordinates) are mapped through the substitution.
QuadratureResult integrate_positive_axis(const std::function<double(double)>& f, double scale,
                                         double abs_tol,
                                         const std::vector<double>& split_points = {},
                                         std::size_t max_intervals = 4000);

}  // namespace orderk
