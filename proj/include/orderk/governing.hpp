#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orderk/combinatorics.hpp"
#include "orderk/subordinator.hpp"

namespace orderk {

/// |d/dt p_m(t) - (-k lambda p_m(t) + lambda sum_{j=1}^{m ^ k} p_{m-j}(t))|
/// with a central difference of width h on the left.
double ppok_dde_residual(const PoKParams& params, long long m, double t, double h);

/// Residual of the twice-differentiated recursion:
/// d^2/dt^2 p_m = (k lambda)^2 p_m - 2 k lambda^2 sum_j p_{m-j}
///              + lambda^2 sum_j sum_i p_{m-j-i}.
double ppok_dde2_residual(const PoKParams& params, long long m, double t, double h);

/// pmf of the PPoK subordinated by an inverse Gaussian process,
/// hat p_m(t) = int p_m(x) g(x,t) dx, by adaptive quadrature.
double subordinated_ig_pmf(const PoKParams& params, const SubordinatorSpec& ig, long long m,
                           double t, double quad_tol = 1e-10);

/// Residual of (d^2/dt^2 - 2 delta gamma d/dt) hat p_m
///            = 2 delta^2 lambda [ k hat p_m - sum_{j=1}^{m ^ k} hat p_{m-j} ].
double poisson_ig_orderk_dde_residual(const PoKParams& params, const SubordinatorSpec& ig,
                                      long long m, double t, double h, double quad_tol = 1e-10);

/// Density h(x,t) of the right-continuous inverse of the inverse Gaussian
/// subordinator, from differentiating the closed-form first-passage CDF:
///   h(x,t) = e^{-(g t - d x)^2 / (2t)} [ 2d/sqrt(2 pi t) - d g erfcx((g t + d x)/sqrt(2t)) ].
/// Valid for x >= 0 (x = 0 gives the boundary value the governing equation
/// needs).
double inverse_ig_density(double x, double t, double delta, double gamma);

/// pmf of the PPoK time-changed by the inverse of the inverse Gaussian
/// subordinator, hat p_m(t) = int p_m(x) h(x,t) dx.
double tcppok2_ig_pmf(const PoKParams& params, const SubordinatorSpec& ig, long long m, double t,
                      double quad_tol = 1e-10);

/// Residual of the first-order governing equation of the inverse-IG
/// time-changed process at t > 0 (the t = 0 atom is excluded):
///   d/dt hat p_m = 1/(2 delta^2) [ int ((k l)^2 p_m - 2 k l^2 S1 + l^2 S2) h dx
///                + 2 delta gamma int (-k l p_m + l S1) h dx + h(0,t) p_m'(0) ],
/// with p_m'(0) = -k lambda, lambda, 0 for m = 0, 1 <= m <= k, m > k.
double tcppok2_ig_dde_residual(const PoKParams& params, const SubordinatorSpec& ig, long long m,
                               double t, double h, double quad_tol = 1e-10);

struct ResidualSample {
    long long m = 0;
    double t = 0.0;
    double step = 0.0;
    double residual = 0.0;
};

struct ResidualReport {
    std::string equation;
    std::vector<double> steps;
    std::vector<ResidualSample> samples;
    std::optional<double> observed_order;  // set when >= 2 steps were used
};

enum class GoverningEquation { PpokFirstOrder, PpokSecondOrder, DirectIg, InverseIg };

/// Evaluate one governing-equation residual over a grid of (m, t) points
/// and finite-difference steps; the observed convergence order is the
/// median two-point Richardson estimate over samples above the round-off
/// floor.
ResidualReport run_residual_study(GoverningEquation eq, const PoKParams& params,
                                  const SubordinatorSpec& ig,
                                  const std::vector<long long>& m_values,
                                  const std::vector<double>& t_values,
                                  const std::vector<double>& steps, double quad_tol = 1e-10);

}  // namespace orderk
