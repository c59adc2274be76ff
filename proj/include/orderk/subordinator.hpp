#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "orderk/random.hpp"

namespace orderk {

struct UnsupportedFamilyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InversePathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SubordinatorFamily { Drift, Gamma, TemperedStable, InverseGaussian };

/// A parametric Lévy subordinator. The family fixes the Bernstein function
/// f with E[e^{-s D(t)}] = e^{-t f(s)}:
///   Drift(b):               f(s) = b s
///   Gamma(p, alpha):        f(s) = p log(1 + s/alpha)
///   TemperedStable(a, mu):  f(s) = (s + mu)^a - mu^a,  a in (0,1), mu >= 0
///   InverseGaussian(d, g):  f(s) = d (sqrt(2s + g^2) - g)
struct SubordinatorSpec {
    SubordinatorFamily family = SubordinatorFamily::Drift;
    double drift_slope = 0.0;  // Drift b
    double shape_rate = 0.0;   // Gamma p (shape accrued per unit time)
    double rate = 0.0;         // Gamma alpha
    double stability = 0.0;    // TemperedStable alpha
    double tempering = 0.0;    // TemperedStable mu
    double delta = 0.0;        // InverseGaussian delta
    double gamma = 0.0;        // InverseGaussian gamma

    static SubordinatorSpec drift(double b);
    static SubordinatorSpec gamma_process(double p, double alpha);
    static SubordinatorSpec tempered_stable(double alpha, double mu);
    static SubordinatorSpec inverse_gaussian(double delta, double gamma);

    [[nodiscard]] std::string name() const;
};

/// Bernstein function f(s), s >= 0; f(0) = 0 for every family.
double bernstein(const SubordinatorSpec& spec, double s);

/// j-th derivative of the Bernstein function, j >= 1. Needed for the
/// first-order transition rates of the subordinated counting process.
double bernstein_derivative(const SubordinatorSpec& spec, int order, double s);

/// The same derivative as (sign, log|value|), stable for orders where the
/// factorial growth overflows a double. sign is 0 when the derivative
/// vanishes identically (drift beyond order 1).
struct SignedLog {
    double sign = 0.0;
    double log_abs = 0.0;
};
SignedLog bernstein_derivative_log(const SubordinatorSpec& spec, int order, double s);

/// E[D(t)] = t f'(0+) and Var[D(t)] = -t f''(0+). Throws for the tempered
/// stable family with tempering 0 (stable subordinators have infinite mean).
double subordinator_mean(const SubordinatorSpec& spec, double t);
double subordinator_variance(const SubordinatorSpec& spec, double t);

/// One increment D(dt), exact in distribution for every family. Tempered
/// stable draws are produced by exponential tilting rejection on the stable
/// sampler, with expected iteration count e^{mu^alpha * dt}; dt should be
/// small enough that this stays below ~100.
double sample_increment(const SubordinatorSpec& spec, double dt, Rng& rng);

/// A trajectory sampled on the uniform grid {0, step, 2 step, ...};
/// values[0] = 0 and values are non-decreasing.
struct SamplePath {
    double step = 0.0;
    std::vector<double> values;

    [[nodiscard]] std::vector<double> grid() const;
    [[nodiscard]] double time_at(std::size_t i) const { return static_cast<double>(i) * step; }
};

/// Forward path by cumulative summation of independent increments.
SamplePath simulate_path(const SubordinatorSpec& spec, double horizon, double step, Rng& rng);

/// Right-continuous inverse E(t) = inf{r : D(r) > t} on the uniform t-grid
/// with the given step. The forward path is simulated on an r-grid of the
/// same step, so values carry an O(step) upward bias. Throws
/// InversePathError if D has not exceeded the horizon after max_steps grid
/// points.
SamplePath inverse_path(const SubordinatorSpec& spec, double horizon_t, double step, Rng& rng,
                        std::size_t max_steps = 100'000'000);

/// First-passage times of D over each level (levels must be ascending).
/// Same grid construction and bias as inverse_path.
std::vector<double> first_passage_times(const SubordinatorSpec& spec,
                                        const std::vector<double>& levels, double step, Rng& rng,
                                        std::size_t max_steps = 100'000'000);

/// Closed-form marginal density of D(t); Gamma and InverseGaussian only.
double subordinator_density(const SubordinatorSpec& spec, double x, double t);

/// E[G^q(t)] for the inverse Gaussian subordinator via the half-integer
/// Bessel closed form; q a non-negative integer.
double ig_moment(int q, double t, double delta, double gamma);

}  // namespace orderk
