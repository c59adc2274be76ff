#pragma once

#include <cstdint>
#include <vector>

#include "orderk/stats.hpp"
#include "orderk/time_change.hpp"

namespace orderk {

struct RuinSolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Claim-size distribution; Erlang(shape, rate), with exponential claims as
/// shape 1. Keeping claims in the Erlang family makes every i-fold
/// convolution another Erlang, so the solver kernels stay exact.
struct ClaimDist {
    int shape = 1;
    double rate = 1.0;

    static ClaimDist exponential(double mean);
    static ClaimDist erlang(int shape, double rate);

    [[nodiscard]] double mean() const { return static_cast<double>(shape) / rate; }
    [[nodiscard]] double cdf(double x) const;
    double sample_sum(int count, Rng& rng) const;  // sum of `count` iid claims
};

/// A mixture sum_n weights[n-1] * F^{*n} of convolution powers of the base
/// claim distribution. Covers both the uniformly weighted aggregate
/// B1 = (1/k) sum_{i<=k} F^{*i} and the jump-rate mixture of the
/// subordinated process.
struct AggregateClaimDist {
    ClaimDist base;
    std::vector<double> weights;

    /// B1 for batches of at most k claims.
    static AggregateClaimDist uniform_batches(const ClaimDist& base, int k);

    /// Weights q_n / f(k lambda) from the first-order transition rates of a
    /// Direct-mode time-changed spec, truncated once the unassigned rate
    /// mass falls below tail_eps.
    static AggregateClaimDist from_jump_rates(const ClaimDist& base, const TimeChangedSpec& spec,
                                              double tail_eps = 1e-10);

    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double density(double x) const;
    [[nodiscard]] double integrated_tail(double y) const;  // int_0^y (1 - cdf)
    [[nodiscard]] double mean() const;
};

/// Surplus model u + c t - sum_{j <= Q(t)} Z_j with Direct-mode
/// time-changed order-k arrivals.
struct RiskModel {
    double premium_rate = 1.0;
    double initial_capital = 0.0;
    ClaimDist claims;
    TimeChangedSpec arrivals;
};

/// rho = c / (mu E[Q(1)]) - 1; positive means premiums outrun expected
/// claims. Not enforced anywhere, only reported.
double premium_loading(const RiskModel& model);

struct RuinEstimate {
    std::vector<double> u_grid;
    std::vector<double> y_grid;
    std::vector<McEstimate> psi;                        // per u, finite-horizon
    std::vector<std::vector<McEstimate>> deficit_cdf;   // [u][y] = G(u, y)
    double horizon = 0.0;
    double sim_step = 0.0;           // 0 for the exact drift event loop
    double late_ruin_fraction = 0.0; // worst-case share of ruin times in the last 10%
    bool horizon_warning = false;    // late_ruin_fraction > 1%
    std::size_t n_reps = 0;
};

/// Monte Carlo ruin surface over a grid of initial capitals (common paths
/// across all u levels: one aggregate-loss trajectory serves every level).
/// Drift arrivals run an exact event loop; other families aggregate claims
/// on a grid of width sim_step (O(step) premium bias, documented).
/// The finite horizon makes psi a lower bound of the infinite-horizon ruin
/// probability; the late-ruin diagnostic flags horizons that look too short.
RuinEstimate simulate_ruin(const RiskModel& model, double horizon, std::size_t n_reps,
                           const std::vector<double>& u_grid, const std::vector<double>& y_grid,
                           double sim_step, RngStream stream, unsigned n_threads = 1);

/// Which aggregate enters the governing equation for G(u, y).
///   BatchMixture     - claim mixture weighted by the jump rates q_n
///                      (consistent with the transition rates; reduces to
///                      B1 for drift time change). Default.
///   UniformAggregate - B1 with an extra factor k inside the bracket; kept
///                      for comparison, and rejected by Monte Carlo data
///                      for k >= 2.
enum class GEquationForm { BatchMixture, UniformAggregate };

struct GOdeResidualField {
    std::vector<double> u;         // interior grid points
    std::vector<double> residual;  // |lhs - rhs|
    std::vector<double> budget;    // 3 sigma MC + discretization allowance
    [[nodiscard]] bool within_budget() const;
};

/// Plug a Monte Carlo G(., y) into the governing equation: central
/// difference in u against the convolution right-hand side, with an honest
/// error budget from the MC standard errors, the finite-difference
/// truncation, and the simulation grid bias.
GOdeResidualField g_ode_residual(const RiskModel& model, const RuinEstimate& estimate,
                                 std::size_t y_index,
                                 GEquationForm form = GEquationForm::BatchMixture);

struct GCurve {
    double y = 0.0;
    double step = 0.0;
    std::vector<double> values;  // G(i * step, y)

    [[nodiscard]] double at(double u) const;  // linear interpolation
};

/// March the governing equation from the explicit G(0, y): ABM4
/// predictor-corrector in u with trapezoid convolution on the same grid.
/// Restricted to k = 1 per its contract; use solve_g_fixed_point otherwise.
GCurve solve_g_k1(const RiskModel& model, double y, double u_max, double step);

struct FixedPointResult {
    GCurve curve;
    int iterations = 0;
    double last_change = 0.0;
};

/// General-k solver: iterates on the integral of G over u that the
/// boundary identity for G(0, y) consumes, with damping 0.5, then marches
/// the equation. Under the default BatchMixture form the boundary value
/// does not actually depend on the integral and the iteration settles
/// immediately; under UniformAggregate it performs the literal iteration.
/// Throws RuinSolverError (with the last two iterates) on non-convergence.
FixedPointResult solve_g_fixed_point(const RiskModel& model, double y, double u_max, double step,
                                     int max_iter = 100, double tol = 1e-10,
                                     GEquationForm form = GEquationForm::BatchMixture);

}  // namespace orderk
