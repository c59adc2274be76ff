#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orderk/combinatorics.hpp"
#include "orderk/ppok.hpp"
#include "orderk/stats.hpp"
#include "orderk/subordinator.hpp"

namespace orderk {

enum class TimeChangeMode {
    Direct,   // N^(k)(D(t))
    Inverse,  // N^(k)(E(t)), E the right-continuous inverse of D
};

struct TimeChangedSpec {
    PoKParams pok = PoKParams(1, 1.0);
    SubordinatorSpec sub = SubordinatorSpec::drift(1.0);
    TimeChangeMode mode = TimeChangeMode::Direct;
};

/// A counting path observed on a uniform grid. Grid sampling is the natural
/// output of the time-change composition: several batches may land between
/// consecutive grid points, so increments are not bounded by k.
struct CountGridPath {
    double step = 0.0;
    std::vector<std::int64_t> counts;

    [[nodiscard]] std::vector<double> grid() const;
};

/// Simulate the time-changed process on [0, horizon]: generate the
/// (inverse) subordinator on the grid, then evaluate a single PPoK
/// trajectory at those operational times.
CountGridPath simulate(const TimeChangedSpec& spec, double horizon, double step,
                       RngStream stream);

enum class PmfMethod { Closed, Quadrature, MonteCarlo };

/// P[Q^(1)(t) = n] for the directly subordinated process.
///   Closed      - Gamma family only; finite partition sum, exact in fp.
///   Quadrature  - Gamma / InverseGaussian; adaptive integration against
///                 the subordinator density.
///   MonteCarlo  - any family; averages the conditional order-k pmf over
///                 draws of D(t). stderr_ is 0 for the deterministic routes.
McEstimate tcppok1_pmf(const TimeChangedSpec& spec, double t, long long n, PmfMethod method,
                       std::size_t n_reps = 0, RngStream stream = {}, unsigned n_threads = 1);

/// Whole pmf row 0..n_max; Monte Carlo draws are shared across all n.
std::vector<McEstimate> tcppok1_pmf_table(const TimeChangedSpec& spec, double t, long long n_max,
                                          PmfMethod method, std::size_t n_reps = 0,
                                          RngStream stream = {}, unsigned n_threads = 1);

/// P[Q^(2)(t) = n] for the inverse-subordinated process, by Monte Carlo
/// over inverse-subordinator samples: the alternating moment series and the
/// expectation commute, and E[p_n(E(t))] has a bounded integrand. step is
/// the operational-time grid used for the inverse paths (O(step) bias).
McEstimate tcppok2_pmf(const TimeChangedSpec& spec, double t, long long n, std::size_t n_reps,
                       double step, RngStream stream, unsigned n_threads = 1);

std::vector<McEstimate> tcppok2_pmf_table(const TimeChangedSpec& spec, double t, long long n_max,
                                          std::size_t n_reps, double step, RngStream stream,
                                          unsigned n_threads = 1);

/// Exact moments of the direct-mode process (families with finite first two
/// moments): mean k(k+1)/2 lambda E[D(t)], covariance
/// k(k+1)(2k+1)/6 lambda E[D(s)] + (k(k+1)/2 lambda)^2 Var[D(s)], s <= t.
double tc_mean(const TimeChangedSpec& spec, double t);
double tc_cov(const TimeChangedSpec& spec, double s, double t);
double tc_var(const TimeChangedSpec& spec, double t);

struct LrdFit {
    std::vector<double> t_grid;
    std::vector<double> corr;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Estimate Corr[Q(s), Q(t)] across the t grid with common paths and fit
/// the log-log decay slope.
LrdFit lrd_decay_check(const TimeChangedSpec& spec, double s, const std::vector<double>& t_grid,
                       std::size_t n_reps, double step, RngStream stream,
                       unsigned n_threads = 1);

enum class AsymptoticRegime { SmallT, LargeT };

/// The (coefficient, exponent) pair of E[Q^(2)(t)] ~ coefficient * t^exponent
/// in the requested regime. Two parameterizations of the tempered-stable
/// large-t coefficient circulate; the primary value uses the tempering
/// parameter (the reading consistent with E[E(t)] ~ t / f'(0+)), and
/// alt_coefficient carries the process-rate reading.
struct AsymptoticMean {
    double coefficient = 0.0;
    double exponent = 0.0;
    std::optional<double> alt_coefficient;
};

AsymptoticMean tcppok2_asymptotic_mean(const TimeChangedSpec& spec, AsymptoticRegime regime);

/// First-order transition rates of the direct-mode process: the rate of a
/// jump of size i is -sum_{x in Omega(k,i)} (-lambda)^zeta / Pi! f^(zeta)(k lambda).
/// The rates sum to f(k lambda) over all i >= 1.
std::vector<double> tcppok1_jump_rates(const TimeChangedSpec& spec, int max_jump);

/// Moment accumulators of Q(t_j) over common paths at each requested time
/// (exact increments in Direct mode; grid inversion with the given step in
/// Inverse mode). Serves mean-curve and terminal-moment estimation.
std::vector<MomentAccumulator> mc_count_moments(const TimeChangedSpec& spec,
                                                const std::vector<double>& t_points,
                                                std::size_t n_reps, double step, RngStream stream,
                                                unsigned n_threads = 1);

}  // namespace orderk
