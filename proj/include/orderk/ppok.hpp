#pragma once

#include <cstdint>
#include <vector>

#include "orderk/combinatorics.hpp"
#include "orderk/random.hpp"

namespace orderk {

/// A realized trajectory of a batch-arrival counting process: strictly
/// ascending jump times within [0, horizon], each jump adding between 1 and
/// k to the running total.
struct CountPath {
    std::vector<double> jump_times;
    std::vector<int> jump_sizes;
    std::vector<std::int64_t> cumulative;
    double horizon = 0.0;

    /// Count at time t (0 before the first jump).
    [[nodiscard]] std::int64_t count_at(double t) const;

    [[nodiscard]] std::int64_t terminal_count() const {
        return cumulative.empty() ? 0 : cumulative.back();
    }
};

/// Simulate one PPoK path on [0, horizon]: batch arrivals with
/// Exponential(k lambda) interarrival times, batch sizes uniform on
/// {1,...,k}. Reproducible from the stream.
CountPath simulate_ppok(const PoKParams& params, double horizon, RngStream stream);

/// Exact moments: mean k(k+1) lambda t / 2, variance k(k+1)(2k+1) lambda t / 6,
/// covariance the variance formula evaluated at min(s,t).
double ppok_mean(const PoKParams& params, double t);
double ppok_var(const PoKParams& params, double t);
double ppok_cov(const PoKParams& params, double s, double t);

/// Corr[N(s), N(t)] = sqrt(min/max); independent of k and lambda.
double ppok_corr(const PoKParams& params, double s, double t);

/// Variance-to-mean ratio (2k+1)/3; independent of lambda and t.
double ppok_dispersion_index(const PoKParams& params);

struct LlnPoint {
    double horizon = 0.0;
    double exceedance_prob = 0.0;  // P[ |N(t)/t - limit| > epsilon ]
    std::size_t n_reps = 0;
};

struct LlnReport {
    double limit = 0.0;  // k(k+1) lambda / 2
    double epsilon = 0.0;
    std::vector<LlnPoint> points;
};

/// Empirical check that N(t)/t concentrates on k(k+1) lambda / 2: reports
/// the exceedance probability for each horizon (common paths across
/// horizons).
LlnReport ppok_lln_check(const PoKParams& params, const std::vector<double>& horizons,
                         double epsilon, std::size_t n_reps, RngStream stream,
                         unsigned n_threads = 1);

}  // namespace orderk
