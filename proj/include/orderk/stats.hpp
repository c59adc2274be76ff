#pragma once

#include <cstddef>
#include <vector>

#include "orderk/numeric.hpp"

namespace orderk {

/// A Monte Carlo point estimate with its standard error.
struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t n_reps = 0;
};

/// Streaming power sums up to fourth order. Enough for the mean, the sample
/// variance, and the standard error of the variance estimator
///   SE(s^2) = sqrt((m4 - s^4 (n-3)/(n-1)) / n).
class MomentAccumulator {
public:
    void add(double x) {
        ++n_;
        s1_.add(x);
        s2_.add(x * x);
        s3_.add(x * x * x);
        s4_.add(x * x * x * x);
    }

    void merge(const MomentAccumulator& other);

    [[nodiscard]] std::size_t count() const { return n_; }
    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;        // unbiased (n-1)
    [[nodiscard]] double se_mean() const;
    [[nodiscard]] double se_variance() const;     // fourth-moment based
    [[nodiscard]] double central_moment3() const;
    [[nodiscard]] double central_moment4() const;

    /// Standard error of (s^2 - mean), the quantity whose sign decides
    /// over/underdispersion. Delta method with Cov(mean, s^2) = mu3/n.
    [[nodiscard]] double se_overdispersion() const;

    [[nodiscard]] McEstimate mean_estimate() const { return {mean(), se_mean(), n_}; }
    [[nodiscard]] McEstimate variance_estimate() const { return {variance(), se_variance(), n_}; }

private:
    std::size_t n_ = 0;
    CompensatedSum s1_, s2_, s3_, s4_;
};

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::size_t bins_used = 0;
};

/// Goodness-of-fit test of observed bin counts against expected
/// probabilities. Trailing bins are pooled until each pooled bin has
/// expected count >= min_expected; any leftover mass goes into the last bin.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected_probs, double n_total,
                               double min_expected = 5.0);

/// Two-sample homogeneity test on aligned histograms (bins pooled so that
/// each pooled bin has at least min_expected entries in the combined data).
ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b,
                                      double min_expected = 5.0);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(y) against log(x); all data must be positive.
LineFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace orderk
