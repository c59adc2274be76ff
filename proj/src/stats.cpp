#include "orderk/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "orderk/special.hpp"

namespace orderk {

void MomentAccumulator::merge(const MomentAccumulator& other) {
    n_ += other.n_;
    s1_.add(other.s1_.value());
    s2_.add(other.s2_.value());
    s3_.add(other.s3_.value());
    s4_.add(other.s4_.value());
}

double MomentAccumulator::mean() const {
    return n_ ? s1_.value() / static_cast<double>(n_) : 0.0;
}

double MomentAccumulator::variance() const {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double m = mean();
    const double raw2 = s2_.value() / n;
    return (raw2 - m * m) * n / (n - 1.0);
}

double MomentAccumulator::central_moment3() const {
    const double n = static_cast<double>(n_);
    const double m = mean();
    const double r2 = s2_.value() / n;
    const double r3 = s3_.value() / n;
    return r3 - 3.0 * m * r2 + 2.0 * m * m * m;
}

double MomentAccumulator::central_moment4() const {
    const double n = static_cast<double>(n_);
    const double m = mean();
    const double r2 = s2_.value() / n;
    const double r3 = s3_.value() / n;
    const double r4 = s4_.value() / n;
    return r4 - 4.0 * m * r3 + 6.0 * m * m * r2 - 3.0 * m * m * m * m;
}

double MomentAccumulator::se_mean() const {
    if (n_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n_));
}

double MomentAccumulator::se_variance() const {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double s2 = variance();
    const double v = (central_moment4() - s2 * s2 * (n - 3.0) / (n - 1.0)) / n;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double MomentAccumulator::se_overdispersion() const {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double s2 = variance();
    const double v = (central_moment4() - s2 * s2 * (n - 3.0) / (n - 1.0) + s2 -
                      2.0 * central_moment3()) /
                     n;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

namespace {

ChiSquareResult chi_square_from_pools(const std::vector<double>& obs,
                                      const std::vector<double>& exp, double dof_reduction) {
    ChiSquareResult r;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = obs[i] - exp[i];
        r.statistic += d * d / exp[i];
    }
    r.bins_used = obs.size();
    r.dof = static_cast<double>(obs.size()) - dof_reduction;
    if (r.dof < 1.0) r.dof = 1.0;
    r.p_value = chi_square_pvalue(r.statistic, r.dof);
    return r;
}

}  // namespace

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected_probs, double n_total,
                               double min_expected) {
    if (observed.size() != expected_probs.size())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    std::vector<double> obs_pool;
    std::vector<double> exp_pool;
    double acc_obs = 0.0;
    double acc_exp = 0.0;
    double prob_seen = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        acc_obs += observed[i];
        acc_exp += expected_probs[i] * n_total;
        prob_seen += expected_probs[i];
        if (acc_exp >= min_expected) {
            obs_pool.push_back(acc_obs);
            exp_pool.push_back(acc_exp);
            acc_obs = acc_exp = 0.0;
        }
    }
    // Remaining mass (beyond the listed bins plus any unpooled tail).
    double tail_obs = acc_obs;
    double tail_exp = acc_exp + (1.0 - prob_seen) * n_total;
    if (tail_exp > 1e-12) {
        if (tail_exp < min_expected && !obs_pool.empty()) {
            obs_pool.back() += tail_obs;
            exp_pool.back() += tail_exp;
        } else {
            obs_pool.push_back(tail_obs);
            exp_pool.push_back(tail_exp);
        }
    }
    if (obs_pool.size() < 2) throw std::invalid_argument("chi_square_gof: fewer than 2 usable bins");
    return chi_square_from_pools(obs_pool, exp_pool, 1.0);
}

ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b, double min_expected) {
    if (counts_a.size() != counts_b.size())
        throw std::invalid_argument("chi_square_two_sample: size mismatch");
    // Pool bins so that combined counts reach the threshold.
    std::vector<double> a_pool, b_pool;
    double acc_a = 0.0, acc_b = 0.0;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        acc_a += counts_a[i];
        acc_b += counts_b[i];
        if (acc_a + acc_b >= 2.0 * min_expected) {
            a_pool.push_back(acc_a);
            b_pool.push_back(acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (acc_a + acc_b > 0.0) {
        if (!a_pool.empty()) {
            a_pool.back() += acc_a;
            b_pool.back() += acc_b;
        } else {
            a_pool.push_back(acc_a);
            b_pool.push_back(acc_b);
        }
    }
    if (a_pool.size() < 2)
        throw std::invalid_argument("chi_square_two_sample: fewer than 2 usable bins");
    const double n_a = [&] {
        double s = 0.0;
        for (double v : a_pool) s += v;
        return s;
    }();
    const double n_b = [&] {
        double s = 0.0;
        for (double v : b_pool) s += v;
        return s;
    }();
    ChiSquareResult r;
    for (std::size_t i = 0; i < a_pool.size(); ++i) {
        const double tot = a_pool[i] + b_pool[i];
        const double ea = tot * n_a / (n_a + n_b);
        const double eb = tot * n_b / (n_a + n_b);
        if (ea > 0.0) r.statistic += (a_pool[i] - ea) * (a_pool[i] - ea) / ea;
        if (eb > 0.0) r.statistic += (b_pool[i] - eb) * (b_pool[i] - eb) / eb;
    }
    r.bins_used = a_pool.size();
    r.dof = static_cast<double>(a_pool.size()) - 1.0;
    r.p_value = chi_square_pvalue(r.statistic, r.dof);
    return r;
}

LineFit least_squares_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares_fit: need >= 2 aligned points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

LineFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("log_log_fit: data must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return least_squares_fit(lx, ly);
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson_correlation: need >= 2 aligned points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double cxy = 0.0, cxx = 0.0, cyy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cxy += (x[i] - mx) * (y[i] - my);
        cxx += (x[i] - mx) * (x[i] - mx);
        cyy += (y[i] - my) * (y[i] - my);
    }
    return cxy / std::sqrt(cxx * cyy);
}

}  // namespace orderk
