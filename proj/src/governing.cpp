#include "orderk/governing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orderk/quadrature.hpp"
#include "orderk/special.hpp"

namespace orderk {

namespace {

void require_ig(const SubordinatorSpec& spec, const char* who) {
    if (spec.family != SubordinatorFamily::InverseGaussian)
        throw UnsupportedFamilyError(std::string(who) +
                                     ": governing equations are derived for the "
                                     "inverse-gaussian family only");
}

double pmf_or_zero(const PoKParams& params, double t, long long m) {
    return m < 0 ? 0.0 : pok_pmf(params, t, m);
}

/// RHS of the first-order recursion at (m, t).
double dde_rhs(const PoKParams& params, long long m, double t) {
    double sum = 0.0;
    const long long jmax = std::min<long long>(m, params.order);
    for (long long j = 1; j <= jmax; ++j) sum += pmf_or_zero(params, t, m - j);
    return -static_cast<double>(params.order) * params.rate * pok_pmf(params, t, m) +
           params.rate * sum;
}

/// Rough scale of E_G(t): linear gamma t / delta for large t, the sqrt(t)
/// Tauberian regime for small t. Only used to centre the quadrature
/// substitution, so a factor-of-two miss is harmless.
double inverse_ig_scale(const SubordinatorSpec& ig, double t) {
    return std::max(ig.gamma * t / ig.delta, std::sqrt(2.0 * t / 3.14159265358979323846) / ig.delta);
}

}  // namespace

double ppok_dde_residual(const PoKParams& params, long long m, double t, double h) {
    if (!(h > 0.0) || !(t - h > 0.0))
        throw std::domain_error("ppok_dde_residual: need 0 < h < t");
    const double lhs = (pok_pmf(params, t + h, m) - pok_pmf(params, t - h, m)) / (2.0 * h);
    return std::abs(lhs - dde_rhs(params, m, t));
}

double ppok_dde2_residual(const PoKParams& params, long long m, double t, double h) {
    if (!(h > 0.0) || !(t - h > 0.0))
        throw std::domain_error("ppok_dde2_residual: need 0 < h < t");
    const double klam = static_cast<double>(params.order) * params.rate;
    const double lhs = (pok_pmf(params, t + h, m) - 2.0 * pok_pmf(params, t, m) +
                        pok_pmf(params, t - h, m)) /
                       (h * h);
    double single = 0.0;
    double twofold = 0.0;
    const long long jmax = std::min<long long>(m, params.order);
    for (long long j = 1; j <= jmax; ++j) {
        single += pmf_or_zero(params, t, m - j);
        const long long imax = std::min<long long>(m - j, params.order);
        for (long long i = 1; i <= imax; ++i) twofold += pmf_or_zero(params, t, m - j - i);
    }
    const double rhs = klam * klam * pok_pmf(params, t, m) -
                       2.0 * klam * params.rate * single +
                       params.rate * params.rate * twofold;
    return std::abs(lhs - rhs);
}

double subordinated_ig_pmf(const PoKParams& params, const SubordinatorSpec& ig, long long m,
                           double t, double quad_tol) {
    require_ig(ig, "subordinated_ig_pmf");
    if (m < 0) return 0.0;
    const double mean = ig.delta * t / ig.gamma;
    // Mode of the IG density, as the extra split hint for small t where the
    // density is sharply peaked.
    const double shape = ig.delta * ig.delta * t * t;
    const double q = 1.5 * mean / shape;
    const double mode = mean * (std::sqrt(1.0 + q * q) - q);
    auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        const double g = subordinator_density(ig, x, t);
        return g > 0.0 ? pok_pmf(params, x, m) * g : 0.0;
    };
    return integrate_positive_axis(f, std::max(mean, 1e-8), quad_tol, {mode}).value;
}

double poisson_ig_orderk_dde_residual(const PoKParams& params, const SubordinatorSpec& ig,
                                      long long m, double t, double h, double quad_tol) {
    require_ig(ig, "poisson_ig_orderk_dde_residual");
    if (!(h > 0.0) || !(t - h > 0.0))
        throw std::domain_error("poisson_ig_orderk_dde_residual: need 0 < h < t");

    const double p_lo = subordinated_ig_pmf(params, ig, m, t - h, quad_tol);
    const double p_mid = subordinated_ig_pmf(params, ig, m, t, quad_tol);
    const double p_hi = subordinated_ig_pmf(params, ig, m, t + h, quad_tol);
    const double d1 = (p_hi - p_lo) / (2.0 * h);
    const double d2 = (p_hi - 2.0 * p_mid + p_lo) / (h * h);
    const double lhs = d2 - 2.0 * ig.delta * ig.gamma * d1;

    double sum = 0.0;
    const long long jmax = std::min<long long>(m, params.order);
    for (long long j = 1; j <= jmax; ++j)
        sum += subordinated_ig_pmf(params, ig, m - j, t, quad_tol);
    const double rhs = 2.0 * ig.delta * ig.delta * params.rate *
                       (static_cast<double>(params.order) * p_mid - sum);
    return std::abs(lhs - rhs);
}

double inverse_ig_density(double x, double t, double delta, double gamma) {
    if (!(t > 0.0)) throw std::domain_error("inverse_ig_density: t must be > 0");
    if (x < 0.0) return 0.0;
    const double num = gamma * t - delta * x;
    const double gauss = std::exp(-num * num / (2.0 * t));
    const double tail_arg = (gamma * t + delta * x) / std::sqrt(2.0 * t);
    return gauss * (2.0 * delta / std::sqrt(2.0 * 3.14159265358979323846 * t) -
                    delta * gamma * erfcx(tail_arg));
}

double tcppok2_ig_pmf(const PoKParams& params, const SubordinatorSpec& ig, long long m, double t,
                      double quad_tol) {
    require_ig(ig, "tcppok2_ig_pmf");
    if (m < 0) return 0.0;
    const double scale = std::max(inverse_ig_scale(ig, t), 1e-8);
    auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        const double hd = inverse_ig_density(x, t, ig.delta, ig.gamma);
        return hd > 0.0 ? pok_pmf(params, x, m) * hd : 0.0;
    };
    return integrate_positive_axis(f, scale, quad_tol).value;
}

double tcppok2_ig_dde_residual(const PoKParams& params, const SubordinatorSpec& ig, long long m,
                               double t, double h, double quad_tol) {
    require_ig(ig, "tcppok2_ig_dde_residual");
    if (!(h > 0.0) || !(t - h > 0.0))
        throw std::domain_error("tcppok2_ig_dde_residual: need 0 < h < t");
    const double k = static_cast<double>(params.order);
    const double lam = params.rate;
    const double klam = k * lam;

    const double lhs = (tcppok2_ig_pmf(params, ig, m, t + h, quad_tol) -
                        tcppok2_ig_pmf(params, ig, m, t - h, quad_tol)) /
                       (2.0 * h);

    // hat p_{m'}(t) for every index the double convolution reaches.
    const long long lowest = std::max<long long>(0, m - 2 * params.order);
    std::vector<double> hat(static_cast<std::size_t>(m - lowest) + 1, 0.0);
    for (long long mm = lowest; mm <= m; ++mm)
        hat[static_cast<std::size_t>(mm - lowest)] = tcppok2_ig_pmf(params, ig, mm, t, quad_tol);
    auto hat_at = [&](long long mm) {
        return mm < lowest ? 0.0 : hat[static_cast<std::size_t>(mm - lowest)];
    };

    double single = 0.0;
    double twofold = 0.0;
    const long long jmax = std::min<long long>(m, params.order);
    for (long long j = 1; j <= jmax; ++j) {
        single += hat_at(m - j);
        const long long imax = std::min<long long>(m - j, params.order);
        for (long long i = 1; i <= imax; ++i) twofold += hat_at(m - j - i);
    }

    double pm_prime0;
    if (m == 0) {
        pm_prime0 = -klam;
    } else if (m <= params.order) {
        pm_prime0 = lam;
    } else {
        pm_prime0 = 0.0;
    }

    const double boundary = inverse_ig_density(0.0, t, ig.delta, ig.gamma) * pm_prime0;
    const double rhs = (klam * klam * hat_at(m) - 2.0 * klam * lam * single +
                        lam * lam * twofold +
                        2.0 * ig.delta * ig.gamma * (-klam * hat_at(m) + lam * single) +
                        boundary) /
                       (2.0 * ig.delta * ig.delta);
    return std::abs(lhs - rhs);
}

ResidualReport run_residual_study(GoverningEquation eq, const PoKParams& params,
                                  const SubordinatorSpec& ig,
                                  const std::vector<long long>& m_values,
                                  const std::vector<double>& t_values,
                                  const std::vector<double>& steps, double quad_tol) {
    ResidualReport report;
    report.steps = steps;
    switch (eq) {
        case GoverningEquation::PpokFirstOrder:
            report.equation = "ppok-first-order";
            break;
        case GoverningEquation::PpokSecondOrder:
            report.equation = "ppok-second-order";
            break;
        case GoverningEquation::DirectIg:
            report.equation = "poisson-ig-order-k";
            break;
        case GoverningEquation::InverseIg:
            report.equation = "tcppok2-inverse-ig";
            break;
    }
    auto evaluate = [&](long long m, double t, double h) {
        switch (eq) {
            case GoverningEquation::PpokFirstOrder:
                return ppok_dde_residual(params, m, t, h);
            case GoverningEquation::PpokSecondOrder:
                return ppok_dde2_residual(params, m, t, h);
            case GoverningEquation::DirectIg:
                return poisson_ig_orderk_dde_residual(params, ig, m, t, h, quad_tol);
            case GoverningEquation::InverseIg:
                return tcppok2_ig_dde_residual(params, ig, m, t, h, quad_tol);
        }
        throw std::logic_error("run_residual_study: unreachable");
    };

    for (double h : steps) {
        for (long long m : m_values) {
            for (double t : t_values) {
                report.samples.push_back({m, t, h, evaluate(m, t, h)});
            }
        }
    }

    if (steps.size() >= 2) {
        // Two-point Richardson order estimates, skipping samples at the
        // round-off / quadrature floor.
        std::vector<double> orders;
        const std::size_t per_step = m_values.size() * t_values.size();
        for (std::size_t si = 0; si + 1 < steps.size(); ++si) {
            for (std::size_t p = 0; p < per_step; ++p) {
                const double r_coarse = report.samples[si * per_step + p].residual;
                const double r_fine = report.samples[(si + 1) * per_step + p].residual;
                if (r_fine < 1e-12 || r_coarse < 1e-12) continue;
                orders.push_back(std::log(r_coarse / r_fine) /
                                 std::log(steps[si] / steps[si + 1]));
            }
        }
        if (!orders.empty()) {
            std::sort(orders.begin(), orders.end());
            report.observed_order = orders[orders.size() / 2];
        }
    }
    return report;
}

}  // namespace orderk
