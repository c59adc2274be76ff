#pragma once

#include <cmath>
#include <stdexcept>

namespace orderk {

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
/// Direct evaluation is exact up to x ~ 25 (the e^{x^2} overflow is matched
/// by the erfc underflow); beyond that the asymptotic expansion carries
/// 12+ correct digits.
inline double erfcx(double x) {
    if (x < 0.0) throw std::invalid_argument("erfcx: requires x >= 0");
    if (x <= 25.0) return std::exp(x * x) * std::erfc(x);
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= 8; ++j) {
        term *= -static_cast<double>(2 * j - 1) * inv2x2;
        sum += term;
    }
    return sum / (x * std::sqrt(3.14159265358979323846));
}

/// Regularized incomplete gamma functions (declared here, defined against
/// Boost.Math in special.cpp so the heavy headers stay out of the hot path).
double gamma_p_reg(double a, double x);
double gamma_q_reg(double a, double x);

/// P[Poisson(mu) > m] for integer m >= -1.
inline double poisson_sf(double mu, long long m) {
    if (m < 0) return 1.0;
    return gamma_p_reg(static_cast<double>(m) + 1.0, mu);
}

inline double poisson_log_pmf(double mu, long long n) {
    if (mu <= 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -mu + static_cast<double>(n) * std::log(mu) - log_factorial(static_cast<double>(n));
}

/// Upper-tail p-value of a chi-square statistic.
inline double chi_square_pvalue(double statistic, double dof) {
    return gamma_q_reg(dof / 2.0, statistic / 2.0);
}

/// Modified Bessel function of the third kind at half-integer order
/// nu = n + 1/2, n >= 0, via the closed finite sum
///   K_{n+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_{j=0}^{n} (n+j)! / (j! (n-j)! (2z)^j).
/// K_{-1/2} = K_{1/2} by symmetry. The scaled variant returns e^z K, which
/// is what formulas with an e^z prefactor should use to dodge overflow.
inline double bessel_k_half_integer_scaled(int n, double z) {
    if (n < 0) n = -n - 1;  // K_{-(n+1/2)} = K_{n+1/2}
    if (!(z > 0.0)) throw std::invalid_argument("bessel_k_half_integer requires z > 0");
    double term = 1.0;
    double sum = 1.0;
    for (int j = 0; j < n; ++j) {
        term *= static_cast<double>((n + j + 1) * (n - j)) / (2.0 * z * static_cast<double>(j + 1));
        sum += term;
    }
    return std::sqrt(3.14159265358979323846 / (2.0 * z)) * sum;
}

inline double bessel_k_half_integer(int n, double z) {
    return std::exp(-z) * bessel_k_half_integer_scaled(n, z);
}

}  // namespace orderk
