#include "orderk/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orderk/special.hpp"

namespace orderk {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

/// Standard one-sided stable variate with E[e^{-sS}] = e^{-s^alpha}
/// (Kanter / Chambers-Mallows-Stuck form for totally skewed stables).
double standard_stable(double alpha, Rng& rng) {
    double u;
    do {
        u = rng.uniform();
    } while (u == 0.0);
    const double theta = kPi * u;
    const double e = rng.exponential(1.0);
    const double a = std::sin(alpha * theta) / std::pow(std::sin(theta), 1.0 / alpha);
    const double b = std::pow(std::sin((1.0 - alpha) * theta) / e, (1.0 - alpha) / alpha);
    return a * b;
}

}  // namespace

SubordinatorSpec SubordinatorSpec::drift(double b) {
    require(b > 0.0, "Drift subordinator: slope must be > 0");
    SubordinatorSpec s;
    s.family = SubordinatorFamily::Drift;
    s.drift_slope = b;
    return s;
}

SubordinatorSpec SubordinatorSpec::gamma_process(double p, double alpha) {
    require(p > 0.0 && alpha > 0.0, "Gamma subordinator: parameters must be > 0");
    SubordinatorSpec s;
    s.family = SubordinatorFamily::Gamma;
    s.shape_rate = p;
    s.rate = alpha;
    return s;
}

SubordinatorSpec SubordinatorSpec::tempered_stable(double alpha, double mu) {
    require(alpha > 0.0 && alpha < 1.0, "Tempered stable subordinator: stability must be in (0,1)");
    require(mu >= 0.0, "Tempered stable subordinator: tempering must be >= 0");
    SubordinatorSpec s;
    s.family = SubordinatorFamily::TemperedStable;
    s.stability = alpha;
    s.tempering = mu;
    return s;
}

SubordinatorSpec SubordinatorSpec::inverse_gaussian(double delta, double gamma) {
    require(delta > 0.0 && gamma > 0.0, "Inverse Gaussian subordinator: parameters must be > 0");
    SubordinatorSpec s;
    s.family = SubordinatorFamily::InverseGaussian;
    s.delta = delta;
    s.gamma = gamma;
    return s;
}

std::string SubordinatorSpec::name() const {
    switch (family) {
        case SubordinatorFamily::Drift:
            return "drift";
        case SubordinatorFamily::Gamma:
            return "gamma";
        case SubordinatorFamily::TemperedStable:
            return "tempered-stable";
        case SubordinatorFamily::InverseGaussian:
            return "inverse-gaussian";
    }
    return "unknown";
}

double bernstein(const SubordinatorSpec& spec, double s) {
    require(s >= 0.0, "bernstein: s must be >= 0");
    switch (spec.family) {
        case SubordinatorFamily::Drift:
            return spec.drift_slope * s;
        case SubordinatorFamily::Gamma:
            return spec.shape_rate * std::log1p(s / spec.rate);
        case SubordinatorFamily::TemperedStable:
            return std::pow(s + spec.tempering, spec.stability) -
                   std::pow(spec.tempering, spec.stability);
        case SubordinatorFamily::InverseGaussian:
            // delta (sqrt(2s + g^2) - g), written cancellation-free.
            return spec.delta * 2.0 * s /
                   (std::sqrt(2.0 * s + spec.gamma * spec.gamma) + spec.gamma);
    }
    throw std::logic_error("bernstein: unreachable");
}

double bernstein_derivative(const SubordinatorSpec& spec, int order, double s) {
    require(order >= 1, "bernstein_derivative: order must be >= 1");
    require(s >= 0.0, "bernstein_derivative: s must be >= 0");
    switch (spec.family) {
        case SubordinatorFamily::Drift:
            return order == 1 ? spec.drift_slope : 0.0;
        case SubordinatorFamily::Gamma: {
            // p (-1)^{j-1} (j-1)! / (alpha + s)^j
            double v = spec.shape_rate / (spec.rate + s);
            for (int j = 1; j < order; ++j)
                v *= -static_cast<double>(j) / (spec.rate + s);
            return v;
        }
        case SubordinatorFamily::TemperedStable: {
            double v = std::pow(s + spec.tempering, spec.stability - order);
            for (int j = 0; j < order; ++j) v *= spec.stability - j;
            return v;
        }
        case SubordinatorFamily::InverseGaussian: {
            // d/ds of delta (2s + g^2)^{1/2}: factors (1/2 - j) * 2 per order.
            const double base = 2.0 * s + spec.gamma * spec.gamma;
            double v = spec.delta * std::pow(base, 0.5 - order);
            for (int j = 0; j < order; ++j) v *= (0.5 - j) * 2.0;
            return v;
        }
    }
    throw std::logic_error("bernstein_derivative: unreachable");
}

SignedLog bernstein_derivative_log(const SubordinatorSpec& spec, int order, double s) {
    require(order >= 1, "bernstein_derivative_log: order must be >= 1");
    require(s >= 0.0, "bernstein_derivative_log: s must be >= 0");
    const double parity = (order % 2 == 1) ? 1.0 : -1.0;  // sign of (-1)^{order-1}
    switch (spec.family) {
        case SubordinatorFamily::Drift:
            if (order == 1) return {1.0, std::log(spec.drift_slope)};
            return {0.0, -std::numeric_limits<double>::infinity()};
        case SubordinatorFamily::Gamma:
            return {parity, std::log(spec.shape_rate) + std::lgamma(static_cast<double>(order)) -
                                static_cast<double>(order) * std::log(spec.rate + s)};
        case SubordinatorFamily::TemperedStable: {
            // alpha (alpha-1)...(alpha-order+1) = alpha (-1)^{order-1}
            //   Gamma(order - alpha) / Gamma(1 - alpha).
            const double a = spec.stability;
            return {parity, std::log(a) + std::lgamma(static_cast<double>(order) - a) -
                                std::lgamma(1.0 - a) +
                                (a - static_cast<double>(order)) * std::log(s + spec.tempering)};
        }
        case SubordinatorFamily::InverseGaussian: {
            // delta 2^order (1/2)(1/2 - 1)...(1/2 - order + 1) (2s+g^2)^{1/2-order};
            // |falling product| = (1/2) Gamma(order - 1/2) / Gamma(1/2).
            const double base = 2.0 * s + spec.gamma * spec.gamma;
            return {parity,
                    std::log(spec.delta) + static_cast<double>(order) * std::log(2.0) -
                        std::log(2.0) + std::lgamma(static_cast<double>(order) - 0.5) -
                        std::lgamma(0.5) + (0.5 - static_cast<double>(order)) * std::log(base)};
        }
    }
    throw std::logic_error("bernstein_derivative_log: unreachable");
}

double subordinator_mean(const SubordinatorSpec& spec, double t) {
    switch (spec.family) {
        case SubordinatorFamily::Drift:
            return spec.drift_slope * t;
        case SubordinatorFamily::Gamma:
            return spec.shape_rate * t / spec.rate;
        case SubordinatorFamily::TemperedStable:
            if (spec.tempering == 0.0)
                throw std::domain_error(
                    "subordinator_mean: stable subordinator (tempering 0) has infinite mean");
            return spec.stability * std::pow(spec.tempering, spec.stability - 1.0) * t;
        case SubordinatorFamily::InverseGaussian:
            return spec.delta * t / spec.gamma;
    }
    throw std::logic_error("subordinator_mean: unreachable");
}

double subordinator_variance(const SubordinatorSpec& spec, double t) {
    switch (spec.family) {
        case SubordinatorFamily::Drift:
            return 0.0;
        case SubordinatorFamily::Gamma:
            return spec.shape_rate * t / (spec.rate * spec.rate);
        case SubordinatorFamily::TemperedStable:
            if (spec.tempering == 0.0)
                throw std::domain_error(
                    "subordinator_variance: stable subordinator (tempering 0) has infinite "
                    "moments");
            return spec.stability * (1.0 - spec.stability) *
                   std::pow(spec.tempering, spec.stability - 2.0) * t;
        case SubordinatorFamily::InverseGaussian:
            return spec.delta * t / (spec.gamma * spec.gamma * spec.gamma);
    }
    throw std::logic_error("subordinator_variance: unreachable");
}

double sample_increment(const SubordinatorSpec& spec, double dt, Rng& rng) {
    require(dt > 0.0, "sample_increment: dt must be > 0");
    switch (spec.family) {
        case SubordinatorFamily::Drift:
            return spec.drift_slope * dt;
        case SubordinatorFamily::Gamma:
            return rng.gamma(spec.shape_rate * dt, spec.rate);
        case SubordinatorFamily::InverseGaussian:
            return rng.inverse_gaussian(spec.delta * dt / spec.gamma,
                                        spec.delta * spec.delta * dt * dt);
        case SubordinatorFamily::TemperedStable: {
            const double scale = std::pow(dt, 1.0 / spec.stability);
            if (spec.tempering == 0.0) return scale * standard_stable(spec.stability, rng);
            constexpr std::size_t kMaxRejects = 1'000'000;
            for (std::size_t i = 0; i < kMaxRejects; ++i) {
                const double draw = scale * standard_stable(spec.stability, rng);
                if (rng.uniform() <= std::exp(-spec.tempering * draw)) return draw;
            }
            throw std::runtime_error(
                "sample_increment: tempered stable rejection cap reached; decrease dt");
        }
    }
    throw std::logic_error("sample_increment: unreachable");
}

std::vector<double> SamplePath::grid() const {
    std::vector<double> g(values.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i) * step;
    return g;
}

SamplePath simulate_path(const SubordinatorSpec& spec, double horizon, double step, Rng& rng) {
    require(horizon > 0.0 && step > 0.0, "simulate_path: horizon and step must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    SamplePath path;
    path.step = step;
    path.values.resize(n + 1);
    path.values[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
        path.values[i] = path.values[i - 1] + sample_increment(spec, step, rng);
    return path;
}

std::vector<double> first_passage_times(const SubordinatorSpec& spec,
                                        const std::vector<double>& levels, double step, Rng& rng,
                                        std::size_t max_steps) {
    require(step > 0.0, "first_passage_times: step must be > 0");
    if (!std::is_sorted(levels.begin(), levels.end()))
        throw std::invalid_argument("first_passage_times: levels must be ascending");
    std::vector<double> out(levels.size(), 0.0);
    std::size_t next = 0;
    while (next < levels.size() && levels[next] <= 0.0) out[next++] = 0.0;
    double d = 0.0;
    double r = 0.0;
    std::size_t steps = 0;
    while (next < levels.size()) {
        if (++steps > max_steps) {
            throw InversePathError("first_passage_times: subordinator failed to exceed level " +
                                   std::to_string(levels[next]) + " within " +
                                   std::to_string(max_steps) + " grid steps (reached " +
                                   std::to_string(d) + ")");
        }
        d += sample_increment(spec, step, rng);
        r += step;
        while (next < levels.size() && d > levels[next]) out[next++] = r;
    }
    return out;
}

SamplePath inverse_path(const SubordinatorSpec& spec, double horizon_t, double step, Rng& rng,
                        std::size_t max_steps) {
    require(horizon_t > 0.0 && step > 0.0, "inverse_path: horizon and step must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(horizon_t / step - 1e-9));
    std::vector<double> levels(n + 1);
    for (std::size_t j = 0; j <= n; ++j) levels[j] = static_cast<double>(j) * step;
    SamplePath path;
    path.step = step;
    path.values = first_passage_times(spec, levels, step, rng, max_steps);
    return path;
}

double subordinator_density(const SubordinatorSpec& spec, double x, double t) {
    require(t > 0.0, "subordinator_density: t must be > 0");
    if (x <= 0.0) return 0.0;
    switch (spec.family) {
        case SubordinatorFamily::Gamma: {
            const double shape = spec.shape_rate * t;
            return std::exp(shape * std::log(spec.rate) + (shape - 1.0) * std::log(x) -
                            spec.rate * x - std::lgamma(shape));
        }
        case SubordinatorFamily::InverseGaussian: {
            const double d = spec.delta * t;
            const double g = spec.gamma;
            return std::exp(std::log(d) - 0.5 * std::log(2.0 * kPi * x * x * x) + d * g -
                            d * d / (2.0 * x) - g * g * x / 2.0);
        }
        case SubordinatorFamily::Drift:
        case SubordinatorFamily::TemperedStable:
            throw UnsupportedFamilyError(
                "subordinator_density: closed-form density available for gamma and "
                "inverse-gaussian families only");
    }
    throw std::logic_error("subordinator_density: unreachable");
}

double ig_moment(int q, double t, double delta, double gamma) {
    require(q >= 0, "ig_moment: q must be a non-negative integer");
    require(t > 0.0 && delta > 0.0 && gamma > 0.0, "ig_moment: parameters must be > 0");
    const double z = delta * gamma * t;
    // sqrt(2/pi) delta (delta t / gamma)^{q - 1/2} t e^z K_{q-1/2}(z), with
    // e^z folded into the scaled Bessel evaluation.
    const double scaled_k = bessel_k_half_integer_scaled(q - 1, z);
    return std::sqrt(2.0 / kPi) * delta * std::pow(delta * t / gamma, q - 0.5) * t * scaled_k;
}

}  // namespace orderk
