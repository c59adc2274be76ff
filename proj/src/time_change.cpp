#include "orderk/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "orderk/numeric.hpp"
#include "orderk/quadrature.hpp"

namespace orderk {

namespace {

void require_sorted(const std::vector<double>& pts, const char* who) {
    if (pts.empty() || !std::is_sorted(pts.begin(), pts.end()))
        throw std::invalid_argument(std::string(who) + ": time points must be ascending");
}

/// Operational times W(t_j) at the requested real times: exact independent
/// increments in Direct mode, grid first-passage inversion in Inverse mode.
std::vector<double> operational_times(const TimeChangedSpec& spec,
                                      const std::vector<double>& t_points, double step,
                                      Rng& rng) {
    if (spec.mode == TimeChangeMode::Direct) {
        std::vector<double> w(t_points.size());
        double cur = 0.0;
        double prev_t = 0.0;
        for (std::size_t j = 0; j < t_points.size(); ++j) {
            const double gap = t_points[j] - prev_t;
            if (gap > 0.0) cur += sample_increment(spec.sub, gap, rng);
            prev_t = t_points[j];
            w[j] = cur;
        }
        return w;
    }
    return first_passage_times(spec.sub, t_points, step, rng);
}

std::vector<std::int64_t> counts_at_operational_times(const PoKParams& pok,
                                                      const std::vector<double>& w,
                                                      RngStream ppok_stream) {
    std::vector<std::int64_t> counts(w.size(), 0);
    const double w_max = w.empty() ? 0.0 : w.back();
    if (w_max <= 0.0) return counts;
    const CountPath path = simulate_ppok(pok, w_max, ppok_stream);
    for (std::size_t j = 0; j < w.size(); ++j) counts[j] = path.count_at(w[j]);
    return counts;
}

double closed_gamma_pmf(const TimeChangedSpec& spec, double t, long long n) {
    const double pt = spec.sub.shape_rate * t;
    const double klam = static_cast<double>(spec.pok.order) * spec.pok.rate;
    const double log_rate = std::log(spec.sub.rate);
    const double log_rate_shift = std::log(spec.sub.rate + klam);
    const double log_lambda = std::log(spec.pok.rate);
    const double lg_pt = std::lgamma(pt);
    CompensatedSum sum;
    for (const auto& pv : enumerate_partitions(spec.pok.order, n)) {
        const double z = static_cast<double>(pv.batches);
        sum.add(std::exp(z * log_lambda - pv.log_factorial_product + pt * log_rate -
                         (pt + z) * log_rate_shift + std::lgamma(pt + z) - lg_pt));
    }
    return sum.value();
}

double integrand_peak_hint(const SubordinatorSpec& sub, double t, double zeta, double klam) {
    switch (sub.family) {
        case SubordinatorFamily::Gamma:
            return std::max((sub.shape_rate * t - 1.0 + zeta) / (sub.rate + klam), 1e-12);
        case SubordinatorFamily::InverseGaussian: {
            const double a = sub.delta * sub.delta * t * t / 2.0;
            const double b = zeta - 1.5;
            const double c = sub.gamma * sub.gamma / 2.0 + klam;
            const double w = (-b + std::sqrt(b * b + 4.0 * a * c)) / (2.0 * a);
            return 1.0 / w;
        }
        default:
            return 1.0;
    }
}

double quadrature_pmf(const TimeChangedSpec& spec, double t, long long n, double abs_tol) {
    if (spec.sub.family != SubordinatorFamily::Gamma &&
        spec.sub.family != SubordinatorFamily::InverseGaussian) {
        throw UnsupportedFamilyError(
            "tcppok1_pmf: quadrature route needs a closed-form subordinator density "
            "(gamma or inverse-gaussian)");
    }
    const double klam = static_cast<double>(spec.pok.order) * spec.pok.rate;
    const double log_lambda = std::log(spec.pok.rate);

    // Group the partition sum by the batch count: the integral only
    // depends on zeta.
    std::map<long long, double> log_weight;  // zeta -> log sum of 1/Pi!
    for (const auto& pv : enumerate_partitions(spec.pok.order, n)) {
        auto [it, fresh] = log_weight.try_emplace(pv.batches, -pv.log_factorial_product);
        if (!fresh) {
            const double hi = std::max(it->second, -pv.log_factorial_product);
            it->second = hi + std::log(std::exp(it->second - hi) +
                                       std::exp(-pv.log_factorial_product - hi));
        }
    }

    const double scale = std::max(subordinator_mean(spec.sub, t), 1e-8);
    CompensatedSum total;
    for (const auto& [zeta, log_w] : log_weight) {
        const double z = static_cast<double>(zeta);
        auto f = [&](double y) {
            if (y <= 0.0) return 0.0;
            const double g = subordinator_density(spec.sub, y, t);
            if (g <= 0.0) return 0.0;
            return std::exp(-klam * y + z * (log_lambda + std::log(y)) + log_w) * g;
        };
        const double hint = integrand_peak_hint(spec.sub, t, z, klam);
        const auto result = integrate_positive_axis(
            f, scale, abs_tol / static_cast<double>(log_weight.size()), {hint});
        total.add(result.value);
    }
    return total.value();
}

/// Shared Monte Carlo pmf-row estimator: draw an operational time, evaluate
/// the conditional order-k pmf at it for every n. Draws are reused across
/// the whole row.
std::vector<McEstimate> mc_pmf_table(const PoKParams& pok, long long n_max, std::size_t n_reps,
                                     RngStream stream, unsigned n_threads,
                                     const std::function<double(std::size_t, Rng&)>& draw) {
    if (n_reps == 0) throw std::invalid_argument("mc pmf: n_reps must be > 0");
    const auto dim = static_cast<std::size_t>(n_max) + 1;
    auto accs = chunked_reduce(
        n_reps, n_threads, [dim] { return std::vector<MomentAccumulator>(dim); },
        [&](std::size_t rep, std::vector<MomentAccumulator>& acc) {
            Rng rng(stream.child(rep));
            const double w = draw(rep, rng);
            for (std::size_t n = 0; n < dim; ++n) {
                const double p =
                    w > 0.0 ? pok_pmf(pok, w, static_cast<long long>(n)) : (n == 0 ? 1.0 : 0.0);
                acc[n].add(p);
            }
        },
        [](std::vector<MomentAccumulator>& into, std::vector<MomentAccumulator>&& from) {
            for (std::size_t i = 0; i < into.size(); ++i) into[i].merge(from[i]);
        });
    std::vector<McEstimate> out(dim);
    for (std::size_t n = 0; n < dim; ++n) out[n] = accs[n].mean_estimate();
    return out;
}

}  // namespace

std::vector<double> CountGridPath::grid() const {
    std::vector<double> g(counts.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i) * step;
    return g;
}

CountGridPath simulate(const TimeChangedSpec& spec, double horizon, double step,
                       RngStream stream) {
    if (!(horizon > 0.0) || !(step > 0.0))
        throw std::domain_error("simulate: horizon and step must be > 0");
    Rng sub_rng(stream.child(0));
    const SamplePath w = spec.mode == TimeChangeMode::Direct
                             ? simulate_path(spec.sub, horizon, step, sub_rng)
                             : inverse_path(spec.sub, horizon, step, sub_rng);
    CountGridPath out;
    out.step = step;
    const auto counts = counts_at_operational_times(spec.pok, w.values, stream.child(1));
    out.counts = counts;
    return out;
}

McEstimate tcppok1_pmf(const TimeChangedSpec& spec, double t, long long n, PmfMethod method,
                       std::size_t n_reps, RngStream stream, unsigned n_threads) {
    if (spec.mode != TimeChangeMode::Direct)
        throw std::invalid_argument("tcppok1_pmf: spec must be in Direct mode");
    if (!(t > 0.0)) throw std::domain_error("tcppok1_pmf: t must be > 0");
    if (n < 0) return {0.0, 0.0, 0};
    switch (method) {
        case PmfMethod::Closed:
            if (spec.sub.family != SubordinatorFamily::Gamma)
                throw UnsupportedFamilyError(
                    "tcppok1_pmf: closed form available for the gamma family only");
            return {closed_gamma_pmf(spec, t, n), 0.0, 0};
        case PmfMethod::Quadrature:
            return {quadrature_pmf(spec, t, n, 1e-10), 0.0, 0};
        case PmfMethod::MonteCarlo:
            return tcppok1_pmf_table(spec, t, n, method, n_reps, stream, n_threads).back();
    }
    throw std::logic_error("tcppok1_pmf: unreachable");
}

std::vector<McEstimate> tcppok1_pmf_table(const TimeChangedSpec& spec, double t, long long n_max,
                                          PmfMethod method, std::size_t n_reps, RngStream stream,
                                          unsigned n_threads) {
    if (spec.mode != TimeChangeMode::Direct)
        throw std::invalid_argument("tcppok1_pmf_table: spec must be in Direct mode");
    if (!(t > 0.0)) throw std::domain_error("tcppok1_pmf_table: t must be > 0");
    if (n_max < 0) throw std::domain_error("tcppok1_pmf_table: n_max must be >= 0");
    if (method == PmfMethod::MonteCarlo) {
        return mc_pmf_table(spec.pok, n_max, n_reps, stream, n_threads,
                            [&spec, t](std::size_t, Rng& rng) {
                                return sample_increment(spec.sub, t, rng);
                            });
    }
    std::vector<McEstimate> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (long long n = 0; n <= n_max; ++n)
        out.push_back(tcppok1_pmf(spec, t, n, method, n_reps, stream, n_threads));
    return out;
}

McEstimate tcppok2_pmf(const TimeChangedSpec& spec, double t, long long n, std::size_t n_reps,
                       double step, RngStream stream, unsigned n_threads) {
    return tcppok2_pmf_table(spec, t, n, n_reps, step, stream, n_threads).back();
}

std::vector<McEstimate> tcppok2_pmf_table(const TimeChangedSpec& spec, double t, long long n_max,
                                          std::size_t n_reps, double step, RngStream stream,
                                          unsigned n_threads) {
    if (spec.mode != TimeChangeMode::Inverse)
        throw std::invalid_argument("tcppok2_pmf: spec must be in Inverse mode");
    if (!(t > 0.0) || !(step > 0.0))
        throw std::domain_error("tcppok2_pmf: t and step must be > 0");
    const std::vector<double> level{t};
    return mc_pmf_table(spec.pok, n_max, n_reps, stream, n_threads,
                        [&spec, level, step](std::size_t, Rng& rng) {
                            return first_passage_times(spec.sub, level, step, rng)[0];
                        });
}

double tc_mean(const TimeChangedSpec& spec, double t) {
    if (spec.mode != TimeChangeMode::Direct)
        throw std::invalid_argument("tc_mean: closed moments cover Direct mode only");
    const double k = static_cast<double>(spec.pok.order);
    return 0.5 * k * (k + 1.0) * spec.pok.rate * subordinator_mean(spec.sub, t);
}

double tc_cov(const TimeChangedSpec& spec, double s, double t) {
    if (spec.mode != TimeChangeMode::Direct)
        throw std::invalid_argument("tc_cov: closed moments cover Direct mode only");
    if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("tc_cov: times must be > 0");
    const double m = std::min(s, t);
    const double k = static_cast<double>(spec.pok.order);
    const double lam = spec.pok.rate;
    const double batch_mean_rate = 0.5 * k * (k + 1.0) * lam;
    return k * (k + 1.0) * (2.0 * k + 1.0) / 6.0 * lam * subordinator_mean(spec.sub, m) +
           batch_mean_rate * batch_mean_rate * subordinator_variance(spec.sub, m);
}

double tc_var(const TimeChangedSpec& spec, double t) { return tc_cov(spec, t, t); }

LrdFit lrd_decay_check(const TimeChangedSpec& spec, double s, const std::vector<double>& t_grid,
                       std::size_t n_reps, double step, RngStream stream, unsigned n_threads) {
    require_sorted(t_grid, "lrd_decay_check");
    if (!(s > 0.0) || s > t_grid.front())
        throw std::invalid_argument("lrd_decay_check: need 0 < s <= min(t_grid)");

    // Evaluation points: s followed by the t grid (s may equal t_grid[0]).
    std::vector<double> points{s};
    points.insert(points.end(), t_grid.begin(), t_grid.end());

    const std::size_t j_count = t_grid.size();
    struct Acc {
        CompensatedSum qs, qs2;
        std::vector<CompensatedSum> qt, qt2, cross;
    };
    auto totals = chunked_reduce(
        n_reps, n_threads,
        [j_count] {
            Acc a;
            a.qt.resize(j_count);
            a.qt2.resize(j_count);
            a.cross.resize(j_count);
            return a;
        },
        [&](std::size_t rep, Acc& acc) {
            const RngStream rs = stream.child(rep);
            Rng rng(rs.child(0));
            const auto w = operational_times(spec, points, step, rng);
            const auto counts = counts_at_operational_times(spec.pok, w, rs.child(1));
            const double qs = static_cast<double>(counts[0]);
            acc.qs.add(qs);
            acc.qs2.add(qs * qs);
            for (std::size_t j = 0; j < j_count; ++j) {
                const double qt = static_cast<double>(counts[j + 1]);
                acc.qt[j].add(qt);
                acc.qt2[j].add(qt * qt);
                acc.cross[j].add(qs * qt);
            }
        },
        [j_count](Acc& into, Acc&& from) {
            into.qs.add(from.qs.value());
            into.qs2.add(from.qs2.value());
            for (std::size_t j = 0; j < j_count; ++j) {
                into.qt[j].add(from.qt[j].value());
                into.qt2[j].add(from.qt2[j].value());
                into.cross[j].add(from.cross[j].value());
            }
        });

    const double n = static_cast<double>(n_reps);
    const double mean_s = totals.qs.value() / n;
    const double var_s = totals.qs2.value() / n - mean_s * mean_s;
    LrdFit fit;
    fit.t_grid = t_grid;
    fit.corr.resize(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        const double mean_t = totals.qt[j].value() / n;
        const double var_t = totals.qt2[j].value() / n - mean_t * mean_t;
        const double cov = totals.cross[j].value() / n - mean_s * mean_t;
        fit.corr[j] = cov / std::sqrt(var_s * var_t);
    }
    const LineFit line = log_log_fit(t_grid, fit.corr);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    return fit;
}

AsymptoticMean tcppok2_asymptotic_mean(const TimeChangedSpec& spec, AsymptoticRegime regime) {
    if (spec.mode != TimeChangeMode::Inverse)
        throw std::invalid_argument("tcppok2_asymptotic_mean: spec must be in Inverse mode");
    const double k = static_cast<double>(spec.pok.order);
    const double base = 0.5 * k * (k + 1.0) * spec.pok.rate;
    AsymptoticMean out;
    switch (spec.sub.family) {
        case SubordinatorFamily::Gamma:
            if (regime == AsymptoticRegime::LargeT) {
                out.coefficient = base * spec.sub.rate / spec.sub.shape_rate;
                out.exponent = 1.0;
                return out;
            }
            break;
        case SubordinatorFamily::TemperedStable: {
            const double a = spec.sub.stability;
            if (regime == AsymptoticRegime::SmallT) {
                out.coefficient = base / std::tgamma(1.0 + a);
                out.exponent = a;
                return out;
            }
            if (spec.sub.tempering <= 0.0)
                throw std::domain_error(
                    "tcppok2_asymptotic_mean: large-t regime needs positive tempering");
            out.coefficient = base * std::pow(spec.sub.tempering, 1.0 - a) / a;
            out.alt_coefficient = base * std::pow(spec.pok.rate, 1.0 - a) / a;
            out.exponent = 1.0;
            return out;
        }
        case SubordinatorFamily::InverseGaussian:
            if (regime == AsymptoticRegime::SmallT) {
                out.coefficient =
                    base / (std::tgamma(1.5) * spec.sub.delta * std::sqrt(2.0));
                out.exponent = 0.5;
                return out;
            }
            out.coefficient = base * spec.sub.gamma / spec.sub.delta;
            out.exponent = 1.0;
            return out;
        case SubordinatorFamily::Drift:
            break;
    }
    throw UnsupportedFamilyError("tcppok2_asymptotic_mean: no asymptotic form for family '" +
                                 spec.sub.name() + "' in the requested regime");
}

std::vector<double> tcppok1_jump_rates(const TimeChangedSpec& spec, int max_jump) {
    if (spec.mode != TimeChangeMode::Direct)
        throw std::invalid_argument("tcppok1_jump_rates: spec must be in Direct mode");
    if (max_jump < 1) throw std::domain_error("tcppok1_jump_rates: max_jump must be >= 1");
    const double klam = static_cast<double>(spec.pok.order) * spec.pok.rate;
    const double log_lambda = std::log(spec.pok.rate);
    std::vector<double> rates(static_cast<std::size_t>(max_jump));
    for (int i = 1; i <= max_jump; ++i) {
        CompensatedSum sum;
        for (const auto& pv : enumerate_partitions(spec.pok.order, i)) {
            const auto z = static_cast<int>(pv.batches);
            // -(-lambda)^z / Pi! * f^(z)(k lambda); the Bernstein sign
            // alternation makes every term non-negative.
            const SignedLog deriv = bernstein_derivative_log(spec.sub, z, klam);
            if (deriv.sign == 0.0) continue;
            const double sign = (z % 2 == 0) ? 1.0 : -1.0;
            sum.add(-sign * deriv.sign *
                    std::exp(z * log_lambda - pv.log_factorial_product + deriv.log_abs));
        }
        rates[static_cast<std::size_t>(i) - 1] = sum.value();
    }
    return rates;
}

std::vector<MomentAccumulator> mc_count_moments(const TimeChangedSpec& spec,
                                                const std::vector<double>& t_points,
                                                std::size_t n_reps, double step, RngStream stream,
                                                unsigned n_threads) {
    require_sorted(t_points, "mc_count_moments");
    const std::size_t dim = t_points.size();
    return chunked_reduce(
        n_reps, n_threads, [dim] { return std::vector<MomentAccumulator>(dim); },
        [&](std::size_t rep, std::vector<MomentAccumulator>& acc) {
            const RngStream rs = stream.child(rep);
            Rng rng(rs.child(0));
            const auto w = operational_times(spec, t_points, step, rng);
            const auto counts = counts_at_operational_times(spec.pok, w, rs.child(1));
            for (std::size_t j = 0; j < dim; ++j)
                acc[j].add(static_cast<double>(counts[j]));
        },
        [](std::vector<MomentAccumulator>& into, std::vector<MomentAccumulator>&& from) {
            for (std::size_t i = 0; i < into.size(); ++i) into[i].merge(from[i]);
        });
}

}  // namespace orderk
