#include "orderk/validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "orderk/governing.hpp"
#include "orderk/numeric.hpp"
#include "orderk/ppok.hpp"
#include "orderk/quadrature.hpp"
#include "orderk/ruin.hpp"
#include "orderk/serialize.hpp"
#include "orderk/special.hpp"
#include "orderk/stats.hpp"
#include "orderk/subordinator.hpp"
#include "orderk/time_change.hpp"

namespace orderk {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct Ctx {
    ValidationConfig cfg;
    std::vector<ValidationCheck> checks;

    [[nodiscard]] std::size_t reps(std::size_t base) const {
        const auto scaled = static_cast<std::size_t>(static_cast<double>(base) * cfg.scale);
        return std::max<std::size_t>(200, scaled);
    }

    [[nodiscard]] RngStream stream(const std::string& label) const {
        return RngStream{cfg.seed, fnv1a(label)};
    }

    /// Simulator-side rate (carries the canary bias); analytics stay unbiased.
    [[nodiscard]] PoKParams sim(const PoKParams& p) const {
        return PoKParams(p.order, p.rate * cfg.sim_rate_bias);
    }

    void add_le(const std::string& name, double stat, double thr, const std::string& oracle) {
        checks.push_back({name, stat, thr, stat <= thr, oracle});
    }

    void add_ge(const std::string& name, double stat, double thr, const std::string& oracle) {
        checks.push_back({name, stat, thr, stat >= thr, oracle});
    }
};

double z_score(const McEstimate& est, double target) {
    const double se = std::max(est.stderr_, 1e-300);
    return std::abs(est.value - target) / se;
}

// ---------------------------------------------------------------------------
// Criterion 1: combinatorics against brute force and the compound-Poisson
// convolution oracle.
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> brute_force_partitions(int k, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> x(static_cast<std::size_t>(k), 0);
    for (;;) {
        long long total = 0;
        for (int i = 0; i < k; ++i) total += static_cast<long long>(i + 1) * x[i];
        if (total == n) out.push_back(x);
        int i = 0;
        while (i < k) {
            if (static_cast<long long>(i + 1) * (x[i] + 1) <= n) {
                ++x[i];
                break;
            }
            x[i] = 0;
            ++i;
        }
        if (i == k) break;
    }
    return out;
}

/// P[N^(k)(t) = n] via Poisson(k lambda t) weights and iterated convolution
/// of the uniform batch-size pmf; the route the production pmf never takes.
double convolution_oracle_pmf(int k, double lambda, double t, int n) {
    const double mu = static_cast<double>(k) * lambda * t;
    double p = n == 0 ? std::exp(-mu) : 0.0;
    std::vector<double> conv{1.0};  // P[sum of j batches = m], starting at j = 0
    for (int j = 1; j <= n; ++j) {
        std::vector<double> next(conv.size() + static_cast<std::size_t>(k), 0.0);
        for (std::size_t m = 0; m < conv.size(); ++m) {
            if (conv[m] == 0.0) continue;
            for (int i = 1; i <= k; ++i)
                next[m + static_cast<std::size_t>(i)] += conv[m] / static_cast<double>(k);
        }
        conv = std::move(next);
        if (static_cast<std::size_t>(n) < conv.size())
            p += std::exp(poisson_log_pmf(mu, j)) * conv[static_cast<std::size_t>(n)];
    }
    return p;
}

void criterion1(Ctx& ctx) {
    // Enumeration equivalence over k <= 5, n <= 30.
    long long mismatches = 0;
    for (int k = 1; k <= 5; ++k) {
        for (int n = 0; n <= 30; ++n) {
            auto got = enumerate_partitions(k, n);
            auto want = brute_force_partitions(k, n);
            std::vector<std::vector<int>> got_x;
            got_x.reserve(got.size());
            for (auto& pv : got) {
                // Invariants: recompute every derived field.
                long long total = 0, batches = 0;
                double fact = 1.0;
                for (std::size_t i = 0; i < pv.batch_counts.size(); ++i) {
                    total += static_cast<long long>(i + 1) * pv.batch_counts[i];
                    batches += pv.batch_counts[i];
                    for (int j = 2; j <= pv.batch_counts[i]; ++j) fact *= j;
                }
                if (total != n || batches != pv.batches || fact != pv.factorial_product)
                    ++mismatches;
                got_x.push_back(pv.batch_counts);
            }
            std::sort(got_x.begin(), got_x.end());
            std::sort(want.begin(), want.end());
            if (got_x != want) ++mismatches;
            if (static_cast<long long>(got.size()) != partition_count(k, n)) ++mismatches;
        }
    }
    ctx.add_le("c1.enumeration-vs-brute-force", static_cast<double>(mismatches), 0.0,
               "brute-force-enumeration");

    const std::vector<std::tuple<int, double, double>> cases{
        {2, 1.0, 1.0}, {3, 1.2, 0.5}, {5, 0.7, 2.0}};
    double worst_pmf = 0.0;
    double worst_norm = 0.0;
    for (const auto& [k, lambda, t] : cases) {
        const PoKParams params(k, lambda);
        for (int n = 0; n <= 30; ++n) {
            worst_pmf = std::max(worst_pmf, std::abs(pok_pmf(params, t, n) -
                                                     convolution_oracle_pmf(k, lambda, t, n)));
        }
        const long long cutoff = pok_tail_cutoff(params, t, 1e-12);
        CompensatedSum total;
        for (long long n = 0; n <= cutoff; ++n) total.add(pok_pmf(params, t, n));
        worst_norm = std::max(worst_norm, 1.0 - total.value());
    }
    ctx.add_le("c1.pmf-vs-convolution-oracle", worst_pmf, 1e-12,
               "compound-poisson-convolution");
    ctx.add_le("c1.pmf-normalization-deficit", worst_norm, 1e-10, "tail-bound-series-sum");

    // pgf consistency: series sum and the two closed forms.
    const PoKParams params(2, 1.0);
    double worst_series = 0.0;
    double worst_forms = 0.0;
    for (double s = 0.1; s < 0.95; s += 0.1) {
        const long long cutoff = pok_tail_cutoff(params, 1.0, 1e-14);
        CompensatedSum series;
        for (long long n = 0; n <= cutoff; ++n)
            series.add(std::pow(s, static_cast<double>(n)) * pok_pmf(params, 1.0, n));
        worst_series = std::max(worst_series, std::abs(series.value() - pok_pgf(params, 1.0, s)));
        worst_forms = std::max(worst_forms, std::abs(pok_pgf(params, 1.0, s) -
                                                     pok_pgf_compound(params, 1.0, s)));
    }
    ctx.add_le("c1.pgf-vs-pmf-series", worst_series, 1e-10, "series-sum");
    ctx.add_le("c1.pgf-two-forms", worst_forms, 1e-14, "algebraic-identity");
}

// ---------------------------------------------------------------------------
// Criterion 2: PPoK moments by simulation.
// ---------------------------------------------------------------------------

MomentAccumulator terminal_count_moments(const PoKParams& sim_params, double horizon,
                                         std::size_t n_reps, RngStream stream,
                                         unsigned threads) {
    return chunked_reduce(
        n_reps, threads, [] { return MomentAccumulator{}; },
        [&](std::size_t rep, MomentAccumulator& acc) {
            acc.add(static_cast<double>(
                simulate_ppok(sim_params, horizon, stream.child(rep)).terminal_count()));
        },
        [](MomentAccumulator& into, MomentAccumulator&& from) { into.merge(from); });
}

void criterion2(Ctx& ctx) {
    const double horizon = 10.0;
    for (int k : {1, 3, 5}) {
        const PoKParams params(k, 1.2);
        const auto acc =
            terminal_count_moments(ctx.sim(params), horizon, ctx.reps(100000),
                                   ctx.stream("c2.moments.k" + std::to_string(k)), ctx.cfg.threads);
        ctx.add_le("c2.mean-z.k" + std::to_string(k),
                   z_score(acc.mean_estimate(), ppok_mean(params, horizon)), 3.0,
                   "closed-form-moments");
        ctx.add_le("c2.var-z.k" + std::to_string(k),
                   z_score(acc.variance_estimate(), ppok_var(params, horizon)), 3.0,
                   "closed-form-moments");
    }
}

// ---------------------------------------------------------------------------
// Criterion 3: PPoK correlation decay.
// ---------------------------------------------------------------------------

void criterion3(Ctx& ctx) {
    const TimeChangedSpec spec{ctx.sim(PoKParams(2, 1.0)), SubordinatorSpec::drift(1.0),
                               TimeChangeMode::Direct};
    const auto fit = lrd_decay_check(spec, 2.0, {8.0, 16.0, 32.0, 64.0}, ctx.reps(100000), 1.0,
                                     ctx.stream("c3.corr-slope"), ctx.cfg.threads);
    ctx.add_le("c3.corr-loglog-slope-error", std::abs(fit.slope - (-0.5)), 0.1,
               "power-law-correlation");
}

// ---------------------------------------------------------------------------
// Criterion 4: subordinator Laplace identity.
// ---------------------------------------------------------------------------

void criterion4(Ctx& ctx) {
    const std::vector<SubordinatorSpec> families{
        SubordinatorSpec::drift(2.0), SubordinatorSpec::gamma_process(4.0, 3.0),
        SubordinatorSpec::tempered_stable(0.5, 2.0), SubordinatorSpec::inverse_gaussian(1.0, 1.0)};
    const std::vector<double> s_values{0.25, 1.0, 4.0};
    const double t = 1.0;
    for (const auto& spec : families) {
        auto accs = chunked_reduce(
            ctx.reps(100000), ctx.cfg.threads,
            [&] { return std::vector<MomentAccumulator>(s_values.size()); },
            [&](std::size_t rep, std::vector<MomentAccumulator>& acc) {
                Rng rng(ctx.stream("c4." + spec.name()).child(rep));
                const double d = sample_increment(spec, t, rng);
                for (std::size_t i = 0; i < s_values.size(); ++i)
                    acc[i].add(std::exp(-s_values[i] * d));
            },
            [](std::vector<MomentAccumulator>& into, std::vector<MomentAccumulator>&& from) {
                for (std::size_t i = 0; i < into.size(); ++i) into[i].merge(from[i]);
            });
        double worst = 0.0;
        for (std::size_t i = 0; i < s_values.size(); ++i) {
            const double target = std::exp(-t * bernstein(spec, s_values[i]));
            const auto est = accs[i].mean_estimate();
            const double tol = 3.0 * est.stderr_ + 1e-12;
            worst = std::max(worst, std::abs(est.value - target) / tol);
        }
        ctx.add_le("c4.laplace." + spec.name(), worst, 1.0, "laplace-transform-identity");
    }
}

// ---------------------------------------------------------------------------
// Criterion 5: TCPPoK-I pmf route agreement (gamma family).
// ---------------------------------------------------------------------------

double negative_binomial_pmf(double pt, double lambda, double alpha, long long n) {
    return std::exp(std::lgamma(pt + static_cast<double>(n)) - std::lgamma(pt) -
                    log_factorial(static_cast<double>(n)) + pt * std::log(alpha / (alpha + lambda)) +
                    static_cast<double>(n) * std::log(lambda / (alpha + lambda)));
}

void criterion5(Ctx& ctx) {
    const TimeChangedSpec spec{PoKParams(2, 1.0), SubordinatorSpec::gamma_process(1.0, 1.0),
                               TimeChangeMode::Direct};
    const double t = 1.0;
    const long long n_max = 15;
    const auto mc = tcppok1_pmf_table(spec, t, n_max, PmfMethod::MonteCarlo, ctx.reps(1000000),
                                      ctx.stream("c5.mc"), ctx.cfg.threads);
    double worst_cq = 0.0;
    double worst_cm = 0.0;
    double worst_qm = 0.0;
    for (long long n = 0; n <= n_max; ++n) {
        const double closed = tcppok1_pmf(spec, t, n, PmfMethod::Closed).value;
        const double quad = tcppok1_pmf(spec, t, n, PmfMethod::Quadrature).value;
        const auto& m = mc[static_cast<std::size_t>(n)];
        worst_cq = std::max(worst_cq, std::abs(closed - quad));
        worst_cm = std::max(worst_cm,
                            std::abs(closed - m.value) / std::max(3.0 * m.stderr_, 1e-8));
        worst_qm =
            std::max(worst_qm, std::abs(quad - m.value) / std::max(3.0 * m.stderr_, 1e-8));
    }
    ctx.add_le("c5.closed-vs-quadrature", worst_cq, 1e-8, "adaptive-quadrature");
    ctx.add_le("c5.closed-vs-mc", worst_cm, 1.0, "monte-carlo");
    ctx.add_le("c5.quadrature-vs-mc", worst_qm, 1.0, "monte-carlo");

    // k = 1 gamma subordination is the negative binomial law.
    const TimeChangedSpec nb{PoKParams(1, 1.0), SubordinatorSpec::gamma_process(4.0, 3.0),
                             TimeChangeMode::Direct};
    const double t_nb = 0.7;
    double worst_nb = 0.0;
    for (long long n = 0; n <= 20; ++n) {
        worst_nb = std::max(
            worst_nb, std::abs(tcppok1_pmf(nb, t_nb, n, PmfMethod::Closed).value -
                               negative_binomial_pmf(4.0 * t_nb, 1.0, 3.0, n)));
    }
    ctx.add_le("c5.k1-negative-binomial", worst_nb, 1e-12, "negative-binomial-closed-form");

    // Closed-form normalization.
    CompensatedSum total;
    long long n = 0;
    double last = 1.0;
    while (n < 400 && (total.value() < 1.0 - 1e-8 || last > 1e-13)) {
        last = tcppok1_pmf(spec, t, n, PmfMethod::Closed).value;
        total.add(last);
        ++n;
    }
    ctx.add_le("c5.closed-normalization", std::abs(1.0 - total.value()), 1e-6,
               "normalizing-series");
}

// ---------------------------------------------------------------------------
// Criterion 6: TCPPoK-I moments and overdispersion.
// ---------------------------------------------------------------------------

void criterion6(Ctx& ctx) {
    const TimeChangedSpec spec{PoKParams(3, 1.2), SubordinatorSpec::gamma_process(3.0, 4.0),
                               TimeChangeMode::Direct};
    const TimeChangedSpec sim_spec{ctx.sim(spec.pok), spec.sub, spec.mode};
    const double t = 10.0;
    const auto accs = mc_count_moments(sim_spec, {t}, ctx.reps(100000), 0.0,
                                       ctx.stream("c6.moments"), ctx.cfg.threads);
    const auto& acc = accs[0];
    ctx.add_le("c6.mean-z", z_score(acc.mean_estimate(), tc_mean(spec, t)), 3.0,
               "closed-form-moments");
    ctx.add_le("c6.var-z", z_score(acc.variance_estimate(), tc_var(spec, t)), 3.0,
               "closed-form-moments");
    const double overdisp = (acc.variance() - acc.mean()) /
                            std::max(acc.se_overdispersion(), 1e-300);
    ctx.add_ge("c6.overdispersion-z", overdisp, 2.326, "dispersion-inequality");
}

// ---------------------------------------------------------------------------
// Criterion 7: governing-equation residuals.
// ---------------------------------------------------------------------------

void criterion7(Ctx& ctx) {
    const PoKParams params(2, 1.0);
    const SubordinatorSpec ig = SubordinatorSpec::inverse_gaussian(1.0, 1.0);
    const std::vector<double> steps{1e-2, 5e-3, 2.5e-3};

    const auto study1 = run_residual_study(GoverningEquation::PpokFirstOrder, params, ig,
                                           {0, 1, 3, 5}, {0.7, 1.3}, steps);
    ctx.add_ge("c7.ppok-dde-order", study1.observed_order.value_or(0.0), 1.9,
               "richardson-halving");
    ctx.add_le("c7.ppok-dde-abs-m0", ppok_dde_residual(params, 0, 1.0, 1e-3), 1e-5,
               "analytic-exponential-derivative");

    const auto study2 = run_residual_study(GoverningEquation::PpokSecondOrder, params, ig,
                                           {0, 2, 5}, {0.7, 1.3}, steps);
    ctx.add_ge("c7.ppok-dde2-order", study2.observed_order.value_or(0.0), 1.9,
               "richardson-halving");
    ctx.add_le("c7.ppok-dde2-abs-m0", ppok_dde2_residual(params, 0, 1.0, 1e-3), 1e-4,
               "analytic-exponential-derivative");

    // The twice-differentiated right-hand side against a nested finite
    // difference of the first-order right-hand side.
    {
        const PoKParams p3(3, 1.0);
        const long long m = 5;
        const double t = 0.7;
        const double h = 1e-4;
        auto rhs1 = [&](double tt) {
            const double klam = 3.0;
            double sum = 0.0;
            for (long long j = 1; j <= std::min<long long>(m, 3); ++j)
                sum += pok_pmf(p3, tt, m - j);
            return -klam * pok_pmf(p3, tt, m) + 1.0 * sum;
        };
        const double d_rhs1 = (rhs1(t + h) - rhs1(t - h)) / (2.0 * h);
        double single = 0.0;
        double twofold = 0.0;
        for (long long j = 1; j <= std::min<long long>(m, 3); ++j) {
            single += pok_pmf(p3, t, m - j);
            for (long long i = 1; i <= std::min<long long>(m - j, 3); ++i)
                twofold += pok_pmf(p3, t, m - j - i);
        }
        const double rhs2 = 9.0 * pok_pmf(p3, t, m) - 2.0 * 3.0 * single + twofold;
        ctx.add_le("c7.dde2-rhs-vs-nested-fd", std::abs(rhs2 - d_rhs1), 1e-5,
                   "nested-finite-differences");
    }

    double worst_direct = 0.0;
    for (long long m = 0; m <= 5; ++m) {
        worst_direct = std::max(
            worst_direct, poisson_ig_orderk_dde_residual(params, ig, m, 1.0, 5e-3));
    }
    ctx.add_le("c7.direct-ig-dde-residual", worst_direct, 1e-3, "adaptive-quadrature");
    ctx.add_le("c7.direct-ig-dde-m0",
               poisson_ig_orderk_dde_residual(params, ig, 0, 1.0, 5e-3), 1e-4,
               "analytic-laplace-exponent");

    double worst_inverse = 0.0;
    for (long long m = 0; m <= 3; ++m) {
        worst_inverse =
            std::max(worst_inverse, tcppok2_ig_dde_residual(params, ig, m, 1.0, 5e-3));
    }
    ctx.add_le("c7.inverse-ig-dde-residual", worst_inverse, 1e-3, "adaptive-quadrature");
}

// ---------------------------------------------------------------------------
// Criterion 8: TCPPoK-II asymptotic mean slopes.
// ---------------------------------------------------------------------------

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

void criterion8(Ctx& ctx) {
    // Inverse inverse-Gaussian: sqrt regime near zero, linear regime at
    // large times.
    const TimeChangedSpec ig_spec{ctx.sim(PoKParams(3, 1.2)),
                                  SubordinatorSpec::inverse_gaussian(1.0, 1.0),
                                  TimeChangeMode::Inverse};
    {
        const auto pts = log_spaced(0.01, 0.1, 5);
        const auto accs = mc_count_moments(ig_spec, pts, ctx.reps(10000), 1e-4,
                                           ctx.stream("c8.ig-small"), ctx.cfg.threads);
        std::vector<double> means;
        for (const auto& a : accs) means.push_back(a.mean());
        const auto fit = log_log_fit(pts, means);
        ctx.add_le("c8.inverse-ig-small-t-slope-error", std::abs(fit.slope - 0.5), 0.1,
                   "tauberian-asymptotics");
    }
    {
        const auto pts = log_spaced(100.0, 1000.0, 5);
        const auto accs = mc_count_moments(ig_spec, pts, ctx.reps(2000), 0.05,
                                           ctx.stream("c8.ig-large"), ctx.cfg.threads);
        std::vector<double> means;
        for (const auto& a : accs) means.push_back(a.mean());
        const auto fit = log_log_fit(pts, means);
        ctx.add_le("c8.inverse-ig-large-t-slope-error", std::abs(fit.slope - 1.0), 0.1,
                   "tauberian-asymptotics");
        // The linear coefficient itself: mean/t -> k(k+1)/2 lambda gamma/delta.
        const TimeChangedSpec analytic{PoKParams(3, 1.2), ig_spec.sub, TimeChangeMode::Inverse};
        const auto asym = tcppok2_asymptotic_mean(analytic, AsymptoticRegime::LargeT);
        ctx.add_le("c8.inverse-ig-large-t-coefficient-relerr",
                   std::abs(means.back() / pts.back() / asym.coefficient - 1.0), 0.1,
                   "tauberian-asymptotics");
    }
    {
        // Inverse gamma: linear mean growth with the predicted coefficient.
        const TimeChangedSpec y_spec{ctx.sim(PoKParams(3, 1.2)),
                                     SubordinatorSpec::gamma_process(4.0, 3.0),
                                     TimeChangeMode::Inverse};
        const TimeChangedSpec y_analytic{PoKParams(3, 1.2), y_spec.sub, TimeChangeMode::Inverse};
        const auto pts = log_spaced(100.0, 1000.0, 5);
        const auto accs = mc_count_moments(y_spec, pts, ctx.reps(2000), 0.05,
                                           ctx.stream("c8.gamma-large"), ctx.cfg.threads);
        std::vector<double> means;
        for (const auto& a : accs) means.push_back(a.mean());
        const auto fit = least_squares_fit(pts, means);
        const auto asym = tcppok2_asymptotic_mean(y_analytic, AsymptoticRegime::LargeT);
        ctx.add_le("c8.inverse-gamma-mean-slope-relerr",
                   std::abs(fit.slope / asym.coefficient - 1.0), 0.1, "tauberian-asymptotics");
    }
}

// ---------------------------------------------------------------------------
// Criterion 9: classical ruin oracle.
// ---------------------------------------------------------------------------

RiskModel classical_model(const Ctx& ctx) {
    RiskModel model;
    model.premium_rate = 2.0;
    model.initial_capital = 0.0;
    model.claims = ClaimDist::exponential(1.0);
    model.arrivals = TimeChangedSpec{ctx.sim(PoKParams(1, 1.0)), SubordinatorSpec::drift(1.0),
                                     TimeChangeMode::Direct};
    return model;
}

void criterion9(Ctx& ctx) {
    const RiskModel model = classical_model(ctx);
    const std::vector<double> u_grid{0.0, 1.0, 2.0};
    const std::vector<double> y_grid{1.0, 40.0};
    const auto est = simulate_ruin(model, 500.0, ctx.reps(100000), u_grid, y_grid, 0.0,
                                   ctx.stream("c9.ruin"), ctx.cfg.threads);
    // Cramer-Lundberg: psi(u) = (lambda mu / c) e^{-(1/mu - lambda/c) u},
    // an external classical result. Horizon bias at T = 500 is below 1e-9.
    double worst = 0.0;
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        const double target = 0.5 * std::exp(-0.5 * u_grid[i]);
        worst = std::max(worst, std::abs(est.psi[i].value - target) /
                                    (3.0 * est.psi[i].stderr_ + 1e-9));
    }
    ctx.add_le("c9.psi-vs-cramer-lundberg", worst, 1.0, "cramer-lundberg-closed-form");
    ctx.add_le("c9.horizon-tail-fraction", est.late_ruin_fraction, 0.01, "ruin-time-diagnostic");

    // Solver's y -> infinity limit against the same oracle.
    RiskModel analytic = model;
    analytic.arrivals.pok = PoKParams(1, 1.0);
    const GCurve curve = solve_g_k1(analytic, 40.0, 10.0, 0.01);
    double worst_solver = 0.0;
    for (double u : u_grid) {
        const double target = 0.5 * std::exp(-0.5 * u);
        worst_solver = std::max(worst_solver, std::abs(curve.at(u) - target));
    }
    ctx.add_le("c9.solver-psi-limit", worst_solver, 1e-4, "cramer-lundberg-closed-form");
}

// ---------------------------------------------------------------------------
// Criterion 10: ruin ODE consistency for the time-changed model.
// ---------------------------------------------------------------------------

RiskModel gamma_risk_model(const Ctx& ctx) {
    RiskModel model;
    model.premium_rate = 4.5;
    model.initial_capital = 0.0;
    model.claims = ClaimDist::exponential(1.0);
    model.arrivals = TimeChangedSpec{ctx.sim(PoKParams(2, 1.0)),
                                     SubordinatorSpec::gamma_process(3.0, 4.0),
                                     TimeChangeMode::Direct};
    return model;
}

void criterion10(Ctx& ctx) {
    const RiskModel model = gamma_risk_model(ctx);
    std::vector<double> u_grid;
    for (int i = 0; i <= 20; ++i) u_grid.push_back(0.25 * i);
    const std::vector<double> y_grid{0.5, 1.0, 2.0, 4.0};
    const auto est = simulate_ruin(model, 80.0, ctx.reps(20000), u_grid, y_grid, 0.02,
                                   ctx.stream("c10.ruin"), ctx.cfg.threads);
    ctx.add_le("c10.horizon-tail-fraction", est.late_ruin_fraction, 0.01,
               "ruin-time-diagnostic");

    RiskModel analytic = model;
    analytic.arrivals.pok = PoKParams(2, 1.0);
    double worst_resid = 0.0;
    for (std::size_t yi : {std::size_t{1}, std::size_t{2}}) {
        const auto field = g_ode_residual(analytic, est, yi);
        for (std::size_t i = 0; i < field.residual.size(); ++i)
            worst_resid = std::max(worst_resid, field.residual[i] / field.budget[i]);
    }
    ctx.add_le("c10.ode-residual-over-budget", worst_resid, 1.0, "ode-error-budget");

    const auto fp = solve_g_fixed_point(analytic, 1.0, 30.0, 0.015);
    ctx.add_le("c10.fixed-point-iterations", static_cast<double>(fp.iterations), 50.0,
               "fixed-point-convergence");
    double worst_match = 0.0;
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        const auto& g_mc = est.deficit_cdf[i][1];  // y = 1
        const double tol = 3.0 * g_mc.stderr_ + 0.012;
        worst_match = std::max(worst_match, std::abs(fp.curve.at(u_grid[i]) - g_mc.value) / tol);
    }
    ctx.add_le("c10.solver-vs-mc", worst_match, 1.0, "solver-vs-mc");

    // Structural sanity of the MC surface: monotone in y by construction,
    // non-increasing in u up to MC noise, tail identity against psi.
    double worst_u_violation = 0.0;
    double worst_tail = 0.0;
    for (std::size_t i = 0; i + 1 < u_grid.size(); ++i) {
        for (std::size_t j = 0; j < y_grid.size(); ++j) {
            const auto& a = est.deficit_cdf[i][j];
            const auto& b = est.deficit_cdf[i + 1][j];
            const double slack = 3.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
            worst_u_violation = std::max(worst_u_violation, b.value - a.value - slack);
        }
    }
    const AggregateClaimDist b1 = AggregateClaimDist::uniform_batches(model.claims, 2);
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        const auto& g_top = est.deficit_cdf[i].back();
        const double bound = (1.0 - b1.cdf(y_grid.back())) + 3.0 * (g_top.stderr_ +
                                                                    est.psi[i].stderr_);
        worst_tail = std::max(worst_tail, std::abs(g_top.value - est.psi[i].value) - bound);
    }
    ctx.add_le("c10.G-u-monotonicity-violation", worst_u_violation, 0.0, "structural-monotonicity");
    ctx.add_le("c10.G-tail-vs-psi", worst_tail, 0.0, "deficit-tail-bound");
}

// ---------------------------------------------------------------------------
// Suite-only extras beyond the numbered criteria.
// ---------------------------------------------------------------------------

long long poisson_count(double mu, Rng& rng) {
    long long n = 0;
    double t = rng.exponential(1.0);
    while (t < mu) {
        ++n;
        t += rng.exponential(1.0);
    }
    return n;
}

void ppok_extras(Ctx& ctx) {
    // k = 1 reduction: terminal counts pass a chi-square GOF against the
    // Poisson law.
    {
        const PoKParams params(1, 1.2);
        const double t = 10.0;
        const auto cutoff = static_cast<std::size_t>(pok_tail_cutoff(params, t, 1e-12));
        auto hist = chunked_reduce(
            ctx.reps(100000), ctx.cfg.threads,
            [&] { return std::vector<double>(cutoff + 1, 0.0); },
            [&](std::size_t rep, std::vector<double>& acc) {
                const auto c = static_cast<std::size_t>(
                    simulate_ppok(ctx.sim(params), t, ctx.stream("ppok.gof1").child(rep))
                        .terminal_count());
                if (c < acc.size()) acc[c] += 1.0;
            },
            [](std::vector<double>& into, std::vector<double>&& from) {
                for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
            });
        double n_total = 0.0;
        for (double v : hist) n_total += v;
        std::vector<double> probs(cutoff + 1);
        for (std::size_t n = 0; n <= cutoff; ++n)
            probs[n] = std::exp(poisson_log_pmf(params.rate * t, static_cast<long long>(n)));
        const auto gof = chi_square_gof(hist, probs, n_total);
        ctx.add_ge("ppok.k1-poisson-gof-pvalue", gof.p_value, 0.01, "chi-square-gof");
    }

    // Empirical pmf at fixed t against the partition-sum pmf.
    {
        const PoKParams params(3, 1.2);
        const double t = 5.0;
        const auto cutoff = static_cast<std::size_t>(pok_tail_cutoff(params, t, 1e-12));
        auto hist = chunked_reduce(
            ctx.reps(60000), ctx.cfg.threads,
            [&] { return std::vector<double>(cutoff + 1, 0.0); },
            [&](std::size_t rep, std::vector<double>& acc) {
                const auto c = static_cast<std::size_t>(
                    simulate_ppok(ctx.sim(params), t, ctx.stream("ppok.gof3").child(rep))
                        .terminal_count());
                if (c < acc.size()) acc[c] += 1.0;
            },
            [](std::vector<double>& into, std::vector<double>&& from) {
                for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
            });
        double n_total = 0.0;
        for (double v : hist) n_total += v;
        std::vector<double> probs(cutoff + 1);
        for (std::size_t n = 0; n <= cutoff; ++n)
            probs[n] = pok_pmf(params, t, static_cast<long long>(n));
        const auto gof = chi_square_gof(hist, probs, n_total);
        ctx.add_ge("ppok.pmf-gof-pvalue", gof.p_value, 0.01, "chi-square-gof");
    }

    // Distributional identity against the superposition of k independent
    // Poisson processes.
    {
        const PoKParams params(3, 1.0);
        const double t = 6.0;
        const std::size_t bins = 80;
        const std::size_t n_samples = ctx.reps(40000);
        auto hists = chunked_reduce(
            n_samples, ctx.cfg.threads,
            [&] { return std::vector<double>(2 * bins, 0.0); },
            [&](std::size_t rep, std::vector<double>& acc) {
                const auto a = static_cast<std::size_t>(
                    simulate_ppok(ctx.sim(params), t, ctx.stream("ppok.super.a").child(rep))
                        .terminal_count());
                Rng rng(ctx.stream("ppok.super.b").child(rep));
                long long weighted = 0;
                for (int i = 1; i <= params.order; ++i)
                    weighted += static_cast<long long>(i) *
                                poisson_count(ctx.sim(params).rate * t, rng);
                const auto b = static_cast<std::size_t>(weighted);
                if (a < bins) acc[a] += 1.0;
                if (b < bins) acc[bins + b] += 1.0;
            },
            [](std::vector<double>& into, std::vector<double>&& from) {
                for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
            });
        std::vector<double> ha(hists.begin(), hists.begin() + static_cast<long>(bins));
        std::vector<double> hb(hists.begin() + static_cast<long>(bins), hists.end());
        const auto two = chi_square_two_sample(ha, hb);
        ctx.add_ge("ppok.superposition-two-sample-pvalue", two.p_value, 0.01,
                   "poisson-superposition");
    }

    // Law of large numbers: exceedance probabilities shrink along the
    // horizon ladder.
    {
        const PoKParams params(2, 1.0);
        const auto report = ppok_lln_check(ctx.sim(params), {10.0, 100.0, 1000.0}, 0.5,
                                           ctx.reps(10000), ctx.stream("ppok.lln"),
                                           ctx.cfg.threads);
        double worst = 0.0;
        for (std::size_t j = 0; j + 1 < report.points.size(); ++j) {
            const double se =
                std::sqrt(report.points[j].exceedance_prob *
                              (1.0 - report.points[j].exceedance_prob) /
                              static_cast<double>(report.points[j].n_reps) +
                          1e-12);
            worst = std::max(worst, report.points[j + 1].exceedance_prob -
                                        report.points[j].exceedance_prob - 3.0 * se);
        }
        ctx.add_le("ppok.lln-exceedance-monotone", worst, 0.0, "law-of-large-numbers");
        ctx.add_le("ppok.lln-final-exceedance", report.points.back().exceedance_prob, 0.01,
                   "law-of-large-numbers");
    }

    // Dispersion index values.
    ctx.add_le("ppok.dispersion-index",
               std::max({std::abs(ppok_dispersion_index(PoKParams(1, 1.0)) - 1.0),
                         std::abs(ppok_dispersion_index(PoKParams(3, 1.0)) - 7.0 / 3.0),
                         std::abs(ppok_dispersion_index(PoKParams(5, 1.0)) - 11.0 / 3.0)}),
               1e-15, "variance-mean-ratio");
}

void subordinator_extras(Ctx& ctx) {
    // Density normalization and moments by quadrature.
    {
        const auto ig = SubordinatorSpec::inverse_gaussian(1.0, 1.0);
        auto dens = [&](double x) { return subordinator_density(ig, x, 1.0); };
        const double mass = integrate_positive_axis(dens, 1.0, 1e-10, {0.4}).value;
        ctx.add_le("sub.ig-density-normalization", std::abs(mass - 1.0), 1e-8,
                   "adaptive-quadrature");
        auto first = [&](double x) { return x * subordinator_density(ig, x, 1.0); };
        const double m1 = integrate_positive_axis(first, 1.0, 1e-10, {0.7}).value;
        ctx.add_le("sub.ig-density-first-moment", std::abs(m1 - subordinator_mean(ig, 1.0)),
                   1e-6, "adaptive-quadrature");

        double worst = 0.0;
        for (int q = 0; q <= 3; ++q) {
            auto integrand = [&](double x) {
                return std::pow(x, q) * subordinator_density(ig, x, 1.0);
            };
            const double quad = integrate_positive_axis(integrand, 1.0, 1e-11, {0.7}).value;
            const double closed = ig_moment(q, 1.0, 1.0, 1.0);
            worst = std::max(worst, std::abs(quad - closed) / std::abs(closed));
        }
        ctx.add_le("sub.ig-moment-vs-quadrature", worst, 1e-6, "bessel-closed-form");
    }
    {
        const auto gam = SubordinatorSpec::gamma_process(4.0, 3.0);
        auto dens = [&](double x) { return subordinator_density(gam, x, 1.0); };
        const double mass = integrate_positive_axis(dens, 4.0 / 3.0, 1e-10, {1.0}).value;
        ctx.add_le("sub.gamma-density-normalization", std::abs(mass - 1.0), 1e-8,
                   "adaptive-quadrature");
    }

    // Exact inverse of the deterministic drift.
    {
        Rng rng(ctx.stream("sub.drift-inverse"));
        const auto path = inverse_path(SubordinatorSpec::drift(2.0), 10.0, 0.01, rng);
        double worst = 0.0;
        for (std::size_t j = 0; j < path.values.size(); ++j)
            worst = std::max(worst, std::abs(path.values[j] - path.time_at(j) / 2.0));
        ctx.add_le("sub.drift-inverse-identity", worst / 0.01, 1.0 + 1e-9,
                   "linear-inverse");
    }

    // Monotonicity of simulated paths (exact assertion).
    {
        std::size_t violations = 0;
        for (const auto& spec :
             {SubordinatorSpec::gamma_process(4.0, 3.0), SubordinatorSpec::tempered_stable(0.7, 1.0),
              SubordinatorSpec::inverse_gaussian(1.0, 1.0)}) {
            Rng rng(ctx.stream("sub.monotone." + spec.name()));
            const auto fwd = simulate_path(spec, 5.0, 0.01, rng);
            for (std::size_t i = 1; i < fwd.values.size(); ++i)
                if (fwd.values[i] < fwd.values[i - 1]) ++violations;
            const auto inv = inverse_path(spec, 2.0, 0.005, rng);
            for (std::size_t i = 1; i < inv.values.size(); ++i)
                if (inv.values[i] < inv.values[i - 1]) ++violations;
        }
        ctx.add_le("sub.path-monotonicity-violations", static_cast<double>(violations), 0.0,
                   "structural-monotonicity");
    }

    // Sampler moments against f'(0+), f''(0+).
    {
        struct Case {
            SubordinatorSpec spec;
            const char* label;
        };
        const Case cases[]{{SubordinatorSpec::gamma_process(4.0, 3.0), "gamma"},
                           {SubordinatorSpec::inverse_gaussian(1.0, 1.0), "ig"}};
        for (const auto& c : cases) {
            auto acc = chunked_reduce(
                ctx.reps(100000), ctx.cfg.threads, [] { return MomentAccumulator{}; },
                [&](std::size_t rep, MomentAccumulator& a) {
                    Rng rng(ctx.stream(std::string("sub.moments.") + c.label).child(rep));
                    a.add(sample_increment(c.spec, 1.0, rng));
                },
                [](MomentAccumulator& into, MomentAccumulator&& from) { into.merge(from); });
            const double zm = z_score(acc.mean_estimate(), subordinator_mean(c.spec, 1.0));
            const double zv = z_score(acc.variance_estimate(), subordinator_variance(c.spec, 1.0));
            ctx.add_le(std::string("sub.increment-moments-z.") + c.label, std::max(zm, zv), 3.0,
                       "laplace-exponent-derivatives");
        }
    }

    // Inverse-path means against the Tauberian slopes (pre-asymptotic
    // tolerance 10%).
    {
        auto acc = chunked_reduce(
            ctx.reps(2000), ctx.cfg.threads, [] { return MomentAccumulator{}; },
            [&](std::size_t rep, MomentAccumulator& a) {
                Rng rng(ctx.stream("sub.inverse-gamma-mean").child(rep));
                a.add(first_passage_times(SubordinatorSpec::gamma_process(4.0, 3.0), {10.0},
                                          0.002, rng)[0]);
            },
            [](MomentAccumulator& into, MomentAccumulator&& from) { into.merge(from); });
        ctx.add_le("sub.inverse-gamma-mean-relerr", std::abs(acc.mean() / 7.5 - 1.0), 0.1,
                   "tauberian-asymptotics");
    }
    {
        auto acc = chunked_reduce(
            ctx.reps(1000), ctx.cfg.threads, [] { return MomentAccumulator{}; },
            [&](std::size_t rep, MomentAccumulator& a) {
                Rng rng(ctx.stream("sub.inverse-ig-ratio").child(rep));
                a.add(first_passage_times(SubordinatorSpec::inverse_gaussian(1.0, 1.0), {50.0},
                                          0.01, rng)[0]);
            },
            [](MomentAccumulator& into, MomentAccumulator&& from) { into.merge(from); });
        ctx.add_le("sub.inverse-ig-mean-ratio-err", std::abs(acc.mean() / 50.0 - 1.0), 0.05,
                   "tauberian-asymptotics");
    }
}

void timechange_extras(Ctx& ctx) {
    // Identity time change reproduces the plain process distribution.
    {
        const PoKParams params(3, 1.2);
        const double t = 10.0;
        const std::size_t bins = 120;
        const TimeChangedSpec direct{ctx.sim(params), SubordinatorSpec::drift(1.0),
                                     TimeChangeMode::Direct};
        const TimeChangedSpec inverse{ctx.sim(params), SubordinatorSpec::drift(1.0),
                                      TimeChangeMode::Inverse};
        for (const auto* mode : {"direct", "inverse"}) {
            const auto& spec = mode == std::string("direct") ? direct : inverse;
            auto hists = chunked_reduce(
                ctx.reps(30000), ctx.cfg.threads,
                [&] { return std::vector<double>(2 * bins, 0.0); },
                [&](std::size_t rep, std::vector<double>& acc) {
                    const auto qa = static_cast<std::size_t>(
                        simulate(spec, t, 0.005,
                                 ctx.stream(std::string("tc.ident.a.") + mode).child(rep))
                            .counts.back());
                    const auto qb = static_cast<std::size_t>(
                        simulate_ppok(ctx.sim(params), t,
                                      ctx.stream(std::string("tc.ident.b.") + mode).child(rep))
                            .terminal_count());
                    if (qa < bins) acc[qa] += 1.0;
                    if (qb < bins) acc[bins + qb] += 1.0;
                },
                [](std::vector<double>& into, std::vector<double>&& from) {
                    for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
                });
            std::vector<double> ha(hists.begin(), hists.begin() + static_cast<long>(bins));
            std::vector<double> hb(hists.begin() + static_cast<long>(bins), hists.end());
            const auto two = chi_square_two_sample(ha, hb);
            ctx.add_ge(std::string("tc.identity-two-sample-pvalue.") + mode, two.p_value, 0.01,
                       "identity-time-change");
        }
    }

    // TCPPoK-II pmf: drift identity, seed stability, and normalization.
    {
        const TimeChangedSpec drift_inv{PoKParams(2, 1.0), SubordinatorSpec::drift(1.0),
                                        TimeChangeMode::Inverse};
        const double t = 1.0;
        const double step = 1e-3;
        const auto row = tcppok2_pmf_table(drift_inv, t, 8, ctx.reps(20000), step,
                                           ctx.stream("tc2.drift"), ctx.cfg.threads);
        double worst = 0.0;
        for (long long n = 0; n <= 8; ++n) {
            const double target = pok_pmf(drift_inv.pok, t, n);
            const auto& e = row[static_cast<std::size_t>(n)];
            // Inverse drift carries an O(step) upward time bias.
            const double tol = 3.0 * e.stderr_ + 2.0 * drift_inv.pok.rate * 2.0 * step + 1e-9;
            worst = std::max(worst, std::abs(e.value - target) / tol);
        }
        ctx.add_le("tc2.drift-identity-pmf", worst, 1.0, "identity-time-change");

        const TimeChangedSpec ig_inv{PoKParams(2, 1.0),
                                     SubordinatorSpec::inverse_gaussian(1.0, 1.0),
                                     TimeChangeMode::Inverse};
        const auto a = tcppok2_pmf(ig_inv, 1.0, 0, ctx.reps(15000), 5e-4,
                                   ctx.stream("tc2.seed-a"), ctx.cfg.threads);
        const auto b = tcppok2_pmf(ig_inv, 1.0, 0, ctx.reps(15000), 5e-4,
                                   ctx.stream("tc2.seed-b"), ctx.cfg.threads);
        const double joint = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
        ctx.add_le("tc2.seed-stability-z", std::abs(a.value - b.value) / joint, 3.0,
                   "mc-self-consistency");

        const auto full = tcppok2_pmf_table(ig_inv, 1.0, 30, ctx.reps(15000), 5e-4,
                                            ctx.stream("tc2.norm"), ctx.cfg.threads);
        double total = 0.0;
        for (const auto& e : full) total += e.value;
        ctx.add_le("tc2.mc-normalization", std::abs(total - 1.0), 1e-3,
                   "normalizing-series");
    }

    // Covariance structure: dependence on min(s,t) only, and the analytic
    // LRD slope agreeing with the MC slope.
    {
        const TimeChangedSpec spec{PoKParams(3, 1.2), SubordinatorSpec::gamma_process(3.0, 4.0),
                                   TimeChangeMode::Direct};
        double worst = std::abs(tc_cov(spec, 2.0, 8.0) - tc_cov(spec, 2.0, 64.0));
        worst = std::max(worst, std::abs(tc_cov(spec, 2.0, 8.0) - tc_cov(spec, 8.0, 2.0)));
        ctx.add_le("tc.cov-min-dependence", worst, 1e-12, "closed-form-moments");

        const std::vector<double> grid{8.0, 16.0, 32.0, 64.0};
        std::vector<double> analytic;
        for (double tt : grid)
            analytic.push_back(tc_cov(spec, 2.0, tt) /
                               std::sqrt(tc_var(spec, 2.0) * tc_var(spec, tt)));
        const auto an_fit = log_log_fit(grid, analytic);
        const TimeChangedSpec sim_spec{ctx.sim(spec.pok), spec.sub, spec.mode};
        const auto mc_fit = lrd_decay_check(sim_spec, 2.0, grid, ctx.reps(50000), 1.0,
                                            ctx.stream("tc.lrd-gamma"), ctx.cfg.threads);
        ctx.add_le("tc.lrd-slope-mc-vs-analytic", std::abs(mc_fit.slope - an_fit.slope), 0.1,
                   "analytic-correlation");
    }

    // Transition rates: internal identities plus an empirical short-window
    // check (gamma family).
    {
        const TimeChangedSpec spec{PoKParams(2, 1.0), SubordinatorSpec::gamma_process(3.0, 4.0),
                                   TimeChangeMode::Direct};
        const double klam = 2.0;
        const auto rates = tcppok1_jump_rates(spec, 400);
        double total = 0.0;
        double mean_rate = 0.0;
        for (std::size_t i = 0; i < rates.size(); ++i) {
            total += rates[i];
            mean_rate += static_cast<double>(i + 1) * rates[i];
        }
        ctx.add_le("tc.jump-rates-total-vs-bernstein",
                   std::abs(total - bernstein(spec.sub, klam)) / bernstein(spec.sub, klam),
                   1e-10, "taylor-telescoping");
        ctx.add_le("tc.jump-rates-mean-vs-moment",
                   std::abs(mean_rate - tc_mean(spec, 1.0)) / tc_mean(spec, 1.0), 1e-10,
                   "closed-form-moments");

        const double h = 0.01;
        const std::size_t n_samples = ctx.reps(400000);
        const TimeChangedSpec sim_spec{ctx.sim(spec.pok), spec.sub, spec.mode};
        auto hist = chunked_reduce(
            n_samples, ctx.cfg.threads, [] { return std::vector<double>(6, 0.0); },
            [&](std::size_t rep, std::vector<double>& acc) {
                const RngStream rs = ctx.stream("tc.tran-prob").child(rep);
                Rng rng(rs.child(0));
                const double d = sample_increment(sim_spec.sub, h, rng);
                std::size_t q = 0;
                if (d > 0.0) {
                    q = static_cast<std::size_t>(
                        simulate_ppok(sim_spec.pok, d, rs.child(1)).terminal_count());
                }
                acc[std::min<std::size_t>(q, 5)] += 1.0;
            },
            [](std::vector<double>& into, std::vector<double>&& from) {
                for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
            });
        const double n = static_cast<double>(n_samples);
        double worst = 0.0;
        // Hold probability 1 - h f(k lambda) + o(h); the o(h) allowance is
        // 2 h^2 f^2.
        {
            const double p0 = hist[0] / n;
            const double target = 1.0 - h * bernstein(spec.sub, klam);
            const double tol = 3.0 * std::sqrt(p0 * (1.0 - p0) / n) +
                               2.0 * h * h * bernstein(spec.sub, klam) * bernstein(spec.sub, klam);
            worst = std::max(worst, std::abs(p0 - target) / tol);
        }
        for (std::size_t i = 1; i <= 4; ++i) {
            const double pi = hist[i] / n;
            const double target = h * rates[i - 1];
            const double tol = 3.0 * std::sqrt(pi * (1.0 - pi) / n) +
                               2.0 * h * h * bernstein(spec.sub, klam) * bernstein(spec.sub, klam);
            worst = std::max(worst, std::abs(pi - target) / tol);
        }
        ctx.add_le("tc.transition-rates-empirical", worst, 1.0, "first-order-rates");
    }

    // Tempered-stable inverse, large-t mean: the tempering-parameter
    // reading of the asymptotic coefficient is the one the paths follow.
    {
        const TimeChangedSpec spec{PoKParams(2, 1.0),
                                   SubordinatorSpec::tempered_stable(0.6, 1.0),
                                   TimeChangeMode::Inverse};
        const TimeChangedSpec sim_spec{ctx.sim(spec.pok), spec.sub, spec.mode};
        const std::vector<double> pts{50.0, 100.0, 200.0};
        const auto accs = mc_count_moments(sim_spec, pts, ctx.reps(400), 0.02,
                                           ctx.stream("tc2.its-large"), ctx.cfg.threads);
        std::vector<double> means;
        for (const auto& a : accs) means.push_back(a.mean());
        const auto fit = least_squares_fit(pts, means);
        const auto asym = tcppok2_asymptotic_mean(spec, AsymptoticRegime::LargeT);
        ctx.add_le("tc2.its-large-t-coefficient-relerr",
                   std::abs(fit.slope / asym.coefficient - 1.0), 0.15,
                   "tauberian-asymptotics");
    }
}

void dde_extras(Ctx& ctx) {
    const double delta = 1.0;
    const double gamma = 1.0;
    const PoKParams params(2, 1.0);
    const auto ig = SubordinatorSpec::inverse_gaussian(delta, gamma);

    // Inverse-IG density: normalization, positivity, boundary identity.
    {
        auto dens = [&](double x) { return inverse_ig_density(x, 1.0, delta, gamma); };
        const double mass = integrate_positive_axis(dens, 1.0, 1e-9).value;
        ctx.add_le("dde.inverse-ig-density-normalization", std::abs(mass - 1.0), 1e-6,
                   "adaptive-quadrature");

        double min_val = 0.0;
        for (double x = 0.0; x <= 20.0; x += 0.05)
            min_val = std::min(min_val, inverse_ig_density(x, 1.0, delta, gamma));
        ctx.add_ge("dde.inverse-ig-density-nonnegative", min_val, 0.0, "closed-form-cdf");

        const double eps = 1e-6;
        const double d0 = inverse_ig_density(0.0, 1.0, delta, gamma);
        const double fd = (-3.0 * d0 + 4.0 * inverse_ig_density(eps, 1.0, delta, gamma) -
                           inverse_ig_density(2.0 * eps, 1.0, delta, gamma)) /
                          (2.0 * eps);
        ctx.add_le("dde.inverse-ig-boundary-slope",
                   std::abs(fd - 2.0 * delta * gamma * d0) / std::abs(2.0 * delta * gamma * d0),
                   1e-4, "closed-form-cdf");

        auto first = [&](double x) { return x * inverse_ig_density(x, 1.0, delta, gamma); };
        const double m1 = integrate_positive_axis(first, 1.0, 1e-9).value;
        const double step = 5e-4;
        auto acc = chunked_reduce(
            ctx.reps(3000), ctx.cfg.threads, [] { return MomentAccumulator{}; },
            [&](std::size_t rep, MomentAccumulator& a) {
                Rng rng(ctx.stream("dde.inverse-ig-m1").child(rep));
                a.add(first_passage_times(ig, {1.0}, step, rng)[0]);
            },
            [](MomentAccumulator& into, MomentAccumulator&& from) { into.merge(from); });
        ctx.add_le("dde.inverse-ig-moment-quad-vs-mc",
                   std::abs(m1 - acc.mean()) / (3.0 * acc.se_mean() + step), 1.0,
                   "adaptive-quadrature");
    }

    // hat pmf normalization over m for both subordination routes; the
    // summation range adapts to the subordinator tail.
    {
        auto summed = [](auto&& pmf_at) {
            CompensatedSum sum;
            for (long long m = 0; m <= 400; ++m) {
                const double p = pmf_at(m);
                sum.add(p);
                if (m > 10 && p < 1e-10) break;
            }
            return sum.value();
        };
        const double direct_sum =
            summed([&](long long m) { return subordinated_ig_pmf(params, ig, m, 1.0); });
        ctx.add_le("dde.direct-ig-pmf-normalization", std::abs(direct_sum - 1.0), 1e-6,
                   "normalizing-series");
        const double inv_sum =
            summed([&](long long m) { return tcppok2_ig_pmf(params, ig, m, 1.0); });
        ctx.add_le("dde.inverse-ig-pmf-normalization", std::abs(inv_sum - 1.0), 1e-6,
                   "normalizing-series");
    }

    // Quadrature pmf against the Monte Carlo inverse-path pmf.
    {
        const TimeChangedSpec spec{ctx.sim(params), ig, TimeChangeMode::Inverse};
        const auto mc = tcppok2_pmf_table(spec, 1.0, 5, ctx.reps(20000), 5e-4,
                                          ctx.stream("dde.quad-vs-mc"), ctx.cfg.threads);
        double worst = 0.0;
        for (long long m = 0; m <= 5; ++m) {
            const double quad = tcppok2_ig_pmf(params, ig, m, 1.0);
            const auto& e = mc[static_cast<std::size_t>(m)];
            worst = std::max(worst,
                             std::abs(quad - e.value) / (3.0 * e.stderr_ + 2.0 * 5e-4 + 1e-9));
        }
        ctx.add_le("dde.quadrature-vs-mc-pmf", worst, 1.0, "mc-self-consistency");
    }
}

void ruin_extras(Ctx& ctx) {
    // Premium loading identities.
    {
        RiskModel classical = classical_model(ctx);
        classical.arrivals.pok = PoKParams(1, 1.0);
        const double rho1 = premium_loading(classical);

        RiskModel batch;
        batch.premium_rate = 10.8;
        batch.claims = ClaimDist::exponential(1.0);
        batch.arrivals =
            TimeChangedSpec{PoKParams(3, 1.2), SubordinatorSpec::drift(1.0), TimeChangeMode::Direct};
        const double rho2 = premium_loading(batch);

        RiskModel even = batch;
        even.premium_rate = 7.2;  // = mu * E[Q(1)]
        const double rho3 = premium_loading(even);

        const double worst =
            std::max({std::abs(rho1 - 1.0), std::abs(rho2 - 0.5), std::abs(rho3)});
        ctx.add_le("ruin.premium-loading-identities", worst, 1e-12, "closed-form-moments");
    }

    // Aggregate claim distribution: closed form and Monte Carlo convolution.
    {
        const auto b1 = AggregateClaimDist::uniform_batches(ClaimDist::exponential(1.0), 2);
        double worst = 0.0;
        for (double x = 0.25; x <= 6.0; x += 0.25) {
            const double expected =
                0.5 * ((1.0 - std::exp(-x)) + (1.0 - std::exp(-x) * (1.0 + x)));
            worst = std::max(worst, std::abs(b1.cdf(x) - expected));
        }
        ctx.add_le("ruin.b1-closed-form", worst, 1e-12, "erlang-cdf-algebra");
        ctx.add_le("ruin.b1-limit", std::abs(1.0 - b1.cdf(60.0)), 1e-12, "cdf-normalization");

        const std::size_t n_samples = ctx.reps(100000);
        const std::vector<double> probe{0.5, 1.5, 3.0};
        auto counts = chunked_reduce(
            n_samples, ctx.cfg.threads, [&] { return std::vector<double>(probe.size(), 0.0); },
            [&](std::size_t rep, std::vector<double>& acc) {
                Rng rng(ctx.stream("ruin.b1-mc").child(rep));
                const int batch = rng.uniform() < 0.5 ? 1 : 2;
                const double z = ClaimDist::exponential(1.0).sample_sum(batch, rng);
                for (std::size_t i = 0; i < probe.size(); ++i)
                    if (z <= probe[i]) acc[i] += 1.0;
            },
            [](std::vector<double>& into, std::vector<double>&& from) {
                for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
            });
        double worst_mc = 0.0;
        for (std::size_t i = 0; i < probe.size(); ++i) {
            const double p = counts[i] / static_cast<double>(n_samples);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
            worst_mc = std::max(worst_mc, std::abs(p - b1.cdf(probe[i])) / (3.0 * se));
        }
        ctx.add_le("ruin.b1-mc-convolution", worst_mc, 1.0, "mc-convolution");
    }

    // Classical G(0, y) boundary value.
    {
        RiskModel classical = classical_model(ctx);
        classical.arrivals.pok = PoKParams(1, 1.0);
        const GCurve g = solve_g_k1(classical, 1.0, 8.0, 0.008);
        const double expected = 0.5 * (1.0 - std::exp(-1.0));
        ctx.add_le("ruin.classical-g0", std::abs(g.values.front() - expected), 1e-12,
                   "analytic-integral");
    }

    // Safe regime: enormous premium, large capital.
    {
        RiskModel safe = classical_model(ctx);
        safe.premium_rate = 20.0;
        const auto est = simulate_ruin(safe, 200.0, ctx.reps(20000), {12.0}, {1.0}, 0.0,
                                       ctx.stream("ruin.safe"), ctx.cfg.threads);
        ctx.add_le("ruin.safe-regime-psi", est.psi[0].value, 1e-3, "large-deviation-regime");
    }
}

// ---------------------------------------------------------------------------

using CriterionFn = void (*)(Ctx&);

const std::map<int, CriterionFn>& criterion_table() {
    static const std::map<int, CriterionFn> table{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
    return table;
}

}  // namespace

ValidationReport run_criterion(int criterion, const ValidationConfig& config) {
    const auto it = criterion_table().find(criterion);
    if (it == criterion_table().end())
        throw std::invalid_argument("run_criterion: criteria 1..10 are runnable");
    Ctx ctx{config, {}};
    it->second(ctx);
    return {"criterion-" + std::to_string(criterion), std::move(ctx.checks)};
}

ValidationReport run_suite(const std::string& suite, const ValidationConfig& config) {
    Ctx ctx{config, {}};
    if (suite == "combinatorics") {
        criterion1(ctx);
    } else if (suite == "ppok") {
        criterion2(ctx);
        criterion3(ctx);
        ppok_extras(ctx);
    } else if (suite == "subordinators") {
        criterion4(ctx);
        subordinator_extras(ctx);
    } else if (suite == "timechange") {
        criterion5(ctx);
        criterion6(ctx);
        criterion8(ctx);
        timechange_extras(ctx);
    } else if (suite == "dde") {
        criterion7(ctx);
        dde_extras(ctx);
    } else if (suite == "ruin") {
        criterion9(ctx);
        criterion10(ctx);
        ruin_extras(ctx);
    } else if (suite == "all") {
        for (const auto& name : suite_names()) {
            if (name == "all") continue;
            auto sub = run_suite(name, config);
            for (auto& c : sub.checks) ctx.checks.push_back(std::move(c));
        }
    } else {
        throw std::invalid_argument("run_suite: unknown suite '" + suite + "'");
    }
    return {suite, std::move(ctx.checks)};
}

std::vector<std::string> suite_names() {
    return {"combinatorics", "ppok", "subordinators", "timechange", "dde", "ruin", "all"};
}

nlohmann::json report_to_json(const ValidationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"statistic", c.statistic},
                          {"threshold", c.threshold},
                          {"pass", c.pass},
                          {"oracle", c.oracle}});
    }
    return nlohmann::json{{"suite", report.suite}, {"pass", report.pass()}, {"checks", checks}};
}

}  // namespace orderk
