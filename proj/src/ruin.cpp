#include "orderk/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orderk/numeric.hpp"
#include "orderk/special.hpp"

namespace orderk {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

double erlang_cdf(int shape, double rate, double x) {
    if (x <= 0.0) return 0.0;
    return gamma_p_reg(static_cast<double>(shape), rate * x);
}

double erlang_pdf(int shape, double rate, double x) {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return shape == 1 ? rate : 0.0;
    return rate * std::exp((shape - 1) * std::log(rate * x) - rate * x -
                           std::lgamma(static_cast<double>(shape)));
}

}  // namespace

ClaimDist ClaimDist::exponential(double mean) {
    require(mean > 0.0, "ClaimDist: mean must be > 0");
    return ClaimDist{1, 1.0 / mean};
}

ClaimDist ClaimDist::erlang(int shape, double rate) {
    require(shape >= 1 && rate > 0.0, "ClaimDist: shape >= 1 and rate > 0 required");
    return ClaimDist{shape, rate};
}

double ClaimDist::cdf(double x) const { return erlang_cdf(shape, rate, x); }

double ClaimDist::sample_sum(int count, Rng& rng) const {
    if (count <= 0) return 0.0;
    return rng.gamma(static_cast<double>(count) * static_cast<double>(shape), rate);
}

AggregateClaimDist AggregateClaimDist::uniform_batches(const ClaimDist& base, int k) {
    require(k >= 1, "AggregateClaimDist: k must be >= 1");
    AggregateClaimDist agg;
    agg.base = base;
    agg.weights.assign(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
    return agg;
}

AggregateClaimDist AggregateClaimDist::from_jump_rates(const ClaimDist& base,
                                                       const TimeChangedSpec& spec,
                                                       double tail_eps) {
    const double total_rate =
        bernstein(spec.sub, static_cast<double>(spec.pok.order) * spec.pok.rate);
    AggregateClaimDist agg;
    agg.base = base;
    for (int max_jump = 16; max_jump <= 1024; max_jump *= 2) {
        const auto rates = tcppok1_jump_rates(spec, max_jump);
        double assigned = 0.0;
        for (double q : rates) assigned += q;
        if (total_rate - assigned <= tail_eps * total_rate) {
            agg.weights.resize(rates.size());
            for (std::size_t i = 0; i < rates.size(); ++i)
                agg.weights[i] = rates[i] / total_rate;
            // Trim negligible trailing weights.
            while (agg.weights.size() > 1 && agg.weights.back() < tail_eps * 1e-3)
                agg.weights.pop_back();
            return agg;
        }
    }
    throw RuinSolverError(
        "AggregateClaimDist::from_jump_rates: jump-size distribution did not converge "
        "within 1024 terms");
}

double AggregateClaimDist::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    double v = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n)
        v += weights[n] * erlang_cdf(static_cast<int>(n + 1) * base.shape, base.rate, x);
    return v;
}

double AggregateClaimDist::density(double x) const {
    if (x < 0.0) return 0.0;
    double v = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n)
        v += weights[n] * erlang_pdf(static_cast<int>(n + 1) * base.shape, base.rate, x);
    return v;
}

double AggregateClaimDist::integrated_tail(double y) const {
    if (y <= 0.0) return 0.0;
    // int_0^y S_m(x) dx = (1/rate) sum_{j=1}^m F_{Erlang(j)}(y).
    double v = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const int m = static_cast<int>(n + 1) * base.shape;
        double inner = 0.0;
        for (int j = 1; j <= m; ++j) inner += erlang_cdf(j, base.rate, y);
        v += weights[n] * inner / base.rate;
    }
    return v;
}

double AggregateClaimDist::mean() const {
    double v = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n)
        v += weights[n] * static_cast<double>(n + 1) * base.mean();
    return v;
}

double premium_loading(const RiskModel& model) {
    const double expected_counts = tc_mean(model.arrivals, 1.0);
    return model.premium_rate / (model.claims.mean() * expected_counts) - 1.0;
}

namespace {

struct RepOutcome {
    // Per u level: ruin indicator, ruin time, deficit.
    std::vector<bool> ruined;
    std::vector<double> ruin_time;
    std::vector<double> deficit;
};

/// Walk one aggregate-loss trajectory L(t) = sum Z - c t and record the
/// first passage over every capital level (levels ascending; a single claim
/// epoch may cross several).
class LevelTracker {
public:
    LevelTracker(const std::vector<double>& levels, RepOutcome& out)
        : levels_(levels), out_(out) {
        out_.ruined.assign(levels.size(), false);
        out_.ruin_time.assign(levels.size(), 0.0);
        out_.deficit.assign(levels.size(), 0.0);
    }

    /// Returns true while some level is still solvent.
    bool on_claim_epoch(double t, double loss_level) {
        while (next_ < levels_.size() && loss_level > levels_[next_]) {
            out_.ruined[next_] = true;
            out_.ruin_time[next_] = t;
            out_.deficit[next_] = loss_level - levels_[next_];
            ++next_;
        }
        return next_ < levels_.size();
    }

private:
    const std::vector<double>& levels_;
    RepOutcome& out_;
    std::size_t next_ = 0;
};

void run_replication(const RiskModel& model, double horizon, double sim_step, Rng& rng,
                     const std::vector<double>& u_grid, RepOutcome& out) {
    const PoKParams& pok = model.arrivals.pok;
    const double batch_rate = static_cast<double>(pok.order) * pok.rate;
    const double c = model.premium_rate;
    LevelTracker tracker(u_grid, out);
    double claims_total = 0.0;

    if (model.arrivals.sub.family == SubordinatorFamily::Drift) {
        // Exact event loop: batches arrive at rate k lambda b in real time.
        const double real_rate = batch_rate * model.arrivals.sub.drift_slope;
        double t = 0.0;
        for (;;) {
            t += rng.exponential(real_rate);
            if (t >= horizon) return;
            int size = static_cast<int>(static_cast<double>(pok.order) * rng.uniform()) + 1;
            size = std::min(size, pok.order);
            claims_total += model.claims.sample_sum(size, rng);
            if (!tracker.on_claim_epoch(t, claims_total - c * t)) return;
        }
    }

    // Grid loop: advance the operational clock by subordinator increments
    // and bank every batch crossed in the step at the grid time.
    double w = 0.0;
    double w_next = rng.exponential(batch_rate);
    double t = 0.0;
    while (t < horizon) {
        t += sim_step;
        w += sample_increment(model.arrivals.sub, sim_step, rng);
        int units = 0;
        while (w_next <= w) {
            int size = static_cast<int>(static_cast<double>(pok.order) * rng.uniform()) + 1;
            size = std::min(size, pok.order);
            units += size;
            w_next += rng.exponential(batch_rate);
        }
        if (units > 0) {
            claims_total += model.claims.sample_sum(units, rng);
            if (!tracker.on_claim_epoch(t, claims_total - c * t)) return;
        }
    }
}

}  // namespace

RuinEstimate simulate_ruin(const RiskModel& model, double horizon, std::size_t n_reps,
                           const std::vector<double>& u_grid, const std::vector<double>& y_grid,
                           double sim_step, RngStream stream, unsigned n_threads) {
    require(horizon > 0.0, "simulate_ruin: horizon must be > 0");
    require(n_reps > 0, "simulate_ruin: n_reps must be > 0");
    if (model.arrivals.mode != TimeChangeMode::Direct)
        throw std::invalid_argument("simulate_ruin: arrivals must be a Direct-mode spec");
    if (u_grid.empty() || !std::is_sorted(u_grid.begin(), u_grid.end()))
        throw std::invalid_argument("simulate_ruin: u_grid must be ascending and non-empty");
    if (y_grid.empty() || !std::is_sorted(y_grid.begin(), y_grid.end()))
        throw std::invalid_argument("simulate_ruin: y_grid must be ascending and non-empty");
    if (model.arrivals.sub.family != SubordinatorFamily::Drift)
        require(sim_step > 0.0, "simulate_ruin: sim_step must be > 0 for non-drift arrivals");

    const std::size_t n_u = u_grid.size();
    const std::size_t n_y = y_grid.size();
    // Per u: [ruined, late, deficit histogram over n_y + 1 slots].
    const std::size_t stride = 2 + n_y + 1;

    auto counts = chunked_reduce(
        n_reps, n_threads,
        [&] { return std::vector<std::uint64_t>(n_u * stride, 0); },
        [&](std::size_t rep, std::vector<std::uint64_t>& acc) {
            Rng rng(stream.child(rep));
            RepOutcome out;
            run_replication(model, horizon, sim_step, rng, u_grid, out);
            for (std::size_t i = 0; i < n_u; ++i) {
                if (!out.ruined[i]) continue;
                auto* row = acc.data() + i * stride;
                ++row[0];
                if (out.ruin_time[i] > 0.9 * horizon) ++row[1];
                const auto slot = static_cast<std::size_t>(
                    std::lower_bound(y_grid.begin(), y_grid.end(), out.deficit[i]) -
                    y_grid.begin());
                ++row[2 + slot];
            }
        },
        [](std::vector<std::uint64_t>& into, std::vector<std::uint64_t>&& from) {
            for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
        });

    RuinEstimate est;
    est.u_grid = u_grid;
    est.y_grid = y_grid;
    est.horizon = horizon;
    est.sim_step = model.arrivals.sub.family == SubordinatorFamily::Drift ? 0.0 : sim_step;
    est.n_reps = n_reps;
    est.psi.resize(n_u);
    est.deficit_cdf.assign(n_u, std::vector<McEstimate>(n_y));
    const double n = static_cast<double>(n_reps);
    auto binom_se = [n](double p) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); };
    for (std::size_t i = 0; i < n_u; ++i) {
        const auto* row = counts.data() + i * stride;
        const double p_ruin = static_cast<double>(row[0]) / n;
        est.psi[i] = {p_ruin, binom_se(p_ruin), n_reps};
        est.late_ruin_fraction =
            std::max(est.late_ruin_fraction, static_cast<double>(row[1]) / n);
        std::uint64_t cum = 0;
        for (std::size_t j = 0; j < n_y; ++j) {
            cum += row[2 + j];
            const double g = static_cast<double>(cum) / n;
            est.deficit_cdf[i][j] = {g, binom_se(g), n_reps};
        }
    }
    est.horizon_warning = est.late_ruin_fraction > 0.01;
    return est;
}

namespace {

/// Shared machinery of the governing equation
///   dG/du = (f/c) [ G(u) - factor (int_0^u G(u-x) dM(x) + M(u+y) - M(u)) ],
/// with M the aggregate mixture, discretized on a uniform u grid.
struct GEquationKernel {
    double rate_over_c = 0.0;
    double factor = 1.0;
    double step = 0.0;
    std::vector<double> density;  // M'(x_j)
    std::vector<double> bracket;  // M(u_j + y) - M(u_j)

    GEquationKernel(const RiskModel& model, const AggregateClaimDist& mix, GEquationForm form,
                    double y, double step_in, std::size_t n_points) {
        const double f =
            bernstein(model.arrivals.sub,
                      static_cast<double>(model.arrivals.pok.order) * model.arrivals.pok.rate);
        rate_over_c = f / model.premium_rate;
        factor = form == GEquationForm::UniformAggregate
                     ? static_cast<double>(model.arrivals.pok.order)
                     : 1.0;
        step = step_in;
        density.resize(n_points);
        bracket.resize(n_points);
        for (std::size_t j = 0; j < n_points; ++j) {
            const double x = static_cast<double>(j) * step;
            density[j] = mix.density(x);
            bracket[j] = mix.cdf(x + y) - mix.cdf(x);
        }
    }

    /// Trapezoid convolution int_0^{u_i} G(u_i - x) M'(x) dx on the grid.
    [[nodiscard]] double convolution(const std::vector<double>& g, std::size_t i) const {
        if (i == 0) return 0.0;
        double acc = 0.5 * (g[i] * density[0] + g[0] * density[i]);
        for (std::size_t j = 1; j < i; ++j) acc += g[i - j] * density[j];
        return acc * step;
    }

    [[nodiscard]] double rhs(const std::vector<double>& g, std::size_t i) const {
        return rate_over_c * (g[i] - factor * (convolution(g, i) + bracket[i]));
    }
};

AggregateClaimDist mixture_for(const RiskModel& model, GEquationForm form) {
    if (form == GEquationForm::UniformAggregate)
        return AggregateClaimDist::uniform_batches(model.claims, model.arrivals.pok.order);
    return AggregateClaimDist::from_jump_rates(model.claims, model.arrivals);
}

/// ABM4 march of the governing equation from the boundary value g0.
GCurve march_g(const GEquationKernel& kernel, double g0, double y, double u_max, double step) {
    const auto n = static_cast<std::size_t>(std::llround(u_max / step));
    GCurve curve;
    curve.y = y;
    curve.step = step;
    auto& g = curve.values;
    g.assign(n + 1, 0.0);
    g[0] = g0;
    std::vector<double> rhs_hist(n + 1, 0.0);
    rhs_hist[0] = kernel.rhs(g, 0);

    for (std::size_t i = 0; i + 1 <= n; ++i) {
        const std::size_t next = i + 1;
        double predicted;
        if (i < 3) {
            // Heun bootstrap with two corrector sweeps.
            predicted = g[i] + step * rhs_hist[i];
            for (int sweep = 0; sweep < 2; ++sweep) {
                g[next] = predicted;
                const double r_next = kernel.rhs(g, next);
                predicted = g[i] + 0.5 * step * (rhs_hist[i] + r_next);
            }
            g[next] = predicted;
        } else {
            predicted = g[i] + step / 24.0 *
                                   (55.0 * rhs_hist[i] - 59.0 * rhs_hist[i - 1] +
                                    37.0 * rhs_hist[i - 2] - 9.0 * rhs_hist[i - 3]);
            g[next] = predicted;
            const double r_pred = kernel.rhs(g, next);
            g[next] = g[i] + step / 24.0 *
                                 (9.0 * r_pred + 19.0 * rhs_hist[i] - 5.0 * rhs_hist[i - 1] +
                                  rhs_hist[i - 2]);
        }
        rhs_hist[next] = kernel.rhs(g, next);
    }
    return curve;
}

double trapz(const std::vector<double>& v, double step) {
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
    return acc * step;
}

}  // namespace

double GCurve::at(double u) const {
    if (values.empty()) return 0.0;
    if (u <= 0.0) return values.front();
    const double idx = u / step;
    const auto lo = static_cast<std::size_t>(idx);
    if (lo + 1 >= values.size()) return values.back();
    const double w = idx - static_cast<double>(lo);
    return (1.0 - w) * values[lo] + w * values[lo + 1];
}

GOdeResidualField g_ode_residual(const RiskModel& model, const RuinEstimate& estimate,
                                 std::size_t y_index, GEquationForm form) {
    if (y_index >= estimate.y_grid.size())
        throw std::invalid_argument("g_ode_residual: y_index out of range");
    const auto& u = estimate.u_grid;
    if (u.size() < 3) throw std::invalid_argument("g_ode_residual: need >= 3 u points");
    const double du = u[1] - u[0];
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        if (std::abs((u[i + 1] - u[i]) - du) > 1e-9 * std::max(1.0, du))
            throw std::invalid_argument("g_ode_residual: u_grid must be uniform");
    }

    const AggregateClaimDist mix = mixture_for(model, form);
    const GEquationKernel kernel(model, mix, form, estimate.y_grid[y_index], du, u.size());

    std::vector<double> g(u.size());
    std::vector<double> se(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        g[i] = estimate.deficit_cdf[i][y_index].value;
        se[i] = estimate.deficit_cdf[i][y_index].stderr_;
    }

    const double claim_rate = model.claims.rate;
    GOdeResidualField field;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double lhs = (g[i + 1] - g[i - 1]) / (2.0 * du);
        const double rhs = kernel.rhs(g, i);
        // MC noise propagated through both sides (independence is
        // conservative for the rhs; the common-path positive correlation
        // only shrinks the lhs difference error).
        const double var_lhs = (se[i + 1] * se[i + 1] + se[i - 1] * se[i - 1]) / (4.0 * du * du);
        double var_conv = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const double w = (j == 0 || j == i) ? 0.5 : 1.0;
            const double contrib = w * kernel.density[j] * du * se[i - j];
            var_conv += contrib * contrib;
        }
        const double var_rhs = kernel.rate_over_c * kernel.rate_over_c *
                               (se[i] * se[i] + kernel.factor * kernel.factor * var_conv);
        // Truncation of the central difference (exponential-type curves:
        // |G'''| <~ beta^3 G) plus the simulation-grid premium bias.
        const double fd_trunc =
            du * du / 6.0 * claim_rate * claim_rate * claim_rate * (std::abs(g[i]) + 0.02);
        const double sim_bias = model.premium_rate * estimate.sim_step * std::abs(lhs);
        field.u.push_back(u[i]);
        field.residual.push_back(std::abs(lhs - rhs));
        field.budget.push_back(3.0 * std::sqrt(var_lhs + var_rhs) + fd_trunc + sim_bias);
    }
    return field;
}

bool GOdeResidualField::within_budget() const {
    for (std::size_t i = 0; i < residual.size(); ++i)
        if (residual[i] > budget[i]) return false;
    return true;
}

GCurve solve_g_k1(const RiskModel& model, double y, double u_max, double step) {
    if (model.arrivals.pok.order != 1)
        throw std::invalid_argument("solve_g_k1: k must be 1; use solve_g_fixed_point");
    return solve_g_fixed_point(model, y, u_max, step).curve;
}

FixedPointResult solve_g_fixed_point(const RiskModel& model, double y, double u_max, double step,
                                     int max_iter, double tol, GEquationForm form) {
    require(u_max > 0.0 && step > 0.0 && y > 0.0,
            "solve_g_fixed_point: y, u_max and step must be > 0");
    const AggregateClaimDist mix = mixture_for(model, form);
    const auto n = static_cast<std::size_t>(std::llround(u_max / step));
    const GEquationKernel kernel(model, mix, form, y, step, n + 1);
    const double f_over_c = kernel.rate_over_c;
    const double k = static_cast<double>(model.arrivals.pok.order);
    const double tail_term = kernel.factor * mix.integrated_tail(y);
    // Coefficient of int_0^inf G du in the boundary identity; zero under
    // the rate-consistent mixture form.
    const double integral_coeff =
        form == GEquationForm::UniformAggregate ? f_over_c * (k - 1.0) : 0.0;

    FixedPointResult result;
    double guess = 0.0;
    double prev_out = -1.0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        const double g0 = f_over_c * tail_term + integral_coeff * guess;
        result.curve = march_g(kernel, g0, y, u_max, step);
        const double out = trapz(result.curve.values, step);
        result.iterations = iter;
        result.last_change = std::abs(out - (prev_out < 0.0 ? guess : prev_out));
        if (integral_coeff == 0.0) return result;
        if (prev_out >= 0.0 && std::abs(out - prev_out) < tol) return result;
        prev_out = out;
        guess += 0.5 * (out - guess);
    }
    std::ostringstream msg;
    msg << "solve_g_fixed_point: no convergence after " << max_iter
        << " iterations; last integral iterates " << prev_out << " and guess " << guess;
    throw RuinSolverError(msg.str());
}

}  // namespace orderk
