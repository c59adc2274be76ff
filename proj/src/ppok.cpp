#include "orderk/ppok.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orderk/numeric.hpp"

namespace orderk {

std::int64_t CountPath::count_at(double t) const {
    if (jump_times.empty() || t < jump_times.front()) return 0;
    const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    return cumulative[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

CountPath simulate_ppok(const PoKParams& params, double horizon, RngStream stream) {
    if (!(horizon > 0.0)) throw std::domain_error("simulate_ppok: horizon must be > 0");
    Rng rng(stream);
    const double batch_rate = static_cast<double>(params.order) * params.rate;
    CountPath path;
    path.horizon = horizon;
    double t = 0.0;
    std::int64_t total = 0;
    for (;;) {
        t += rng.exponential(batch_rate);
        if (t >= horizon) break;
        int size = static_cast<int>(static_cast<double>(params.order) * rng.uniform()) + 1;
        size = std::min(size, params.order);
        total += size;
        path.jump_times.push_back(t);
        path.jump_sizes.push_back(size);
        path.cumulative.push_back(total);
    }
    return path;
}

double ppok_mean(const PoKParams& params, double t) {
    const double k = static_cast<double>(params.order);
    return 0.5 * k * (k + 1.0) * params.rate * t;
}

double ppok_var(const PoKParams& params, double t) {
    const double k = static_cast<double>(params.order);
    return k * (k + 1.0) * (2.0 * k + 1.0) * params.rate * t / 6.0;
}

double ppok_cov(const PoKParams& params, double s, double t) {
    return ppok_var(params, std::min(s, t));
}

double ppok_corr(const PoKParams& params, double s, double t) {
    (void)params;
    if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("ppok_corr: times must be > 0");
    if (s > t) std::swap(s, t);
    return std::sqrt(s / t);
}

double ppok_dispersion_index(const PoKParams& params) {
    return (2.0 * static_cast<double>(params.order) + 1.0) / 3.0;
}

LlnReport ppok_lln_check(const PoKParams& params, const std::vector<double>& horizons,
                         double epsilon, std::size_t n_reps, RngStream stream,
                         unsigned n_threads) {
    if (horizons.empty()) throw std::invalid_argument("ppok_lln_check: no horizons");
    std::vector<double> sorted = horizons;
    std::sort(sorted.begin(), sorted.end());
    const double t_max = sorted.back();
    const double limit = 0.5 * static_cast<double>(params.order) *
                         (static_cast<double>(params.order) + 1.0) * params.rate;

    auto exceed_counts = chunked_reduce(
        n_reps, n_threads, [&] { return std::vector<std::size_t>(sorted.size(), 0); },
        [&](std::size_t rep, std::vector<std::size_t>& acc) {
            const CountPath path = simulate_ppok(params, t_max, stream.child(rep));
            for (std::size_t j = 0; j < sorted.size(); ++j) {
                const double ratio =
                    static_cast<double>(path.count_at(sorted[j])) / sorted[j];
                if (std::abs(ratio - limit) > epsilon) ++acc[j];
            }
        },
        [](std::vector<std::size_t>& into, std::vector<std::size_t>&& from) {
            for (std::size_t j = 0; j < into.size(); ++j) into[j] += from[j];
        });

    LlnReport report;
    report.limit = limit;
    report.epsilon = epsilon;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        report.points.push_back({sorted[j],
                                 static_cast<double>(exceed_counts[j]) /
                                     static_cast<double>(n_reps),
                                 n_reps});
    }
    return report;
}

}  // namespace orderk
