#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orderk/numeric.hpp"
#include "orderk/ppok.hpp"
#include "orderk/stats.hpp"

using namespace orderk;

TEST_CASE("paths are reproducible from their stream and structurally sound") {
    const PoKParams params(3, 1.2);
    const RngStream stream{99, 7};
    const CountPath a = simulate_ppok(params, 25.0, stream);
    const CountPath b = simulate_ppok(params, 25.0, stream);
    CHECK(a.jump_times == b.jump_times);
    CHECK(a.jump_sizes == b.jump_sizes);

    const CountPath c = simulate_ppok(params, 25.0, stream.child(1));
    CHECK(a.jump_times != c.jump_times);

    std::int64_t running = 0;
    for (std::size_t i = 0; i < a.jump_times.size(); ++i) {
        if (i > 0) CHECK(a.jump_times[i] > a.jump_times[i - 1]);
        CHECK(a.jump_times[i] < a.horizon);
        CHECK(a.jump_sizes[i] >= 1);
        CHECK(a.jump_sizes[i] <= params.order);
        running += a.jump_sizes[i];
        CHECK(a.cumulative[i] == running);
    }
}

TEST_CASE("count_at steps exactly at jump times") {
    const PoKParams params(2, 2.0);
    const CountPath path = simulate_ppok(params, 10.0, RngStream{5, 5});
    REQUIRE(!path.jump_times.empty());
    CHECK(path.count_at(0.0) == 0);
    CHECK(path.count_at(path.jump_times[0] - 1e-12) == 0);
    CHECK(path.count_at(path.jump_times[0]) == path.cumulative[0]);
    CHECK(path.count_at(path.horizon) == path.terminal_count());
}

TEST_CASE("closed moments match the worked arithmetic") {
    CHECK(ppok_mean(PoKParams(3, 1.2), 10.0) == doctest::Approx(72.0));
    CHECK(ppok_var(PoKParams(3, 1.2), 10.0) == doctest::Approx(168.0));
    CHECK(ppok_mean(PoKParams(1, 0.7), 4.0) == doctest::Approx(0.7 * 4.0));
    CHECK(ppok_var(PoKParams(1, 0.7), 4.0) == doctest::Approx(0.7 * 4.0));
    CHECK(ppok_cov(PoKParams(2, 1.0), 4.0, 16.0) == doctest::Approx(20.0));
    CHECK(ppok_cov(PoKParams(2, 1.0), 16.0, 4.0) == doctest::Approx(20.0));
}

TEST_CASE("correlation depends only on the time ratio") {
    CHECK(ppok_corr(PoKParams(4, 2.0), 4.0, 16.0) == doctest::Approx(0.5));
    CHECK(ppok_corr(PoKParams(1, 1.0), 4.0, 16.0) == doctest::Approx(0.5));
    CHECK(ppok_corr(PoKParams(3, 1.0), 7.0, 7.0) == doctest::Approx(1.0));
    CHECK(ppok_corr(PoKParams(3, 1.0), 16.0, 4.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ppok_corr(PoKParams(2, 1.0), 0.0, 1.0), std::domain_error);
}

TEST_CASE("dispersion index is (2k+1)/3") {
    CHECK(ppok_dispersion_index(PoKParams(1, 9.0)) == doctest::Approx(1.0));
    CHECK(ppok_dispersion_index(PoKParams(3, 0.1)) == doctest::Approx(7.0 / 3.0));
    CHECK(ppok_dispersion_index(PoKParams(5, 2.0)) == doctest::Approx(11.0 / 3.0));
}

TEST_CASE("simulated moments track the closed forms" * doctest::timeout(60)) {
    const PoKParams params(3, 1.2);
    const double horizon = 10.0;
    const std::size_t n_reps = 20000;
    auto acc = chunked_reduce(
        n_reps, 2, [] { return MomentAccumulator{}; },
        [&](std::size_t rep, MomentAccumulator& a) {
            a.add(static_cast<double>(
                simulate_ppok(params, horizon, RngStream{777, 0}.child(rep)).terminal_count()));
        },
        [](MomentAccumulator& into, MomentAccumulator&& from) { into.merge(from); });
    CHECK(std::abs(acc.mean() - 72.0) < 3.0 * acc.se_mean());
    CHECK(std::abs(acc.variance() - 168.0) < 3.0 * acc.se_variance());
}

TEST_CASE("empirical correlation approaches sqrt(s/t)" * doctest::timeout(60)) {
    const PoKParams params(3, 1.2);
    const double s = 2.0;
    const double t = 8.0;
    const std::size_t n_reps = 20000;
    struct Acc {
        CompensatedSum xs, xt, xs2, xt2, cross;
    };
    auto acc = chunked_reduce(
        n_reps, 2, [] { return Acc{}; },
        [&](std::size_t rep, Acc& a) {
            const CountPath path = simulate_ppok(params, t, RngStream{31, 0}.child(rep));
            const double qs = static_cast<double>(path.count_at(s));
            const double qt = static_cast<double>(path.terminal_count());
            a.xs.add(qs);
            a.xt.add(qt);
            a.xs2.add(qs * qs);
            a.xt2.add(qt * qt);
            a.cross.add(qs * qt);
        },
        [](Acc& into, Acc&& from) {
            into.xs.add(from.xs.value());
            into.xt.add(from.xt.value());
            into.xs2.add(from.xs2.value());
            into.xt2.add(from.xt2.value());
            into.cross.add(from.cross.value());
        });
    const double n = static_cast<double>(n_reps);
    const double ms = acc.xs.value() / n;
    const double mt = acc.xt.value() / n;
    const double vs = acc.xs2.value() / n - ms * ms;
    const double vt = acc.xt2.value() / n - mt * mt;
    const double corr = (acc.cross.value() / n - ms * mt) / std::sqrt(vs * vt);
    // SE of a correlation estimate is about (1 - rho^2) / sqrt(n).
    const double se = (1.0 - 0.25) / std::sqrt(n);
    CHECK(std::abs(corr - 0.5) < 3.0 * se);
}

TEST_CASE("law-of-large-numbers exceedance report shrinks along horizons") {
    const PoKParams params(2, 1.0);
    const auto report =
        ppok_lln_check(params, {5.0, 50.0, 500.0}, 0.5, 2000, RngStream{123, 0}, 2);
    CHECK(report.limit == doctest::Approx(3.0));
    REQUIRE(report.points.size() == 3);
    CHECK(report.points[0].horizon == 5.0);
    for (std::size_t j = 0; j + 1 < report.points.size(); ++j)
        CHECK(report.points[j + 1].exceedance_prob <= report.points[j].exceedance_prob + 0.02);
    CHECK(report.points.back().exceedance_prob <= 0.01);
}
