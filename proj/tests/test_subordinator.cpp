#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orderk/numeric.hpp"
#include "orderk/quadrature.hpp"
#include "orderk/stats.hpp"
#include "orderk/subordinator.hpp"

using namespace orderk;

TEST_CASE("bernstein functions match the parametric forms") {
    CHECK(bernstein(SubordinatorSpec::gamma_process(4.0, 3.0), 1.0) ==
          doctest::Approx(4.0 * std::log(4.0 / 3.0)).epsilon(1e-14));
    CHECK(bernstein(SubordinatorSpec::tempered_stable(0.5, 0.0), 4.0) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(bernstein(SubordinatorSpec::inverse_gaussian(1.0, 1.0), 0.0) == 0.0);
    CHECK(bernstein(SubordinatorSpec::drift(2.5), 2.0) == doctest::Approx(5.0));
    // Every family vanishes at zero.
    for (const auto& spec :
         {SubordinatorSpec::drift(1.0), SubordinatorSpec::gamma_process(2.0, 5.0),
          SubordinatorSpec::tempered_stable(0.3, 1.5), SubordinatorSpec::inverse_gaussian(2.0, 3.0)})
        CHECK(bernstein(spec, 0.0) == 0.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SubordinatorSpec::drift(0.0), std::domain_error);
    CHECK_THROWS_AS(SubordinatorSpec::gamma_process(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(SubordinatorSpec::tempered_stable(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(SubordinatorSpec::tempered_stable(0.5, -0.1), std::domain_error);
    CHECK_THROWS_AS(SubordinatorSpec::inverse_gaussian(1.0, 0.0), std::domain_error);
}

TEST_CASE("bernstein derivatives agree with finite differences") {
    const double s = 1.7;
    const double h = 1e-5;
    for (const auto& spec :
         {SubordinatorSpec::gamma_process(4.0, 3.0), SubordinatorSpec::tempered_stable(0.6, 2.0),
          SubordinatorSpec::inverse_gaussian(1.5, 0.8)}) {
        const double fd1 = (bernstein(spec, s + h) - bernstein(spec, s - h)) / (2.0 * h);
        CHECK(bernstein_derivative(spec, 1, s) == doctest::Approx(fd1).epsilon(1e-8));
        const double fd2 = (bernstein_derivative(spec, 1, s + h) -
                            bernstein_derivative(spec, 1, s - h)) /
                           (2.0 * h);
        CHECK(bernstein_derivative(spec, 2, s) == doctest::Approx(fd2).epsilon(1e-8));
        // Log form agrees with the direct form while it is representable.
        for (int order = 1; order <= 6; ++order) {
            const auto sl = bernstein_derivative_log(spec, order, s);
            CHECK(sl.sign * std::exp(sl.log_abs) ==
                  doctest::Approx(bernstein_derivative(spec, order, s)).epsilon(1e-10));
        }
    }
    const auto drift = SubordinatorSpec::drift(2.0);
    CHECK(bernstein_derivative(drift, 1, s) == 2.0);
    CHECK(bernstein_derivative(drift, 2, s) == 0.0);
    CHECK(bernstein_derivative_log(drift, 3, s).sign == 0.0);
}

TEST_CASE("moment formulas") {
    CHECK(subordinator_mean(SubordinatorSpec::gamma_process(4.0, 3.0), 10.0) ==
          doctest::Approx(40.0 / 3.0));
    CHECK(subordinator_variance(SubordinatorSpec::gamma_process(4.0, 3.0), 10.0) ==
          doctest::Approx(40.0 / 9.0));
    CHECK(subordinator_mean(SubordinatorSpec::inverse_gaussian(1.0, 1.0), 10.0) ==
          doctest::Approx(10.0));
    CHECK(subordinator_variance(SubordinatorSpec::inverse_gaussian(1.0, 1.0), 10.0) ==
          doctest::Approx(10.0));
    CHECK(subordinator_mean(SubordinatorSpec::drift(2.0), 5.0) == doctest::Approx(10.0));
    CHECK(subordinator_variance(SubordinatorSpec::drift(2.0), 5.0) == 0.0);
    CHECK(subordinator_mean(SubordinatorSpec::tempered_stable(0.5, 2.0), 2.0) ==
          doctest::Approx(0.5 * std::pow(2.0, -0.5) * 2.0));
    CHECK_THROWS_AS(subordinator_mean(SubordinatorSpec::tempered_stable(0.5, 0.0), 1.0),
                    std::domain_error);
}

TEST_CASE("increment samplers hit their Laplace transforms" * doctest::timeout(120)) {
    const double dt = 0.1;
    std::uint64_t case_id = 0;
    for (const auto& spec :
         {SubordinatorSpec::gamma_process(4.0, 3.0), SubordinatorSpec::tempered_stable(0.5, 2.0),
          SubordinatorSpec::inverse_gaussian(1.0, 1.0)}) {
        for (double s : {0.5, 1.0, 2.0}) {
            Rng rng(RngStream{2025, 1}.child(case_id++));
            MomentAccumulator acc;
            for (int i = 0; i < 40000; ++i)
                acc.add(std::exp(-s * sample_increment(spec, dt, rng)));
            const double target = std::exp(-dt * bernstein(spec, s));
            CHECK(std::abs(acc.mean() - target) < 3.0 * acc.se_mean());
        }
    }
}

TEST_CASE("pure stable draws (tempering 0) satisfy the Laplace identity" * doctest::timeout(60)) {
    const auto stable = SubordinatorSpec::tempered_stable(0.5, 0.0);
    Rng rng(RngStream{2026, 0});
    for (double s : {0.5, 1.0, 2.0}) {
        MomentAccumulator acc;
        for (int i = 0; i < 30000; ++i)
            acc.add(std::exp(-s * sample_increment(stable, 1.0, rng)));
        CHECK(std::abs(acc.mean() - std::exp(-std::sqrt(s))) < 3.5 * acc.se_mean());
    }
}

TEST_CASE("gamma and inverse-gaussian sampler moments" * doctest::timeout(120)) {
    Rng rng(RngStream{2024, 2});
    MomentAccumulator gam;
    for (int i = 0; i < 60000; ++i)
        gam.add(sample_increment(SubordinatorSpec::gamma_process(4.0, 3.0), 1.0, rng));
    CHECK(std::abs(gam.mean() - 4.0 / 3.0) < 3.0 * gam.se_mean());

    MomentAccumulator ig;
    for (int i = 0; i < 60000; ++i)
        ig.add(sample_increment(SubordinatorSpec::inverse_gaussian(1.0, 1.0), 1.0, rng));
    CHECK(std::abs(ig.mean() - 1.0) < 3.0 * ig.se_mean());
    CHECK(std::abs(ig.variance() - 1.0) < 3.0 * ig.se_variance());
}

TEST_CASE("forward paths start at zero and never decrease") {
    Rng rng(RngStream{7, 3});
    const auto drift_path = simulate_path(SubordinatorSpec::drift(2.0), 1.0, 0.1, rng);
    REQUIRE(drift_path.values.size() == 11);
    for (std::size_t i = 0; i < drift_path.values.size(); ++i)
        CHECK(drift_path.values[i] == doctest::Approx(0.2 * static_cast<double>(i)).epsilon(1e-12));

    const auto gamma_path = simulate_path(SubordinatorSpec::gamma_process(4.0, 3.0), 2.0, 0.01, rng);
    CHECK(gamma_path.values.front() == 0.0);
    for (std::size_t i = 1; i < gamma_path.values.size(); ++i)
        CHECK(gamma_path.values[i] >= gamma_path.values[i - 1]);
}

TEST_CASE("grid inverse of a drift is the scaled identity") {
    Rng rng(RngStream{7, 4});
    const double h = 0.01;
    const auto inv = inverse_path(SubordinatorSpec::drift(2.0), 5.0, h, rng);
    for (std::size_t j = 0; j < inv.values.size(); ++j) {
        const double exact = inv.time_at(j) / 2.0;
        CHECK(inv.values[j] >= exact - 1e-12);
        CHECK(inv.values[j] <= exact + h + 1e-12);
    }
    // Round trip: inverse of the forward drift recovers the identity to one
    // grid step.
    const auto fwd = simulate_path(SubordinatorSpec::drift(2.0), 5.0, h, rng);
    for (std::size_t j = 0; j < inv.values.size(); ++j) {
        const double t = inv.time_at(j);
        const std::size_t fi = std::min<std::size_t>(
            static_cast<std::size_t>(inv.values[j] / h), fwd.values.size() - 1);
        CHECK(fwd.values[fi] >= t - 2.0 * 2.0 * h);
        CHECK(fwd.values[fi] <= t + 2.0 * 2.0 * h);
    }
}

TEST_CASE("first passage requires ascending levels and bounded grids") {
    Rng rng(RngStream{7, 5});
    CHECK_THROWS_AS(
        first_passage_times(SubordinatorSpec::drift(1.0), {2.0, 1.0}, 0.1, rng),
        std::invalid_argument);
    CHECK_THROWS_AS(
        first_passage_times(SubordinatorSpec::drift(1.0), {1e9}, 0.1, rng, 100),
        InversePathError);
}

TEST_CASE("densities: gamma exponential case, IG normalization, unsupported families") {
    const auto expo = SubordinatorSpec::gamma_process(1.0, 1.0);
    for (double x : {0.1, 0.5, 1.0, 3.0})
        CHECK(subordinator_density(expo, x, 1.0) ==
              doctest::Approx(std::exp(-x)).epsilon(1e-13));

    const auto ig = SubordinatorSpec::inverse_gaussian(1.0, 1.0);
    auto dens = [&](double x) { return subordinator_density(ig, x, 1.0); };
    CHECK(std::abs(integrate_positive_axis(dens, 1.0, 1e-10, {0.4}).value - 1.0) < 1e-8);

    CHECK_THROWS_AS(subordinator_density(SubordinatorSpec::tempered_stable(0.5, 1.0), 1.0, 1.0),
                    UnsupportedFamilyError);
    CHECK_THROWS_AS(subordinator_density(SubordinatorSpec::drift(1.0), 1.0, 1.0),
                    UnsupportedFamilyError);
}

TEST_CASE("IG moments through the half-integer Bessel sum") {
    CHECK(ig_moment(0, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ig_moment(1, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ig_moment(2, 1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    // General parameters: first and second moments from the closed forms.
    const double delta = 1.4;
    const double gamma = 0.9;
    const double t = 2.3;
    const double mean = delta * t / gamma;
    const double var = delta * t / (gamma * gamma * gamma);
    CHECK(ig_moment(1, t, delta, gamma) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(ig_moment(2, t, delta, gamma) == doctest::Approx(var + mean * mean).epsilon(1e-12));
    CHECK_THROWS_AS(ig_moment(-1, 1.0, 1.0, 1.0), std::domain_error);
}
