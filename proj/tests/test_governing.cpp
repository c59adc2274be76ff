#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orderk/governing.hpp"
#include "orderk/quadrature.hpp"
#include "orderk/subordinator.hpp"
#include "orderk/time_change.hpp"

using namespace orderk;

namespace {
const PoKParams kParams(2, 1.0);
const SubordinatorSpec kIg = SubordinatorSpec::inverse_gaussian(1.0, 1.0);
}  // namespace

TEST_CASE("first-order residual: exact case and step refinement") {
    // p_0(t) = e^{-k lambda t} has an exact derivative; the residual is
    // pure finite-difference truncation.
    CHECK(ppok_dde_residual(kParams, 0, 1.0, 1e-3) < 1e-5);
    CHECK(ppok_dde_residual(PoKParams(1, 1.0), 3, 1.0, 1e-3) < 1e-6);

    const double r1 = ppok_dde_residual(kParams, 3, 1.0, 1e-2);
    const double r2 = ppok_dde_residual(kParams, 3, 1.0, 5e-3);
    CHECK(r1 / r2 > 3.5);
    CHECK(r1 / r2 < 4.5);

    CHECK_THROWS_AS(ppok_dde_residual(kParams, 1, 1.0, 2.0), std::domain_error);
}

TEST_CASE("second-order residual: exact case and step refinement") {
    CHECK(ppok_dde2_residual(kParams, 0, 1.0, 1e-3) < 1e-4);
    const double r1 = ppok_dde2_residual(kParams, 2, 1.0, 1e-2);
    const double r2 = ppok_dde2_residual(kParams, 2, 1.0, 5e-3);
    CHECK(r1 / r2 > 3.5);
    CHECK(r1 / r2 < 4.5);
}

TEST_CASE("subordinated pmf: the m = 0 value is the Laplace exponent") {
    for (double t : {0.5, 1.0, 2.0}) {
        const double expected = std::exp(-t * bernstein(kIg, 2.0));
        CHECK(subordinated_ig_pmf(kParams, kIg, 0, t) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(subordinated_ig_pmf(kParams, kIg, -1, 1.0) == 0.0);
    CHECK_THROWS_AS(
        subordinated_ig_pmf(kParams, SubordinatorSpec::gamma_process(1.0, 1.0), 0, 1.0),
        UnsupportedFamilyError);
}

TEST_CASE("subordinated pmf routes agree across modules") {
    // The governing module integrates the whole conditional pmf; the
    // time-change module integrates per batch-count group. Independent
    // code paths, same integral.
    const TimeChangedSpec spec{kParams, kIg, TimeChangeMode::Direct};
    for (long long m = 0; m <= 6; ++m) {
        const double a = subordinated_ig_pmf(kParams, kIg, m, 1.0);
        const double b = tcppok1_pmf(spec, 1.0, m, PmfMethod::Quadrature).value;
        CHECK(a == doctest::Approx(b).epsilon(1e-8));
    }
}

TEST_CASE("direct-IG governing equation holds" * doctest::timeout(120)) {
    for (long long m : {0LL, 1LL, 3LL}) {
        CHECK(poisson_ig_orderk_dde_residual(kParams, kIg, m, 1.0, 5e-3) < 1e-3);
    }
    // k = 1 specialization: the time-changed Poisson process.
    CHECK(poisson_ig_orderk_dde_residual(PoKParams(1, 1.0), kIg, 2, 1.0, 5e-3) < 1e-3);
}

TEST_CASE("inverse-IG density: closed form behaves like a density") {
    // Boundary value at x = 0 comes from the same expression.
    CHECK(inverse_ig_density(0.0, 1.0, 1.0, 1.0) > 0.0);
    CHECK(inverse_ig_density(-0.5, 1.0, 1.0, 1.0) == 0.0);

    auto dens = [](double x) { return inverse_ig_density(x, 1.0, 1.0, 1.0); };
    CHECK(std::abs(integrate_positive_axis(dens, 1.0, 1e-9).value - 1.0) < 1e-6);

    // Large-x stability: no overflow, clean decay.
    CHECK(inverse_ig_density(80.0, 1.0, 1.0, 1.0) >= 0.0);
    CHECK(inverse_ig_density(80.0, 1.0, 1.0, 1.0) < 1e-100);
}

TEST_CASE("inverse-IG governing equation holds" * doctest::timeout(120)) {
    for (long long m : {0LL, 1LL, 2LL}) {
        CHECK(tcppok2_ig_dde_residual(kParams, kIg, m, 1.0, 5e-3) < 1e-3);
    }
}

TEST_CASE("residual study reports and orders") {
    const auto study = run_residual_study(GoverningEquation::PpokFirstOrder, kParams, kIg,
                                          {1, 3}, {0.7, 1.3}, {1e-2, 5e-3});
    CHECK(study.equation == "ppok-first-order");
    CHECK(study.samples.size() == 2 * 2 * 2);
    REQUIRE(study.observed_order);
    CHECK(*study.observed_order > 1.9);
    CHECK(*study.observed_order < 2.2);

    const auto single = run_residual_study(GoverningEquation::PpokSecondOrder, kParams, kIg,
                                           {2}, {1.0}, {1e-2});
    CHECK(!single.observed_order);
    CHECK(single.samples.size() == 1);
}
