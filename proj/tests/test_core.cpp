#include "doctest.h"

#include <cmath>

#include "qkp/core.hpp"

using namespace qkp;

TEST_CASE("kappa_n point values") {
    CHECK(kappa_n(0, 0.25) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(kappa_n(3, 0.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(kappa_n(1, 0.01) == doctest::Approx(1.0049876).epsilon(1e-7));
}

TEST_CASE("kappa_n domain errors") {
    CHECK_THROWS_AS((void)kappa_n(0, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)kappa_n(0, -0.1), std::domain_error);
    CHECK_THROWS_AS((void)kappa_n(-1, 0.2), std::domain_error);
}

TEST_CASE("kappa_n squared gaps are exact integers and monotone") {
    for (double eta : {1e-6, 0.1, 0.25, 0.499}) {
        double prev = kappa_n(0, eta);
        for (int n = 1; n <= 100; ++n) {
            const double k = kappa_n(n, eta);
            CHECK(k * k - prev * prev == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(k > prev);
            prev = k;
        }
    }
    CHECK(kappa_n(5, 0.3) > kappa_n(5, 0.2));
}

TEST_CASE("mode_momentum branches") {
    const ModeMomentum a = mode_momentum(0, 1.5);
    CHECK(a.branch == ModeBranch::conducting);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-14));

    const ModeMomentum b = mode_momentum(2, 0.3);
    CHECK(b.branch == ModeBranch::evanescent);
    CHECK(b.value == doctest::Approx(std::sqrt(2.2)).epsilon(1e-14));

    const ModeMomentum c = mode_momentum(0, 0.5);  // threshold
    CHECK(c.branch == ModeBranch::conducting);
    CHECK(c.value == 0.0);
}

TEST_CASE("mode_momentum branch boundary is E >= n + 1/2") {
    for (int n = 0; n < 8; ++n) {
        CHECK(mode_momentum(n, n + 0.5).branch == ModeBranch::conducting);
        CHECK(mode_momentum(n, n + 0.5 - 1e-12).branch == ModeBranch::evanescent);
    }
}

TEST_CASE("coupling_element values and symmetry") {
    CHECK(coupling_element(0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(coupling_element(1, -1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(coupling_element(3, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    for (int n = 0; n <= 10000; n += 13)
        CHECK(coupling_element(n, 1) == coupling_element(n + 1, -1));
    CHECK_THROWS_AS((void)coupling_element(0, -1), std::domain_error);
    CHECK_THROWS_AS((void)coupling_element(2, 0), std::domain_error);
}

TEST_CASE("ModelParams stores both coupling conventions consistently") {
    const ModelParams a = ModelParams::from_scaled(0.97, 1.75);
    CHECK(a.lambda_raw == doctest::Approx(0.97 * std::sqrt(2.0)).epsilon(1e-15));
    const ModelParams b = ModelParams::from_raw(-1.0, 2.0);
    CHECK(b.lambda_scaled == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS((void)ModelParams::from_scaled(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)ModelParams::from_raw(1.0, -2.0), std::domain_error);
}

TEST_CASE("EnergyPoint keeps eta + energy = 1/2 exactly") {
    for (double eta : {1e-6, 0.123, 0.25, 0.4999}) {
        const EnergyPoint p = EnergyPoint::from_eta(eta);
        CHECK(p.eta + p.energy == 0.5);
    }
    const EnergyPoint q = EnergyPoint::from_energy(0.37);
    CHECK(q.eta == doctest::Approx(0.13).epsilon(1e-15));
}

TEST_CASE("require_subcritical") {
    CHECK_NOTHROW(require_subcritical(0.999));
    CHECK_THROWS_AS(require_subcritical(1.0), std::domain_error);
    CHECK_THROWS_AS(require_subcritical(0.0), std::domain_error);
    CHECK_THROWS_AS(require_subcritical(-0.5), std::domain_error);
}
