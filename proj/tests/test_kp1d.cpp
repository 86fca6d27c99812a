#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "qkp/kp1d.hpp"

using namespace qkp;
using namespace qkp::kp1d;

TEST_CASE("s_matrix_1d with no scatterer is pure transmission") {
    const TwoPortScattering s = s_matrix_1d(Complex(1.0, 0.0), 0.0);
    CHECK(std::abs(s.s[0][0]) < 1e-15);
    CHECK(std::abs(s.s[1][1]) < 1e-15);
    CHECK(std::abs(s.s[0][1] - 1.0) < 1e-15);
    CHECK(std::abs(s.s[1][0] - 1.0) < 1e-15);
}

TEST_CASE("s_matrix_1d determinant identity") {
    const double k = 2.0, lambda = 1.0;
    const TwoPortScattering s = s_matrix_1d(Complex(k, 0.0), lambda);
    const Complex det = s.s[0][0] * s.s[1][1] - s.s[0][1] * s.s[1][0];
    const Complex il = Complex(0.0, lambda / (2.0 * k));
    const Complex expected = -(1.0 - il) / (1.0 + il);
    CHECK(std::abs(det - expected) < 1e-14);
}

TEST_CASE("s_matrix_1d singular inputs") {
    CHECK_THROWS_AS((void)s_matrix_1d(Complex(0.0, 0.0), 1.0), std::domain_error);
    // Pole of the attractive delta at kappa = |lambda|/2
    CHECK_THROWS_AS((void)s_matrix_1d(Complex(0.0, 0.5), -1.0), std::domain_error);
    CHECK_THROWS_AS((void)s_matrix_1d(Complex(1.0, 1.0), 1.0), std::domain_error);
}

TEST_CASE("s_matrix_1d is unitary and symmetric for real k") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> klog(std::log(0.01), std::log(100.0));
    std::uniform_real_distribution<double> lam(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double k = std::exp(klog(rng));
        const TwoPortScattering s = s_matrix_1d(Complex(k, 0.0), lam(rng));
        CHECK(s.unitarity_defect() < 1e-12);
        CHECK(std::abs(s.s[0][1] - s.s[1][0]) < 1e-14);
    }
}

TEST_CASE("flux conservation for random incoming amplitudes") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double k = 0.3 + 3.0 * (i + 1) / 50.0;
        const TwoPortScattering s = s_matrix_1d(Complex(k, 0.0), 2.0 * amp(rng));
        const Complex ap(amp(rng), amp(rng)), bm(amp(rng), amp(rng));
        const Complex am = s.s[0][0] * ap + s.s[0][1] * bm;
        const Complex bp = s.s[1][0] * ap + s.s[1][1] * bm;
        const double in = std::norm(ap) + std::norm(bm);
        const double out = std::norm(am) + std::norm(bp);
        CHECK(std::fabs(in - out) < 1e-12 * in);
    }
}

TEST_CASE("zeta_kp vanishes at the free Floquet condition") {
    const ModelParams p = ModelParams::from_raw(0.0, 2.0);
    for (double k : {0.7, 1.3, 2.9}) {
        const double omega = std::fmod(k * p.period, 2.0 * M_PI);
        const double w = omega > M_PI ? omega - 2.0 * M_PI : omega;
        CHECK(std::abs(zeta_kp(Complex(k, 0.0), w, p)) < 1e-12);
    }
}

TEST_CASE("zeta_kp on the imaginary axis matches the closed form") {
    const ModelParams p = ModelParams::from_raw(-1.0, 2.0);
    const Complex z = zeta_kp(Complex(0.0, 0.3), M_PI / 2, p);
    CHECK(std::fabs(z.imag()) < 1e-14);
    CHECK(z.real() == doctest::Approx(zeta_kappa(0.3, M_PI / 2, p)).epsilon(1e-12));

    for (double L : {2.0, 5.0, 8.0, 10.0}) {
        const ModelParams q = ModelParams::from_raw(-1.0, L);
        for (int i = 0; i < 50; ++i) {
            const double kap = 0.02 * std::pow(2.5 / 0.02, i / 49.0);
            if (std::fabs(kap - 0.5) < 0.03) continue;  // prefactor pole
            for (int j = 0; j < 8; ++j) {
                const double w = M_PI * j / 7.0;
                const double a = zeta_kp(Complex(0.0, kap), w, q).real();
                const double b = zeta_kappa(kap, w, q);
                CHECK(std::fabs(a - b) <= 1e-10 * std::max({1.0, std::fabs(a), std::fabs(b)}));
            }
        }
    }
}

TEST_CASE("zeta_kappa is even in omega and depends only on cos(omega)") {
    const ModelParams p = ModelParams::from_raw(-1.5, 3.0);
    for (double w : {0.2, 1.0, 2.8})
        for (double kap : {0.1, 0.4, 1.2}) {
            CHECK(zeta_kappa(kap, w, p) == zeta_kappa(kap, -w, p));
            // same cos up to the rounding of 2 pi
            CHECK(zeta_kappa(kap, w, p) ==
                  doctest::Approx(zeta_kappa(kap, 2.0 * M_PI - w, p)).epsilon(1e-13));
        }
}

TEST_CASE("zeta_kappa small-kappa slope") {
    // zeta -> -kappa (4/|l|) (1 - |l|L/2 - cos w) + O(kappa^2)
    const ModelParams p = ModelParams::from_raw(-1.0, 2.0);
    for (double w : {0.3, 1.1, 2.2}) {
        const double kap = 1e-8;
        const double slope = zeta_kappa(kap, w, p) / kap;
        const double expected = -4.0 * (1.0 - 1.0 * 2.0 / 2.0 - std::cos(w));
        CHECK(slope == doctest::Approx(expected).epsilon(1e-5));
    }
    // Band edge: the slope vanishes where cos w = 1 - |l|L/2, here w = pi/2.
    const double at_edge = zeta_kappa(1e-8, M_PI / 2, p) / 1e-8;
    CHECK(std::fabs(at_edge) < 1e-5);
}

TEST_CASE("second Floquet family centre pins kappa = |lambda|/2") {
    // At w_c = arccos(e^{-|l|L/2}) the bracket root coincides with the
    // prefactor pole: the bracket changes sign across kappa = 0.5.
    const ModelParams p = ModelParams::from_raw(-1.0, 2.0);
    const double wc = std::acos(std::exp(-1.0));
    auto bracket = [&](double kap) {
        const double x = kap * p.period;
        return std::cosh(x) - std::sinh(x) / (2.0 * kap) - std::cos(wc);
    };
    CHECK(bracket(0.5 - 1e-9) * bracket(0.5 + 1e-9) < 0.0);
    CHECK(std::fabs(bracket(0.5)) < 1e-12);
}

TEST_CASE("negative_bands_1d rejects repulsive coupling") {
    const ModelParams p = ModelParams::from_raw(1.0, 2.0);
    CHECK_THROWS_AS((void)negative_bands_1d(p, {0.0}, 1e-9), std::domain_error);
}

TEST_CASE("negative_bands_1d large-L root approaches the single-delta pole") {
    const ModelParams p = ModelParams::from_raw(-1.0, 10.0);
    const auto rows = negative_bands_1d(p, {M_PI / 2}, 1e-12);
    REQUIRE(rows.size() == 1);
    REQUIRE(!rows[0].roots.empty());
    const double root = rows[0].roots.back();

    // Independent oracle: at w = pi/2 the root solves tanh(kappa L) = 2 kappa.
    double lo = 0.3, hi = 0.49999999;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::tanh(mid * p.period) - 2.0 * mid > 0.0 ? lo : hi) = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    CHECK(root == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::fabs(root - 0.5) < 1e-4);  // still short of the L -> inf limit
}

TEST_CASE("negative_bands_1d returns empty where no root exists") {
    // Top green family: at w = pi, |l| = 1, L = 2 the secular function never
    // crosses the axis.
    const ModelParams p = ModelParams::from_raw(-1.0, 2.0);
    const auto rows = negative_bands_1d(p, {M_PI}, 1e-10);
    CHECK(rows[0].roots.empty());
}

TEST_CASE("a root exists at omega = 0 for L = 2") {
    const ModelParams p = ModelParams::from_raw(-1.0, 2.0);
    const auto rows = negative_bands_1d(p, {0.0}, 1e-10);
    REQUIRE(rows[0].roots.size() == 1);
    // independent check: cosh(kL) - sinh(kL)/(2k) = 1 at the root
    const double k = rows[0].roots[0];
    CHECK(std::cosh(2 * k) - std::sinh(2 * k) / (2 * k) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("band widths shrink monotonically with L") {
    // Width of the bound-state family (roots above kappa = 0.2) across omega.
    double prev_width = 1e9;
    for (double L : {2.0, 5.0, 8.0, 10.0}) {
        const ModelParams p = ModelParams::from_raw(-1.0, L);
        std::vector<double> omegas;
        for (int i = 0; i <= 20; ++i) omegas.push_back(M_PI * i / 20.0);
        const auto rows = negative_bands_1d(p, omegas, 1e-10);
        double lo = 1e9, hi = -1e9;
        for (const auto& row : rows)
            for (double r : row.roots)
                if (r > 0.2) {
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                }
        REQUIRE(hi > lo);
        CHECK(hi - lo < prev_width);
        prev_width = hi - lo;
    }
}
