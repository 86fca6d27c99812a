#include "doctest.h"

#include <cmath>
#include <random>

#include "qkp/channel_scatter.hpp"
#include "qkp/numerics.hpp"
#include "qkp/wkb.hpp"

using namespace qkp;
using namespace qkp::channel;

namespace {

// Dense (2I + J0) truncation of dimension n+1 in the evanescent regime.
Eigen::MatrixXd dense_jacobi(double eta, double Lambda, int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        m(i, i) = 2.0;
        if (i < n) m(i, i + 1) = m(i + 1, i) = jacobi_off_diag(i, eta, Lambda);
    }
    return m;
}

// Independent count of spectral points: negative eigenvalues of the
// truncated 2I + J0 at the lower eta clamp (each eigenvalue branch is
// increasing in eta and ends positive at eta = 1/2).
int sturm_count(double Lambda, double eta, int n) {
    std::vector<double> diag(n, 2.0), off(n - 1);
    for (int i = 0; i + 1 < n; ++i) off[i] = jacobi_off_diag(i, eta, Lambda);
    return numerics::tridiagonal_negative_count(diag, off);
}

}  // namespace

TEST_CASE("jacobi_coefficients point value and zero coupling") {
    // c_0 = 0.5 sqrt(1/(kappa_0 kappa_1)) at eta = 0.25
    const double c0 = jacobi_off_diag(0, 0.25, 0.5);
    CHECK(c0 == doctest::Approx(0.5 * std::sqrt(1.0 / (0.5 * std::sqrt(1.25))))
                    .epsilon(1e-14));
    CHECK(c0 == doctest::Approx(0.66874).epsilon(1e-5));

    const JacobiCoefficients jc = jacobi_coefficients(0.3, 0.0, 10);
    for (double c : jc.off_diag) CHECK(c == 0.0);
}

TEST_CASE("jacobi coefficient ratio approaches the asymptotic estimate") {
    // c_m^2 = Lambda^2 (m+1)/(kappa_{m+1} kappa_m) = Lambda^2 (1 + (1/2-eta)/(m+1) + O(m^-2))
    const double eta = 0.2, Lambda = 0.8;
    for (int m : {100, 1000, 10000}) {
        const double c2 = std::pow(jacobi_off_diag(m, eta, Lambda), 2);
        const double est = Lambda * Lambda * (1.0 + (0.5 - eta) / (m + 1.0));
        CHECK(std::fabs(c2 - est) < 4.0 * Lambda * Lambda / ((m + 1.0) * (m + 1.0)));
    }
    // monotone decrease of c_m/Lambda towards 1 from above
    double prev = jacobi_off_diag(1, eta, Lambda) / Lambda;
    for (int m = 2; m < 200; ++m) {
        const double cur = jacobi_off_diag(m, eta, Lambda) / Lambda;
        CHECK(cur < prev);
        CHECK(cur > 1.0);
        prev = cur;
    }
}

TEST_CASE("minor_determinants with zero coupling gives powers of two") {
    const MinorSequence seq = minor_determinants(0.25, 0.0, 20);
    for (int m = 0; m <= 20; ++m)
        CHECK(seq.d(m).log_abs() ==
              doctest::Approx((m + 1) * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("minor_determinants match the dense determinant oracle") {
    for (double eta : {0.05, 0.15, 0.25, 0.35, 0.45})
        for (double Lambda : {0.3, 0.5, 0.7, 0.9, 0.99}) {
            const MinorSequence seq = minor_determinants(eta, Lambda, 12);
            for (int n = 0; n <= 12; ++n) {
                const ScaledValue dense =
                    numerics::dense_determinant(dense_jacobi(eta, Lambda, n));
                const double rel =
                    std::fabs(ratio(seq.d(n) - dense, dense));
                CAPTURE(eta);
                CAPTURE(Lambda);
                CAPTURE(n);
                CHECK(rel < 1e-10);
            }
        }
}

TEST_CASE("minor growth rate approaches xi_plus") {
    // D_{m+1}/D_m -> xi_+ and log(D_m)/m -> log xi_+
    const double Lambda = 0.9, eta = 0.4;
    const auto [xp, xm] = xi_roots(Lambda);
    const MinorSequence seq = minor_determinants(eta, Lambda, 500);
    const double ratio_tail = ratio(seq.d(500), seq.d(499));
    CHECK(ratio_tail == doctest::Approx(xp).epsilon(1e-3));
    CHECK(std::fabs(seq.d(500).log_abs() / 500.0 - std::log(xp)) < 1e-3);
}

TEST_CASE("xi_roots") {
    const auto [xp, xm] = xi_roots(0.6);
    CHECK(xp == doctest::Approx(1.8).epsilon(1e-14));
    CHECK(xm == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(xp * xm == doctest::Approx(0.36).epsilon(1e-13));
    CHECK(xp + xm == doctest::Approx(2.0).epsilon(1e-14));

    const auto crit = xi_roots(1.0);
    CHECK(crit.first == 1.0);
    CHECK(crit.second == 1.0);
    CHECK_THROWS_AS((void)xi_roots(1.01), std::domain_error);
}

TEST_CASE("chebyshev_reference small dimensions") {
    CHECK(chebyshev_reference(0.5, 1).to_double() == doctest::Approx(2.0));
    CHECK(chebyshev_reference(0.5, 2).to_double() == doctest::Approx(3.75));
    CHECK(chebyshev_reference(0.5, 3).to_double() == doctest::Approx(7.0));
}

TEST_CASE("chebyshev_reference equals Lambda^d U_d(1/Lambda)") {
    for (double Lambda : {0.5, 0.9, 0.99})
        for (int d = 1; d <= 50; ++d) {
            const double expected =
                std::pow(Lambda, d) * numerics::chebyshev_u(d, 1.0 / Lambda);
            const double got = chebyshev_reference(Lambda, d).to_double();
            CAPTURE(Lambda);
            CAPTURE(d);
            CHECK(std::fabs(got - expected) < 1e-10 * std::fabs(expected));
        }
}

TEST_CASE("g_backward collapses with the coupling and seeds at xi_plus") {
    CHECK(g_backward(0.25, 1e-8).g1 < 1e-10);  // tiny Lambda
    CHECK(xi_roots(0.97).first == doctest::Approx(1.24310).epsilon(1e-5));
}

TEST_CASE("backward sweep inverts the forward recursion at moderate depth") {
    // Seeding with the forward ratio at m_start = 30 must reproduce every
    // forward ratio on the way down: the backward step is the exact inverse.
    // Depth is capped because seed perturbations amplify by (xi+/xi-) per
    // step while tracking the dominant solution.
    const double eta = 0.31, Lambda = 0.97;
    const MinorSequence seq = minor_determinants(eta, Lambda, 30);
    const double seed = ratio(seq.d(30), seq.d(29));
    const BackwardSweep sweep = backward_ratio_sweep(eta, Lambda, 30, seed);
    for (int m = 1; m <= 30; ++m) {
        const double fwd = ratio(seq.d(m), seq.d(m - 1));
        if (std::fabs(fwd) < 1e-3) continue;  // near a zero of D_{m-1}
        CHECK(std::fabs(sweep.g(m) - fwd) < 1e-8 * std::fabs(fwd));
    }
}

TEST_CASE("at a spectral point the backward ratios follow the forward minors") {
    const double Lambda = 0.97;
    const auto roots = point_spectrum(Lambda);
    REQUIRE(!roots.empty());
    const double eta = roots.front();
    const MinorSequence seq = minor_determinants(eta, Lambda, 15);
    const BackwardSweep sweep =
        backward_ratio_sweep(eta, Lambda, default_m_start(eta, Lambda),
                             xi_roots(Lambda).first);
    for (int m = 1; m <= 15; ++m) {
        const double fwd = ratio(seq.d(m), seq.d(m - 1));
        CHECK(std::fabs(sweep.g(m) - fwd) < 1e-6 * std::fabs(fwd));
    }
}

TEST_CASE("far below critical only a near-threshold zero survives") {
    // Weak coupling binds a single state exponentially close to eta = 0
    // (c_0 ~ Lambda/eta^{1/4} always diverges); away from threshold the
    // secular function keeps one sign.
    const double Lambda = 0.1;
    double prev = zeta_single(1e-4, Lambda);
    for (int i = 1; i <= 400; ++i) {
        const double eta = 1e-4 + (0.4999 - 1e-4) * i / 400.0;
        const double v = zeta_single(eta, Lambda);
        CHECK(prev * v > 0.0);
        prev = v;
    }
    const auto roots = point_spectrum(Lambda);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] < 1e-4);
}

TEST_CASE("zeta_single sign flips bracket the regularized determinant flips") {
    // The regularized determinant D_n / (Lambda^{n+1} U_{n+1}(1/Lambda))
    // changes sign exactly where zeta_I does.
    const double Lambda = 0.97;
    const auto roots = point_spectrum(Lambda);
    REQUIRE(roots.size() == 1);
    const double eta_root = roots[0];
    const int n = 2000;
    auto regularized_sign = [&](double eta) {
        const MinorSequence seq = minor_determinants(eta, Lambda, n);
        return seq.d(n).sign() * chebyshev_reference(Lambda, n + 1).sign();
    };
    CHECK(regularized_sign(eta_root - 1e-3) != regularized_sign(eta_root + 1e-3));
    CHECK(zeta_single(eta_root - 1e-3, Lambda) * zeta_single(eta_root + 1e-3, Lambda) < 0.0);
}

TEST_CASE("point_spectrum counts match the dense Sturm oracle") {
    for (double Lambda : {0.9, 0.97, 0.99, 0.999}) {
        CAPTURE(Lambda);
        const auto roots = point_spectrum(Lambda);
        CHECK(static_cast<int>(roots.size()) ==
              sturm_count(Lambda, kEtaMinDefault, 6000));
        for (double r : roots) {
            CHECK(r > 0.0);
            CHECK(r < wkb::eta_max(Lambda));
        }
    }
}

TEST_CASE("point_spectrum far subcritical is near-empty") {
    // No WKB well exists for Lambda < sqrt(2/3); only the near-threshold
    // state remains and the Sturm oracle agrees.
    const auto roots = point_spectrum(0.5);
    REQUIRE(static_cast<int>(roots.size()) == sturm_count(0.5, kEtaMinDefault, 6000));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] < 0.01);
}

TEST_CASE("point_spectrum root agrees with a dense-matrix bisection") {
    const double Lambda = 0.97;
    const auto roots = point_spectrum(Lambda, kEtaMinDefault, 0.5 - kEtaMinDefault,
                                      1e-12);
    REQUIRE(roots.size() == 1);
    // Bisect the lowest eigenvalue branch of the truncated 2I + J0.
    double lo = 1e-4, hi = 0.4;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sturm_count(Lambda, mid, 4000) > 0 ? lo : hi) = mid;
    }
    CHECK(roots[0] == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-7));
}

TEST_CASE("s_matrix_channel with zero coupling transmits every mode") {
    const ChannelScattering s = s_matrix_channel(1.7, 0.0, 8);
    const int m = 8;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            CHECK(std::abs(s.s(i, j)) < 1e-14);  // no reflection
            CHECK(std::abs(s.s(i, m + j) - (i == j ? 1.0 : 0.0)) < 1e-14);
            CHECK(std::abs(s.s(m + i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);
        }
}

TEST_CASE("s_matrix_channel flux defect shrinks with truncation") {
    const ChannelScattering s40 = s_matrix_channel(2.7, 0.5, 40);
    CHECK(s40.open_modes == 3);
    CHECK(s40.flux_defect() < 1e-6);
    const ChannelScattering s12 = s_matrix_channel(2.7, 0.5, 12);
    CHECK(s40.flux_defect() < s12.flux_defect());
}

TEST_CASE("s_matrix_channel block structure") {
    const ChannelScattering s = s_matrix_channel(1.7, 0.4, 10);
    const int m = 10;
    // S + I = [[A,A],[A,A]]
    Eigen::MatrixXcd a = s.s.block(0, m, m, m);
    CHECK((s.s.block(0, 0, m, m) + Eigen::MatrixXcd::Identity(m, m) - a).norm() <
          1e-12);
    CHECK((s.s.block(m, 0, m, m) - a).norm() < 1e-12);
    CHECK((s.s.block(m, m, m, m) + Eigen::MatrixXcd::Identity(m, m) - a).norm() <
          1e-12);
}

TEST_CASE("channel_j0 is real symmetric in the fully evanescent regime") {
    // Below threshold every row prefactor i|k_n|/k_n collapses to 1 and the
    // entries reduce to the real Jacobi coefficients at eta = 1/2 - E.
    const double energy = 0.25, Lambda = 0.8, eta = 0.5 - energy;
    const auto j0 = channel_j0(energy, Lambda, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            CHECK(j0(i, j).imag() == 0.0);
            CHECK(j0(i, j) == j0(j, i));
        }
    for (int mIdx = 0; mIdx + 1 < 12; ++mIdx)
        CHECK(j0(mIdx, mIdx + 1).real() ==
              doctest::Approx(jacobi_off_diag(mIdx, eta, Lambda)).epsilon(1e-14));

    // Mixed regime: conducting rows are purely imaginary.
    const auto mixed = channel_j0(2.7, Lambda, 12);
    for (int n = 0; n <= 2; ++n) {
        if (n + 1 < 12) CHECK(mixed(n, n + 1).real() == 0.0);
        if (n >= 1) CHECK(mixed(n, n - 1).real() == 0.0);
    }
    for (int n = 4; n < 12; ++n) CHECK(mixed(n, n - 1).imag() == 0.0);
}

TEST_CASE("s_matrix_channel input validation") {
    CHECK_THROWS_AS((void)s_matrix_channel(0.4, 0.5, 10), std::domain_error);
    CHECK_THROWS_AS((void)s_matrix_channel(1.7, 0.5, 1), std::domain_error);
    // mode 1 sits exactly at its threshold, k_1 = 0
    CHECK_THROWS_AS((void)s_matrix_channel(1.5, 0.5, 10), std::domain_error);
}
