#include "qkp/wkb.hpp"

#include <cmath>
#include <stdexcept>

#include "qkp/channel_scatter.hpp"
#include "qkp/numerics.hpp"

namespace qkp::wkb {

double potential_single(double m, double eta, double Lambda) {
    return (2.0 / Lambda) * std::sqrt((m + 1.0 + eta) / (m + 1.5));
}

double local_kinetic(double m, double eta, double Lambda) {
    return 2.0 - potential_single(m, eta, Lambda);
}

double turning_point(double eta, double Lambda) {
    require_subcritical(Lambda);
    return (0.5 * Lambda * Lambda - eta) / (1.0 - Lambda * Lambda) - 1.0;
}

double eta_max(double Lambda) { return 1.5 * Lambda * Lambda - 1.0; }

double action(double m, double eta, double Lambda) {
    const double mt = turning_point(eta, Lambda);
    if (m == mt) return 0.0;
    // Substituting n = m_t + sign * u^2 turns the sqrt(|n - m_t|) behaviour of
    // |p| at the turning point into a smooth integrand.
    const double sign = m > mt ? 1.0 : -1.0;
    const double umax = std::sqrt(std::fabs(m - mt));
    auto g = [&](double u) {
        const double n = mt + sign * u * u;
        return 2.0 * u * std::sqrt(std::fabs(local_kinetic(n, eta, Lambda)));
    };
    return numerics::adaptive_quadrature(g, 0.0, umax, 1e-12);
}

double action_closed_form(double m, double eta, double Lambda) {
    require_subcritical(Lambda);
    const double a = 0.5 - eta;
    const double t = m + 1.5;
    const double absp = std::sqrt(std::fabs(local_kinetic(m, eta, Lambda)));
    const double c = a / std::sqrt(2.0 * Lambda);
    const double arg_minus = std::sqrt(Lambda) * absp / std::sqrt(2.0 * (1.0 - Lambda));
    const double arg_plus = std::sqrt(Lambda) * absp / std::sqrt(2.0 * (1.0 + Lambda));
    if (m >= turning_point(eta, Lambda))
        return absp * t - c * (std::atanh(arg_minus) / std::sqrt(1.0 - Lambda) +
                               std::atan(arg_plus) / std::sqrt(1.0 + Lambda));
    return -absp * t + c * (std::atan(arg_minus) / std::sqrt(1.0 - Lambda) +
                            std::atanh(arg_plus) / std::sqrt(1.0 + Lambda));
}

double sigma_variable(double m, double eta, double Lambda) {
    const double mt = turning_point(eta, Lambda);
    const double s = action_closed_form(m, eta, Lambda);
    const double sgn = m > mt ? 1.0 : (m < mt ? -1.0 : 0.0);
    return sgn * std::pow(1.5 * std::fabs(s), 2.0 / 3.0);
}

namespace {

double potential_slope(double m, double eta, double Lambda) {
    // dV/dm = (1/Lambda) (1/2 - eta) / ((m+3/2)^2 sqrt((m+1+eta)/(m+3/2)))
    const double t = m + 1.5;
    return (1.0 / Lambda) * (0.5 - eta) / (t * t * std::sqrt((m + 1.0 + eta) / t));
}

double airy_envelope(double m, double eta, double Lambda, bool growing) {
    const double mt = turning_point(eta, Lambda);
    const double sigma = sigma_variable(m, eta, Lambda);
    const double well = potential_single(m, eta, Lambda) - 2.0;
    double amp;
    if (std::fabs(sigma) < 1e-8 || std::fabs(well) < 1e-12) {
        // sigma and V-2 vanish linearly with the same slope ratio V'^{-2/3}
        amp = std::pow(potential_slope(mt, eta, Lambda), -1.0 / 6.0);
    } else {
        amp = std::pow(sigma / well, 0.25);
    }
    return amp * (growing ? numerics::airy_bi(sigma) : numerics::airy_ai(sigma));
}

}  // namespace

double q_uniform(double m, double eta, double Lambda) {
    if (m < 0.0) throw std::domain_error("q_uniform: m must be >= 0");
    return airy_envelope(m, eta, Lambda, /*growing=*/true);
}

WkbSecular zeta_wkb(double eta, double Lambda, int m0) {
    require_subcritical(Lambda);
    if (m0 < 0) throw std::domain_error("zeta_wkb: m0 must be >= 0");
    WkbSecular r;
    const double mt = turning_point(eta, Lambda);
    r.valid = mt > m0 + 2.0;
    if (!r.valid) return r;
    const channel::MinorSequence minors =
        channel::minor_determinants(eta, Lambda, m0 + 1);
    const double exact_ratio = ratio(minors.d(m0 + 1), minors.d(m0));
    const double q0 = airy_envelope(m0, eta, Lambda, /*growing=*/false);
    const double q1 = airy_envelope(m0 + 1, eta, Lambda, /*growing=*/false);
    r.value = q1 / q0 -
              exact_ratio * (1.0 / Lambda) * std::sqrt((m0 + 1.0 + eta) / (m0 + 1.5));
    return r;
}

std::vector<double> wkb_spectrum(double Lambda, int m0, double tol, double eta_min) {
    require_subcritical(Lambda);
    // Valid regime: m_t(eta) > m0 + 2, i.e. eta below this bound.
    const double eta_valid =
        0.5 * Lambda * Lambda - (m0 + 3.0) * (1.0 - Lambda * Lambda);
    const double hi = std::min(eta_valid - 1e-9, 0.5 - eta_min);
    std::vector<double> roots;
    if (hi <= eta_min) return roots;

    auto f = [&](double eta) { return zeta_wkb(eta, Lambda, m0).value; };
    const int n = 3000;
    double prev_eta = eta_min, prev = f(prev_eta);
    for (int i = 1; i < n; ++i) {
        const double eta = eta_min + (hi - eta_min) * i / (n - 1.0);
        const double v = f(eta);
        if (std::isfinite(prev) && std::isfinite(v) && prev * v < 0.0) {
            double lo = prev_eta, hival = eta, flo = prev;
            for (int it = 0; it < 200 && (hival - lo) > tol; ++it) {
                const double mid = 0.5 * (lo + hival);
                const double fm = f(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hival = mid;
                }
            }
            const double root = 0.5 * (lo + hival);
            if (std::fabs(f(root)) < std::min(std::fabs(prev), std::fabs(v)))
                roots.push_back(root);
        }
        prev_eta = eta;
        prev = v;
    }
    return roots;
}

int count_estimate(double Lambda) {
    if (!(Lambda > std::sqrt(2.0 / 3.0) && Lambda < 1.0))
        throw std::domain_error("count_estimate: requires sqrt(2/3) < Lambda < 1");
    return static_cast<int>(
        std::floor(1.0 / ((1.0 - Lambda) * 2.0 * std::sqrt(2.0 * Lambda))));
}

double potential_periodic(double m, double eta, double omega,
                          const ModelParams& p) {
    const double x = p.period * std::sqrt(m + 1.0 + eta);
    const double s2 = std::sin(0.5 * omega) * std::sin(0.5 * omega);
    const double bracket =
        std::tanh(0.5 * x) + (x > 350.0 ? 0.0 : 2.0 * s2 / std::sinh(x));
    return bracket * potential_single(m, eta, p.lambda_scaled);
}

SmallLValue potential_small_l(double m, double omega, const ModelParams& p,
                              double eta) {
    SmallLValue r;
    const double s2 = std::sin(0.5 * omega) * std::sin(0.5 * omega);
    r.value = (2.0 / (p.period * p.lambda_scaled)) * 2.0 * s2 / std::sqrt(m + 1.5);
    r.in_domain = p.period * std::sqrt(m + 1.0 + eta) < 1.0;
    return r;
}

double small_l_turning_point(double omega, const ModelParams& p) {
    const double s2 = std::sin(0.5 * omega) * std::sin(0.5 * omega);
    return 2.0 * s2 / (p.lambda_scaled * p.period) - 1.5;
}

TurningShift turning_shift_bound(double eta, double omega, const ModelParams& p) {
    TurningShift r;
    const double Lambda = p.lambda_scaled;
    require_subcritical(Lambda);
    r.m_t = turning_point(eta, Lambda);
    r.valid = p.period > 1.0 && omega < 0.5 * M_PI && eta < eta_max(Lambda);
    const double s2 = std::sin(0.5 * omega) * std::sin(0.5 * omega);
    const double scale = (0.5 * Lambda * Lambda - eta) / (1.0 - Lambda * Lambda);
    r.bound = (2.0 / 3.0) * scale * scale *
              std::exp(-p.period * std::sqrt(1.0 + r.m_t)) * (1.0 - 2.0 * s2);
    return r;
}

}  // namespace qkp::wkb
