#include "qkp/channel_scatter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkp/wkb.hpp"

namespace qkp::channel {

double jacobi_off_diag(int m, double eta, double Lambda) {
    const double kk = kappa_n(m, eta) * kappa_n(m + 1, eta);
    return Lambda * std::sqrt((m + 1.0) / kk);
}

JacobiCoefficients jacobi_coefficients(double eta, double Lambda, int n_max) {
    if (n_max < 1) throw std::domain_error("jacobi_coefficients: n_max must be >= 1");
    if (!(Lambda >= 0.0)) throw std::domain_error("jacobi_coefficients: Lambda < 0");
    JacobiCoefficients jc;
    jc.eta = eta;
    jc.lambda_scaled = Lambda;
    jc.off_diag.reserve(n_max);
    for (int m = 0; m < n_max; ++m) jc.off_diag.push_back(jacobi_off_diag(m, eta, Lambda));
    return jc;
}

MinorSequence minor_determinants(double eta, double Lambda, int n_max) {
    if (n_max < 0) throw std::domain_error("minor_determinants: n_max must be >= 0");
    MinorSequence seq;
    seq.values.reserve(n_max + 2);
    seq.values.push_back(ScaledValue::from_double(1.0));  // D_{-1}
    seq.values.push_back(ScaledValue::from_double(2.0));  // D_0
    for (int m = 0; m < n_max; ++m) {
        const double a = Lambda * Lambda * (m + 1.0) /
                         std::sqrt((m + eta) * (m + 1.0 + eta));
        const ScaledValue next =
            seq.values[m + 1] * 2.0 - seq.values[m] * a;
        seq.values.push_back(next);
    }
    return seq;
}

std::pair<double, double> xi_roots(double Lambda) {
    if (!(Lambda > 0.0 && Lambda <= 1.0))
        throw std::domain_error("xi_roots: requires 0 < Lambda <= 1");
    const double s = std::sqrt(1.0 - Lambda * Lambda);
    return {1.0 + s, 1.0 - s};
}

ScaledValue chebyshev_reference(double Lambda, int dim) {
    if (dim < 1) throw std::domain_error("chebyshev_reference: dim must be >= 1");
    const double a = Lambda * Lambda;
    ScaledValue tm1 = ScaledValue::from_double(1.0);  // 0-dim determinant
    ScaledValue t = ScaledValue::from_double(2.0);
    for (int k = 2; k <= dim; ++k) {
        const ScaledValue next = t * 2.0 - tm1 * a;
        tm1 = t;
        t = next;
    }
    return t;
}

int default_m_start(double eta, double Lambda) {
    const double mt = wkb::turning_point(eta, Lambda);
    double depth = std::max(200.0, 10.0 * std::max(mt, 0.0));
    depth = std::max(depth, std::ceil(20.0 / (1.0 - Lambda)));
    return static_cast<int>(std::min(depth, 1e5));
}

BackwardSweep backward_ratio_sweep(double eta, double Lambda, int m_start,
                                   double seed) {
    if (m_start < 2) throw std::domain_error("backward_ratio_sweep: m_start < 2");
    BackwardSweep sweep;
    sweep.ratios.assign(m_start, 0.0);
    sweep.ratios[m_start - 1] = seed;
    double g = seed;
    for (int m = m_start - 1; m >= 1; --m) {
        const double a = Lambda * Lambda * (m + 1.0) /
                         std::sqrt((m + eta) * (m + 1.0 + eta));
        double denom = 2.0 - g;
        if (std::fabs(denom) < 1e-30) {
            ++sweep.pole_crossings;
            denom = std::copysign(1e-30, denom == 0.0 ? 1.0 : denom);
        }
        g = a / denom;
        sweep.ratios[m - 1] = g;
    }
    return sweep;
}

BackwardResult g_backward(double eta, double Lambda, int m_start) {
    require_subcritical(Lambda);
    if (m_start <= 0) m_start = default_m_start(eta, Lambda);
    const double seed = xi_roots(Lambda).first;
    const BackwardSweep sweep = backward_ratio_sweep(eta, Lambda, m_start, seed);
    return {sweep.g(1), sweep.pole_crossings};
}

SecularValue zeta_single_info(double eta, double Lambda, int m_start) {
    const BackwardResult back = g_backward(eta, Lambda, m_start);
    const double k0k1 = std::sqrt(eta * (1.0 + eta));
    const double g1_init = 0.5 * (4.0 - Lambda * Lambda / k0k1);
    return {back.g1 - g1_init, back.pole_crossings};
}

double zeta_single(double eta, double Lambda) {
    return zeta_single_info(eta, Lambda).value;
}

std::vector<double> point_spectrum(double Lambda, double eta_min, double eta_max,
                                   double tol) {
    require_subcritical(Lambda);
    if (!(eta_min > 0.0 && eta_max > eta_min && eta_max < 0.5))
        throw std::domain_error("point_spectrum: bad eta interval");

    const int n = 4000;
    std::vector<double> roots;
    auto f = [&](double eta) { return zeta_single(eta, Lambda); };
    double prev_eta = eta_min;
    double prev = f(prev_eta);
    for (int i = 1; i < n; ++i) {
        const double eta = eta_min + (eta_max - eta_min) * i / (n - 1.0);
        const double v = f(eta);
        if (std::isfinite(prev) && std::isfinite(v) && prev * v < 0.0) {
            double lo = prev_eta, hi = eta, flo = prev;
            for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            if (std::fabs(f(root)) < std::min(std::fabs(prev), std::fabs(v)))
                roots.push_back(root);
        }
        prev_eta = eta;
        prev = v;
    }
    return roots;
}

double ChannelScattering::flux_defect() const {
    const int m = static_cast<int>(s.rows()) / 2;
    double worst = 0.0;
    for (int side = 0; side < 2; ++side)
        for (int j = 0; j < open_modes; ++j) {
            const int col = side * m + j;
            double flux = 0.0;
            for (int i = 0; i < open_modes; ++i)
                flux += std::norm(s(i, col)) + std::norm(s(m + i, col));
            worst = std::max(worst, std::fabs(flux - 1.0));
        }
    return worst;
}

Eigen::MatrixXcd channel_j0(double energy, double Lambda, int truncation) {
    if (truncation < 2) throw std::domain_error("channel_j0: truncation < 2");
    const int m = truncation;
    std::vector<ModeMomentum> modes;
    modes.reserve(m);
    for (int n = 0; n < m; ++n) {
        ModeMomentum mm = mode_momentum(n, energy);
        if (mm.value < 1e-12)
            throw std::domain_error("channel_j0: mode " + std::to_string(n) +
                                    " sits at its threshold");
        modes.push_back(mm);
    }

    using C = std::complex<double>;
    Eigen::MatrixXcd j0 = Eigen::MatrixXcd::Zero(m, m);
    for (int n = 0; n < m; ++n) {
        const C pref = modes[n].branch == ModeBranch::conducting ? C(0.0, 1.0)
                                                                 : C(1.0, 0.0);
        if (n + 1 < m)
            j0(n, n + 1) = pref * Lambda *
                           std::sqrt((n + 1.0) / (modes[n].value * modes[n + 1].value));
        if (n - 1 >= 0)
            j0(n, n - 1) = pref * Lambda *
                           std::sqrt(static_cast<double>(n) /
                                     (modes[n].value * modes[n - 1].value));
    }
    return j0;
}

ChannelScattering s_matrix_channel(double energy, double Lambda, int truncation) {
    if (!(energy > 0.5))
        throw std::domain_error("s_matrix_channel: needs at least one conducting mode");

    const int m = truncation;
    const Eigen::MatrixXcd j0 = channel_j0(energy, Lambda, truncation);
    int open = 0;
    for (int n = 0; n < m; ++n)
        if (mode_momentum(n, energy).branch == ModeBranch::conducting) ++open;
    if (open >= m)
        throw std::domain_error(
            "s_matrix_channel: truncation must exceed the open-mode count");

    Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(m, m) + 0.5 * j0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
    Eigen::MatrixXcd a = lu.solve(Eigen::MatrixXcd::Identity(m, m));

    const double cond = lhs.cwiseAbs().rowwise().sum().maxCoeff() *
                        a.cwiseAbs().rowwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > 1e14)
        throw std::runtime_error("s_matrix_channel: I + J0/2 numerically singular, "
                                 "condition estimate " + std::to_string(cond));

    ChannelScattering result;
    result.condition_estimate = cond;
    result.open_modes = open;
    result.s = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    result.s.block(0, 0, m, m) = a - Eigen::MatrixXcd::Identity(m, m);
    result.s.block(0, m, m, m) = a;
    result.s.block(m, 0, m, m) = a;
    result.s.block(m, m, m, m) = a - Eigen::MatrixXcd::Identity(m, m);
    return result;
}

}  // namespace qkp::channel
