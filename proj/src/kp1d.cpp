#include "qkp/kp1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkp::kp1d {

namespace {

bool on_axis(Complex k) {
    return k.imag() == 0.0 || k.real() == 0.0;
}

}  // namespace

double TwoPortScattering::unitarity_defect() const {
    double defect = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Complex e = (i == j) ? Complex(-1.0, 0.0) : Complex(0.0, 0.0);
            for (int m = 0; m < 2; ++m) e += std::conj(s[m][i]) * s[m][j];
            defect = std::max(defect, std::abs(e));
        }
    return defect;
}

TwoPortScattering s_matrix_1d(Complex k, double lambda) {
    if (k == Complex(0.0, 0.0)) throw std::domain_error("s_matrix_1d: k = 0");
    if (!on_axis(k))
        throw std::domain_error("s_matrix_1d: k must be real or pure imaginary");
    const Complex denom = 1.0 + Complex(0.0, 1.0) * lambda / (2.0 * k);
    if (std::abs(denom) < 1e-14)
        throw std::domain_error(
            "s_matrix_1d: k sits on the S-matrix pole kappa = |lambda|/2");
    const Complex u = 1.0 / denom;
    TwoPortScattering r;
    r.s[0][0] = u - 1.0;
    r.s[0][1] = u;
    r.s[1][0] = u;
    r.s[1][1] = u - 1.0;
    return r;
}

Complex zeta_kp(Complex k, double omega, const ModelParams& p) {
    const TwoPortScattering sm = s_matrix_1d(k, p.lambda_raw);
    const Complex phase = std::exp(Complex(0.0, 1.0) * k * p.period);
    const Complex ep = std::exp(Complex(0.0, omega));
    const Complex em = std::exp(Complex(0.0, -omega));
    // T = e^{ikL} * antidiag(e^{iw}, e^{-iw}) * S
    Complex t00 = phase * ep * sm.s[1][0];
    Complex t01 = phase * ep * sm.s[1][1];
    Complex t10 = phase * em * sm.s[0][0];
    Complex t11 = phase * em * sm.s[0][1];
    return (1.0 - t00) * (1.0 - t11) - t01 * t10;
}

double zeta_kappa(double kappa, double omega, const ModelParams& p) {
    if (!(p.lambda_raw < 0.0))
        throw std::domain_error("zeta_kappa: requires lambda < 0");
    if (!(kappa > 0.0)) throw std::domain_error("zeta_kappa: kappa must be > 0");
    const double al = -p.lambda_raw;  // |lambda|
    const double beta = al / (2.0 * kappa);
    if (std::fabs(1.0 - beta) < 1e-14)
        throw std::domain_error("zeta_kappa: kappa = |lambda|/2 is a pole");
    const double x = kappa * p.period;
    return 2.0 * std::exp(-x) / (1.0 - beta) *
           (std::cosh(x) - beta * std::sinh(x) - std::cos(omega));
}

std::vector<OmegaRoots> negative_bands_1d(const ModelParams& p,
                                          const std::vector<double>& omegas,
                                          double tol) {
    if (!(p.lambda_raw < 0.0))
        throw std::domain_error("negative_bands_1d: requires lambda < 0");
    const double al = -p.lambda_raw;
    const double pole = al / 2.0;
    const double lo = 1e-6, hi = std::max(5.0, al);

    // 2000 log-spaced brackets; Floquet roots accumulate towards kappa = 0.
    // Two extra points straddle the prefactor pole so that no bracket
    // contains it.
    std::vector<double> grid;
    grid.reserve(2002);
    const int n = 2000;
    for (int i = 0; i < n; ++i)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    if (pole > lo && pole < hi) {
        grid.push_back(pole * (1.0 - 1e-9));
        grid.push_back(pole * (1.0 + 1e-9));
        std::sort(grid.begin(), grid.end());
    }

    std::vector<OmegaRoots> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        OmegaRoots row;
        row.omega = w;
        auto f = [&](double kap) { return zeta_kappa(kap, w, p); };
        double prev = f(grid[0]);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double a = grid[i], b = grid[i + 1];
            if (a < pole && pole < b) {
                prev = f(b);
                continue;  // the excluded pole cell
            }
            const double fb = f(b);
            if (std::isfinite(prev) && std::isfinite(fb) && prev * fb < 0.0) {
                double x0 = a, x1 = b, fx0 = prev;
                for (int it = 0; it < 200 && (x1 - x0) > tol; ++it) {
                    const double m = 0.5 * (x0 + x1);
                    const double fm = f(m);
                    if ((fm < 0.0) == (fx0 < 0.0)) {
                        x0 = m;
                        fx0 = fm;
                    } else {
                        x1 = m;
                    }
                }
                const double root = 0.5 * (x0 + x1);
                // Sign changes from poles do not shrink in magnitude.
                if (std::fabs(f(root)) < std::min(std::fabs(prev), std::fabs(fb)))
                    row.roots.push_back(root);
            }
            prev = fb;
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace qkp::kp1d
