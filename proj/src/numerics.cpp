#include "qkp/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace qkp::numerics {

namespace {

// Ai(0) and -Ai'(0).
constexpr long double kC1 = 0.35502805388781723926L;  // 3^{-2/3} / Gamma(2/3)
constexpr long double kC2 = 0.25881940379280679841L;  // 3^{-1/3} / Gamma(1/3)
constexpr double kSeriesRadius = 6.7;
constexpr double kSqrtPi = 1.7724538509055160273;

struct AiryPair {
    double ai, bi, aip, bip;
};

// Ai = c1 f - c2 g, Bi = sqrt(3) (c1 f + c2 g) with
//   f = sum 3^k (1/3)_k x^{3k}/(3k)!      (term ratio x^3 / (3k(3k-1)))
//   g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!  (term ratio x^3 / (3k(3k+1)))
// Accumulated in long double: at |x| = 6.7 the alternating sums lose
// ~e^{2 zeta} of cancellation, which double precision cannot absorb.
AiryPair airy_series(double x) {
    const long double x3 = static_cast<long double>(x) * x * x;
    long double f = 1.0L, g = static_cast<long double>(x);
    long double fp = 0.0L, gp = 1.0L;  // derivatives
    long double tf = 1.0L, tg = g;
    for (int k = 1; k < 200; ++k) {
        tf *= x3 / (3.0L * k * (3.0L * k - 1.0L));
        tg *= x3 / (3.0L * k * (3.0L * k + 1.0L));
        f += tf;
        g += tg;
        if (x != 0.0) {
            fp += tf * (3.0L * k) / x;
            gp += tg * (3.0L * k + 1.0L) / x;
        }
        if (std::fabs(static_cast<double>(tf)) < 1e-20 * std::fabs(static_cast<double>(f)) &&
            std::fabs(static_cast<double>(tg)) < 1e-20 * (std::fabs(static_cast<double>(g)) + 1e-30))
            break;
    }
    const long double s3 = 1.7320508075688772935L;
    AiryPair r;
    r.ai = static_cast<double>(kC1 * f - kC2 * g);
    r.bi = static_cast<double>(s3 * (kC1 * f + kC2 * g));
    r.aip = static_cast<double>(kC1 * fp - kC2 * gp);
    r.bip = static_cast<double>(s3 * (kC1 * fp + kC2 * gp));
    return r;
}

// u_k = Gamma(3k+1/2)/(54^k k! Gamma(k+1/2)), v_k = (6k+1)/(1-6k) u_k.
// Both asymptotic sums are truncated at their smallest term.
AiryPair airy_asymptotic_pos(double x) {
    const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
    const double x14 = std::pow(x, 0.25);
    double sa = 1.0, sb = 1.0, sap = 1.0, sbp = 1.0;
    {
        double u = 1.0, v = 1.0, za = 1.0, zb = 1.0, prev = 1.0;
        for (int k = 1; k < 60; ++k) {
            u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
                 (216.0 * k * (2.0 * k - 1.0));
            v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
            za *= -1.0 / zeta;
            zb *= 1.0 / zeta;
            if (u * std::fabs(zb) > prev) break;
            prev = u * std::fabs(zb);
            sa += u * za;
            sb += u * zb;
            sap += v * za;
            sbp += v * zb;
            if (u * zb < 1e-18) break;
        }
    }
    AiryPair r;
    const double em = std::exp(-zeta);
    r.ai = em * sa / (2.0 * kSqrtPi * x14);
    r.aip = -em * x14 * sap / (2.0 * kSqrtPi);
    const double ep = std::exp(zeta);  // overflows past x ~ 104; guarded upstream
    r.bi = ep * sb / (kSqrtPi * x14);
    r.bip = ep * x14 * sbp / kSqrtPi;
    return r;
}

AiryPair airy_asymptotic_neg(double x) {
    const double z = -x;
    const double zeta = (2.0 / 3.0) * z * std::sqrt(z);
    const double z14 = std::pow(z, 0.25);
    // Even/odd splits of sum (-1)^k u_k zeta^{-k} and the v analogue.
    double ue = 1.0, uo = 0.0, ve = 1.0, vo = 0.0;
    {
        double u = 1.0, v = 1.0, zp = 1.0, prev = 1.0;
        for (int k = 1; k < 60; ++k) {
            u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
                 (216.0 * k * (2.0 * k - 1.0));
            v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
            zp /= zeta;
            const double tu = u * zp, tv = v * zp;
            if (std::fabs(tu) > prev) break;
            prev = std::fabs(tu);
            const double sgn = (k / 2) % 2 == 0 ? 1.0 : -1.0;  // (-1)^{floor(k/2)}
            if (k % 2 == 0) {
                ue += sgn * tu;
                ve += sgn * tv;
            } else {
                uo += sgn * tu;
                vo += sgn * tv;
            }
            if (std::fabs(tu) < 1e-18) break;
        }
    }
    const double c = std::cos(zeta - 0.25 * M_PI);
    const double s = std::sin(zeta - 0.25 * M_PI);
    AiryPair r;
    r.ai = (c * ue + s * uo) / (kSqrtPi * z14);
    r.bi = (-s * ue + c * uo) / (kSqrtPi * z14);
    r.aip = (s * ve - c * vo) * z14 / kSqrtPi;
    r.bip = (c * ve + s * vo) * z14 / kSqrtPi;
    return r;
}

// Taylor continuation of y'' = x y from (y, y') at anchor a, evaluated at
// a + h.  Coefficient recurrence t_{k+2} = (a t_k + t_{k-1}) / ((k+1)(k+2)).
void airy_taylor_step(double a, double h, double* y, double* yp) {
    double t[42] = {*y, *yp};
    for (int k = 0; k + 2 < 42; ++k)
        t[k + 2] = (a * t[k] + (k > 0 ? t[k - 1] : 0.0)) / ((k + 1.0) * (k + 2.0));
    double sy = 0.0, syp = 0.0;
    for (int k = 41; k >= 1; --k) {
        sy = (sy + t[k]) * h;
        syp = (syp + k * t[k]) * (k > 1 ? h : 1.0);
    }
    *y = sy + t[0];
    *yp = syp;
}

// Ai on (4, 8] by integrating down from x = 9 where the asymptotic series is
// exact to ~e^{-36}: the direct Maclaurin sum loses ~e^{2 zeta} to
// cancellation there, and downward integration only damps Bi contamination.
void airy_ai_continued(double x, double* ai, double* aip) {
    const double anchor = 9.0;
    AiryPair a9 = airy_asymptotic_pos(anchor);
    double y = a9.ai, yp = a9.aip;
    const int steps = static_cast<int>(std::ceil((anchor - x) / 1.25));
    double pos = anchor;
    for (int s = 0; s < steps; ++s) {
        const double target = anchor + (x - anchor) * (s + 1.0) / steps;
        airy_taylor_step(pos, target - pos, &y, &yp);
        pos = target;
    }
    *ai = y;
    *aip = yp;
}

AiryPair airy_eval(double x) {
    if (x < -kSeriesRadius) return airy_asymptotic_neg(x);
    if (x <= 4.0) return airy_series(x);
    if (x <= 8.0) {
        AiryPair r = airy_series(x);  // Bi side is cancellation-free here
        airy_ai_continued(x, &r.ai, &r.aip);
        return r;
    }
    return airy_asymptotic_pos(x);
}

}  // namespace

double airy_ai(double x) { return airy_eval(x).ai; }

double airy_bi(double x) {
    if (x > 104.0)
        throw std::domain_error("airy_bi: argument " + std::to_string(x) +
                                " overflows double range");
    return airy_eval(x).bi;
}

double airy_ai_prime(double x) { return airy_eval(x).aip; }

double airy_bi_prime(double x) {
    if (x > 104.0)
        throw std::domain_error("airy_bi_prime: argument overflows double range");
    return airy_eval(x).bip;
}

double chebyshev_u(int n, double x) {
    if (n < 0) throw std::domain_error("chebyshev_u: negative degree");
    if (n == 0) return 1.0;
    double um1 = 1.0, u = 2.0 * x;
    for (int k = 2; k <= n; ++k) {
        const double next = 2.0 * x * u - um1;
        um1 = u;
        u = next;
    }
    return u;
}

BracketedRoot bracket_and_refine(const std::function<double(double)>& f,
                                 double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (!(flo * fhi < 0.0))
        throw std::invalid_argument("bracket_and_refine: no sign change on interval");
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    BracketedRoot r;
    r.lo = lo;
    r.hi = hi;
    r.value = 0.5 * (lo + hi);
    r.residual = f(r.value);
    return r;
}

ScaledValue dense_determinant(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("dense_determinant: not square");
    if (a.rows() > 64) throw std::invalid_argument("dense_determinant: n > 64");
    if (a.rows() == 0) return ScaledValue::from_double(1.0);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    ScaledValue det = ScaledValue::from_double(
        static_cast<double>(lu.permutationP().determinant()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        det = det * lu.matrixLU()(i, i);
    return det;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double fm, double whole, double tol,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth <= 0)
        throw std::runtime_error("adaptive_quadrature: depth limit reached");
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f,
                           double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 60);
}

int tridiagonal_negative_count(const std::vector<double>& diag,
                               const std::vector<double>& off) {
    if (!diag.empty() && off.size() + 1 != diag.size())
        throw std::invalid_argument("tridiagonal_negative_count: size mismatch");
    int count = 0;
    double d = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        d = diag[i] - (i > 0 ? off[i - 1] * off[i - 1] / d : 0.0);
        if (d == 0.0) d = 1e-300;  // nudge off the exact eigenvalue
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace qkp::numerics
