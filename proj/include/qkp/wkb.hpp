#pragma once

#include <vector>

#include "qkp/core.hpp"

// Semiclassical layer: effective potentials for the single and periodic
// delta, turning points, action integrals, the uniform Airy approximation and
// the WKB secular function.  The effective Schroedinger problem has energy 2;
// physical energy enters only through eta.
namespace qkp::wkb {

// V(m) = (2/Lambda) sqrt((m+1+eta)/(m+3/2)), increasing to V(inf) = 2/Lambda.
double potential_single(double m, double eta, double Lambda);

// p^2(m) = 2 - V(m).
double local_kinetic(double m, double eta, double Lambda);

// m_t = (Lambda^2/2 - eta)/(1 - Lambda^2) - 1; negative means no well.
double turning_point(double eta, double Lambda);

// Largest eta admitting a well: 1.5 Lambda^2 - 1 (positive for
// Lambda > sqrt(2/3)).
double eta_max(double Lambda);

// s(m, eta) = |integral_{m_t}^{m} sqrt|p^2| dn| by adaptive quadrature with
// the turning-point sqrt singularity substituted away.  Authoritative.
double action(double m, double eta, double Lambda);

// Closed-form antiderivative of the same integral (exact; see tests for the
// quadrature cross-check).
double action_closed_form(double m, double eta, double Lambda);

// sigma = sign(m - m_t) ((3/2) s)^{2/3}; linear through the turning point.
double sigma_variable(double m, double eta, double Lambda);

// Uniform Airy approximation q = [sigma/(V-2)]^{1/4} Bi(sigma) with the
// normalization constant fixed to 1: the exponentially growing branch,
// matching the generic divergence of the determinant minors.
double q_uniform(double m, double eta, double Lambda);

struct WkbSecular {
    double value = 0.0;
    bool valid = false;  // false when m_t(eta) <= m0 + 2
};

// zeta_II: mismatch between the uniform-Airy ratio q(m0+1)/q(m0) on the
// branch that decays beyond the turning point and the exact minor ratio
// D_{m0+1}/D_{m0} (1/Lambda) sqrt((m0+1+eta)/(m0+3/2)).  The decaying branch
// is the one whose zeros sit at the spectrum; the growing branch's zeros
// interlace them halfway.
WkbSecular zeta_wkb(double eta, double Lambda, int m0 = 3);

// Zeros of zeta_II over the valid eta range.
std::vector<double> wkb_spectrum(double Lambda, int m0 = 3, double tol = 1e-10,
                                 double eta_min = kEtaMinDefault);

// floor(1 / ((1-Lambda) 2 sqrt(2 Lambda))) for sqrt(2/3) < Lambda < 1.
int count_estimate(double Lambda);

// Periodic effective potential,
// V = [tanh(L sqrt(m+1+eta)/2) + 2 sin^2(w/2)/sinh(L sqrt(m+1+eta))]
//     * (2/Lambda) sqrt((m+1+eta)/(m+3/2)).
double potential_periodic(double m, double eta, double omega,
                          const ModelParams& p);

struct SmallLValue {
    double value = 0.0;
    bool in_domain = false;  // expansion parameter L sqrt(m+1+eta) < 1
};

// Leading small-L term (2/(L Lambda)) (1/sqrt(m+3/2)) 2 sin^2(w/2).
SmallLValue potential_small_l(double m, double omega, const ModelParams& p,
                              double eta = 0.0);

// Turning point of the leading small-L potential: 2 sin^2(w/2)/(Lambda L) - 3/2.
double small_l_turning_point(double omega, const ModelParams& p);

struct TurningShift {
    double bound = 0.0;
    double m_t = 0.0;
    bool valid = false;  // stated regime: L > 1, omega < pi/2, eta < eta_max
};

// Bound on the displacement of the periodic turning point from the single
// delta one: (2/3) ((Lambda^2/2 - eta)/(1-Lambda^2))^2 e^{-L sqrt(1+m_t)}
// (1 - 2 sin^2(w/2)).
TurningShift turning_shift_bound(double eta, double omega, const ModelParams& p);

}  // namespace qkp::wkb
