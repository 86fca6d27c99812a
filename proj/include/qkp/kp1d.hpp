#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qkp/core.hpp"

// The classical one-dimensional Kronig-Penney model: single-delta scattering
// matrix, periodic secular function and the negative-energy bands.  Serves as
// the reference point for the channel solvers.
namespace qkp::kp1d {

using Complex = std::complex<double>;

struct TwoPortScattering {
    std::array<std::array<Complex, 2>, 2> s{};

    // max|S^dag S - I| entry; zero for real k up to rounding.
    double unitarity_defect() const;
};

// S(k) = -I + [1/(1 + i lambda/2k)] * ones.  Valid for real k and for the
// bound-state branch k = i kappa.  Throws at k = 0 and at the S-matrix pole
// k = i|lambda|/2 (lambda < 0).
TwoPortScattering s_matrix_1d(Complex k, double lambda);

// det[I - e^{ikL} antidiag(e^{i w}, e^{-i w}) S(k)], evaluated from the 2x2
// complex algebra.  Zeros in k at fixed omega are the Floquet spectrum.
Complex zeta_kp(Complex k, double omega, const ModelParams& p);

// Closed form of zeta_kp on the imaginary axis k = i kappa, lambda < 0:
//   [2 e^{-kL} / (1 - |l|/2k)] (cosh kL - (|l|/2k) sinh kL - cos w).
// Simple pole of the prefactor at kappa = |lambda|/2.
double zeta_kappa(double kappa, double omega, const ModelParams& p);

struct OmegaRoots {
    double omega = 0.0;
    std::vector<double> roots;  // kappa values, ascending
};

// For each omega: all kappa roots of zeta_kappa, bracketed on a log-spaced
// grid over [1e-6, max(5, |lambda|)] and refined by bisection to tol.  The
// prefactor pole at |lambda|/2 is excluded from the brackets; refined roots
// where |zeta| does not drop below both bracket endpoints are discarded as
// pole crossings.
std::vector<OmegaRoots> negative_bands_1d(const ModelParams& p,
                                          const std::vector<double>& omegas,
                                          double tol);

}  // namespace qkp::kp1d
