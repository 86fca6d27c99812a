#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qkp/core.hpp"
#include "qkp/scaled.hpp"

// Single delta-vertex in the quadratic channel: the tridiagonal J0 matrix,
// channel S-matrix, determinant recursions, the stable backward-ratio secular
// function and the low-energy point spectrum.
namespace qkp::channel {

// Off-diagonal entries c_m = Lambda sqrt((m+1)/(kappa_{m+1} kappa_m)) of the
// evanescent-regime matrix 2I + J0; the diagonal is the constant 2.
struct JacobiCoefficients {
    double eta = 0.0;
    double lambda_scaled = 0.0;
    std::vector<double> off_diag;  // c_0 .. c_{n_max-1}
    static constexpr double kDiagonal = 2.0;
};

JacobiCoefficients jacobi_coefficients(double eta, double Lambda, int n_max);
double jacobi_off_diag(int m, double eta, double Lambda);

// Principal minors D_{-1} = 1, D_0 = 2, D_{m+1} = 2 D_m - c_m^2 D_{m-1},
// kept in scaled form (the sequence grows like xi_+^m).
struct MinorSequence {
    std::vector<ScaledValue> values;  // D_{-1}, D_0, ..., D_n

    const ScaledValue& d(int m) const { return values[m + 1]; }
    int max_index() const { return static_cast<int>(values.size()) - 2; }
};

MinorSequence minor_determinants(double eta, double Lambda, int n_max);

// xi_pm = 1 +- sqrt(1 - Lambda^2); real only in the subcritical regime.
std::pair<double, double> xi_roots(double Lambda);

// Determinant of the dim x dim constant-coefficient comparison matrix
// (diagonal 2, off-diagonal Lambda), equal to Lambda^dim U_dim(1/Lambda).
ScaledValue chebyshev_reference(double Lambda, int dim);

// Start depth policy for the backward recursion: seed error decays like
// (xi_-/xi_+)^steps, so the depth grows as Lambda -> 1.
int default_m_start(double eta, double Lambda);

// Backward sweep g_m = Lambda^2 (m+1)/(kappa_{m+1} kappa_m) / (2 - g_{m+1})
// from g_{m_start} = seed down to g_1; result[m-1] holds g_m.  Divisions by
// |2 - g| < 1e-30 are counted as pole crossings rather than failing.
struct BackwardSweep {
    std::vector<double> ratios;
    int pole_crossings = 0;

    double g(int m) const { return ratios[m - 1]; }
};

BackwardSweep backward_ratio_sweep(double eta, double Lambda, int m_start,
                                   double seed);

struct BackwardResult {
    double g1 = 0.0;
    int pole_crossings = 0;
};

// Continued-fraction value of g_1 seeded with xi_+ at depth m_start
// (0 selects the default policy).
BackwardResult g_backward(double eta, double Lambda, int m_start = 0);

struct SecularValue {
    double value = 0.0;
    int pole_crossings = 0;
};

// zeta_I(eta) = g_1(eta) - (1/2)(4 - Lambda^2/(kappa_0 kappa_1)); its zeros
// are the point spectrum.
SecularValue zeta_single_info(double eta, double Lambda, int m_start = 0);
double zeta_single(double eta, double Lambda);

// All zeros of zeta_I in [eta_min, eta_max], each refined to width <= tol.
// A refined sign change is accepted only if |zeta_I| at the refined point
// drops below both bracket endpoint magnitudes (rejects pole crossings).
std::vector<double> point_spectrum(double Lambda,
                                   double eta_min = kEtaMinDefault,
                                   double eta_max = 0.5 - kEtaMinDefault,
                                   double tol = 1e-10);

// Truncated coupling matrix J0 at the given total energy: row n carries the
// phase factor i|k_n|/k_n, which is i on conducting rows and 1 on evanescent
// ones (making the fully evanescent matrix real symmetric).
Eigen::MatrixXcd channel_j0(double energy, double Lambda, int truncation);

// Truncated channel S-matrix S = -I + [I + J0/2]^{-1} replicated over the
// 2x2 block structure; rows/columns 0..M-1 are left amplitudes, M..2M-1
// right amplitudes.
struct ChannelScattering {
    Eigen::MatrixXcd s;
    int open_modes = 0;
    double condition_estimate = 0.0;

    // Worst unit-flux defect over conducting incoming channels.
    double flux_defect() const;
};

ChannelScattering s_matrix_channel(double energy, double Lambda, int truncation);

}  // namespace qkp::channel
