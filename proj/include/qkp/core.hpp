#pragma once

#include <stdexcept>

namespace qkp {

// Low-energy solvers clamp their scan domain to [kEtaMinDefault, 1/2 -
// kEtaMinDefault]: the secular functions diverge at eta -> 0 where
// kappa_0 -> 0.
inline constexpr double kEtaMinDefault = 1e-6;

// Physical configuration: interaction strength and lattice period.
// Lambda = lambda / sqrt(2); the subcritical solvers require 0 < Lambda < 1,
// checked at their entry (kp1d legitimately runs with lambda < 0).
struct ModelParams {
    double lambda_scaled = 0.0;  // Lambda
    double lambda_raw = 0.0;     // lambda = sqrt(2) * Lambda
    double period = 1.0;         // L > 0

    static ModelParams from_scaled(double Lambda, double L);
    static ModelParams from_raw(double lambda, double L);
};

// eta = 1/2 - E.  The sub-threshold point spectrum lives in 0 < eta < 1/2.
struct EnergyPoint {
    double eta = 0.0;
    double energy = 0.5;

    static EnergyPoint from_eta(double eta) { return {eta, 0.5 - eta}; }
    static EnergyPoint from_energy(double E) { return {0.5 - E, E}; }
};

enum class ModeBranch { conducting, evanescent };

// Longitudinal momentum of one transverse mode: real wave number k_n on the
// conducting branch, decay rate kappa_n on the evanescent branch.
struct ModeMomentum {
    int mode = 0;
    ModeBranch branch = ModeBranch::conducting;
    double value = 0.0;
};

// kappa_n = sqrt(n + eta).  Domain error at (n = 0, eta <= 0).
double kappa_n(int n, double eta);

// Threshold E = n + 1/2 is classified conducting with k = 0, matching the
// floor(E - 1/2) multiplicity convention.
ModeMomentum mode_momentum(int n, double energy);

// Matrix element of q between adjacent oscillator modes:
// sqrt((n+1)/2) for direction +1, sqrt(n/2) for -1.
double coupling_element(int n, int direction);

inline void require_subcritical(double Lambda) {
    if (!(Lambda > 0.0 && Lambda < 1.0))
        throw std::domain_error("subcritical solver requires 0 < Lambda < 1");
}

}  // namespace qkp
