#include "qkp/core.hpp"

#include <cmath>

namespace qkp {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

ModelParams ModelParams::from_scaled(double Lambda, double L) {
    if (!(L > 0.0)) throw std::domain_error("ModelParams: period must be positive");
    return {Lambda, kSqrt2 * Lambda, L};
}

ModelParams ModelParams::from_raw(double lambda, double L) {
    if (!(L > 0.0)) throw std::domain_error("ModelParams: period must be positive");
    return {lambda / kSqrt2, lambda, L};
}

double kappa_n(int n, double eta) {
    if (n < 0) throw std::domain_error("kappa_n: mode index must be >= 0");
    if (n == 0 && eta <= 0.0)
        throw std::domain_error("kappa_n: eta must be positive for mode 0");
    if (eta < 0.0) throw std::domain_error("kappa_n: eta must be >= 0");
    return std::sqrt(static_cast<double>(n) + eta);
}

ModeMomentum mode_momentum(int n, double energy) {
    const double gap = energy - (static_cast<double>(n) + 0.5);
    if (gap >= 0.0) return {n, ModeBranch::conducting, std::sqrt(gap)};
    return {n, ModeBranch::evanescent, std::sqrt(-gap)};
}

double coupling_element(int n, int direction) {
    if (n < 0) throw std::domain_error("coupling_element: mode index must be >= 0");
    if (direction != 1 && direction != -1)
        throw std::domain_error("coupling_element: direction must be +1 or -1");
    if (n == 0 && direction == -1)
        throw std::domain_error("coupling_element: no mode below n = 0");
    const double target = direction == 1 ? n + 1.0 : static_cast<double>(n);
    return std::sqrt(target / 2.0);
}

}  // namespace qkp
