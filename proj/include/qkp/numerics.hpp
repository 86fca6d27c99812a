#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qkp/scaled.hpp"

namespace qkp::numerics {

// Airy functions of the first and second kind and their derivatives.
// Maclaurin series (long-double accumulation) for |x| <= 6.7, optimally
// truncated asymptotic expansions beyond.  Relative error <= 1e-10 on
// |x| <= 100.  airy_bi throws std::domain_error for x > 104 where the
// result overflows double range.
double airy_ai(double x);
double airy_bi(double x);
double airy_ai_prime(double x);
double airy_bi_prime(double x);

// Chebyshev polynomial of the second kind, U_0 = 1, U_1 = 2x,
// U_{n+1} = 2x U_n - U_{n-1}.
double chebyshev_u(int n, double x);

struct BracketedRoot {
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;
    double residual = 0.0;
};

// Bisection to interval width <= tol (at most 200 iterations).  Throws
// std::invalid_argument unless f(lo)*f(hi) < 0.  Bisection rather than a
// faster refiner: the secular functions here carry poles next to zeros.
BracketedRoot bracket_and_refine(const std::function<double(double)>& f,
                                 double lo, double hi, double tol);

// LU determinant in scaled form with exact sign; n <= 64.
ScaledValue dense_determinant(const Eigen::MatrixXd& a);

// Adaptive Simpson quadrature, absolute error <= tol.  Throws
// std::runtime_error when the depth limit is hit before converging.
double adaptive_quadrature(const std::function<double(double)>& f,
                           double a, double b, double tol);

// Number of negative eigenvalues of the symmetric tridiagonal matrix with
// the given diagonal and off-diagonal, via the Sturm/LDL^T sign count.
int tridiagonal_negative_count(const std::vector<double>& diag,
                               const std::vector<double>& off);

}  // namespace qkp::numerics
