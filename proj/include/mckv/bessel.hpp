#pragma once

#include "mckv/quadrature.hpp"

namespace mckv {

/// Torus integral of cos(2nx) e^{z cos 2x}, equal to 2 pi times the standard
/// modified Bessel function I_n(z). Throws past |z| = 700; use the scaled
/// form there.
double bessel_I(int n, double z);

/// Same integral with the exponent maximum factored out, safe for any z.
ScaledValue bessel_I_scaled(int n, double z);

/// r_n(z) = I_{n+1}(z) / I_n(z); scale-invariant, safe for large z.
double bessel_ratio(int n, double z);

/// f_c(sigma) = 1/sigma - 2 + r_0(1/sigma)/sigma, strictly decreasing with a
/// single zero at the critical noise strength.
double critical_noise_function(double sigma);

struct RootResult {
    double root;
    double residual;
    int iterations;
};

/// Bisection of the critical function on [0.4, 1.0] down to width tol.
RootResult find_critical_sigma(double tol);

}  // namespace mckv
