#include "mckv/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace mckv {

namespace {

// The integrand e^{z cos 2x} has bandwidth ~2|z| in x, so the node count
// scales with |z|.
int nodes_for(double z) {
    const double need = 2.5 * std::abs(z) + 128.0;
    int m = 1024;
    while (m < need) m *= 2;
    return m;
}

}  // namespace

ScaledValue bessel_I_scaled(int n, double z) {
    if (n < 0) throw std::invalid_argument("order must be nonnegative");
    const TorusQuadrature quad(nodes_for(z));
    // cos(2nx) via the Chebyshev recurrence in cos 2x = 2c^2 - 1.
    return quad.integrate_exp([z](double, double c) { return z * (2.0 * c * c - 1.0); },
                              [n](double, double c) {
                                  const double c2 = 2.0 * c * c - 1.0;
                                  double prev = 1.0, cur = c2;
                                  if (n == 0) return prev;
                                  for (int i = 1; i < n; ++i) {
                                      const double next = 2.0 * c2 * cur - prev;
                                      prev = cur;
                                      cur = next;
                                  }
                                  return cur;
                              });
}

double bessel_I(int n, double z) {
    if (std::abs(z) > 700.0)
        throw std::domain_error("argument too large for direct evaluation; use bessel_I_scaled");
    return bessel_I_scaled(n, z).get();
}

double bessel_ratio(int n, double z) {
    const ScaledValue lo = bessel_I_scaled(n, z);
    const ScaledValue hi = bessel_I_scaled(n + 1, z);
    // Shared exponent maximum, so log scales coincide and cancel.
    if (lo.value == 0.0) throw std::domain_error("vanishing denominator in bessel ratio");
    return hi.value / lo.value * std::exp(hi.log_scale - lo.log_scale);
}

double critical_noise_function(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    const double z = 1.0 / sigma;
    return z - 2.0 + z * bessel_ratio(0, z);
}

RootResult find_critical_sigma(double tol) {
    if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    double a = 0.4, b = 1.0;
    double fa = critical_noise_function(a);
    double fb = critical_noise_function(b);
    if (!(fa > 0.0 && fb < 0.0))
        throw std::runtime_error("critical-function bracket lost its sign change");
    int iters = 0;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = critical_noise_function(mid);
        if (fm > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
        ++iters;
        if (iters > 200) break;
    }
    const double root = 0.5 * (a + b);
    return {root, critical_noise_function(root), iters};
}

}  // namespace mckv
