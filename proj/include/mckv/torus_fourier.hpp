#pragma once

#include <span>
#include <vector>

namespace mckv {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Real function on the 2pi-torus stored as coefficients against the
/// orthonormal basis
///   e_k(x) = sin(kx)/sqrt(pi)   k > 0,
///   e_0(x) = 1/sqrt(2 pi),
///   e_k(x) = cos(|k|x)/sqrt(pi) k < 0,
/// truncated at |k| <= order.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(int order);

    /// Unit coefficient on mode k, zero elsewhere.
    static SpectralField basis(int k, int order);

    int order() const { return order_; }
    double coeff(int k) const { return c_[static_cast<std::size_t>(k + order_)]; }
    double& coeff(int k) { return c_[static_cast<std::size_t>(k + order_)]; }
    std::span<const double> coeffs() const { return c_; }

    /// L2 norm via Parseval.
    double l2_norm() const;
    bool finite() const;

    /// Copy restricted/extended to a new truncation order.
    SpectralField truncated(int order) const;

    SpectralField& operator+=(const SpectralField& g);
    SpectralField& operator-=(const SpectralField& g);
    SpectralField& operator*=(double a);
    friend SpectralField operator+(SpectralField f, const SpectralField& g) { return f += g; }
    friend SpectralField operator-(SpectralField f, const SpectralField& g) { return f -= g; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

  private:
    int order_ = 0;
    std::vector<double> c_ = std::vector<double>(1, 0.0);
};

/// Samples at the equispaced nodes x_j = 2 pi j / size, j = 0..size-1.
struct GridFunction {
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
    static double node(int j, int grid_size) { return two_pi * j / grid_size; }
    double min_value() const;
    /// Periodic trapezoid rule, i.e. (2 pi / size) * sum.
    double integral() const;
};

/// Projection by the periodic trapezoid rule; exact for trigonometric
/// polynomials resolved by the grid. Requires grid size >= 2*order + 2.
SpectralField to_spectral(const GridFunction& g, int order);

/// Pointwise evaluation of sum f_k e_k at the grid nodes.
GridFunction to_grid(const SpectralField& f, int grid_size);

/// Exact term-by-term differentiation: d/dx sin(kx) = k cos(kx),
/// d/dx cos(kx) = -k sin(kx).
SpectralField derivative(const SpectralField& f);

/// (f*g)(x) = integral over the torus of f(x-y) g(y) dy, computed by
/// diagonalizing in the complex exponential basis.
SpectralField convolve(const SpectralField& f, const SpectralField& g);

/// Heat semigroup e^{t Lap}: f_k -> e^{-t k^2} f_k. Rejects t < 0.
SpectralField heat_semigroup(const SpectralField& f, double t);

/// Wrapped Gaussian G_t^per(x) = sum_k G_t(x + 2 k pi) sampled on the grid;
/// images are added until the next term falls below tol relative to the
/// running sum. Rejects t <= 0.
GridFunction periodic_heat_kernel(double t, double tol, int grid_size = 1024);

/// int_0^t e^{(t-s) Lap} dx z(s) ds for z piecewise constant in time:
/// z[i] holds the value on the i-th of z.size() equal steps covering [0, t].
/// The exponential factor is integrated exactly per mode.
SpectralField integrate_heat_dx(std::span<const SpectralField> z, double t);

/// Same quadrature without the spatial derivative:
/// int_0^t e^{(t-s) Lap} z(s) ds for piecewise-constant z.
SpectralField integrate_heat(std::span<const SpectralField> z, double t);

}  // namespace mckv
