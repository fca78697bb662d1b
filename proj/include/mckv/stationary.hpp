#pragma once

#include <string>
#include <vector>

#include "mckv/torus_fourier.hpp"

namespace mckv {

/// Order parameters of a density on the torus: cosine and sine moments.
struct MomentPair {
    double m1 = 0.0;
    double m2 = 0.0;

    double magnitude() const;
    double phase() const;  // atan2(m2, m1)
};

/// Boltzmann-type density rho(x) = exp(-(cos 2x - m1 cos x - m2 sin x)/sigma) / Z.
struct StationaryDensity {
    double sigma;
    MomentPair moments;
    double normalization;  // Z
    GridFunction samples;
};

struct FixedPointReport {
    double sigma = 0.0;
    std::vector<MomentPair> solutions;
    int count = 0;
    std::vector<double> residuals;          // ||moment_map(m) - m|| per solution
    std::vector<MomentPair> newton_points;  // converged multistart Newton endpoints
    double max_axis_violation = 0.0;        // max |m1 * m2| over newton_points
    std::vector<std::string> warnings;
};

/// Z_sigma(m1, m2), the normalization integral of the Boltzmann density.
double partition_function(double sigma, MomentPair m, int nodes = 1024);

StationaryDensity stationary_density(double sigma, MomentPair m, int grid_size = 1024);

/// Self-consistency map: the (cos, sin) moments of the density built from m.
/// Fixed points are the stationary states.
MomentPair moment_map(double sigma, MomentPair m, int nodes = 1024);

/// Restrictions of the map to the invariant axes m1 = 0 and m2 = 0.
double moment_map_sine(double sigma, double m, int nodes = 1024);
double moment_map_cosine(double sigma, double m, int nodes = 1024);

/// Unnormalized fixed-point residuals on the axes:
///   sine:   int (sin x - m) e^{-cos(2x)/sigma + (m/sigma) sin x} dx,
///   cosine: int (cos x - m) e^{-cos(2x)/sigma + (m/sigma) cos x} dx.
/// m is a root iff m is a fixed point of the corresponding axis map.
double sine_residual(double sigma, double m, int nodes = 1024);
double cosine_residual(double sigma, double m, int nodes = 1024);

/// Weighted power moments s_k = int (sin x)^k e^{-cos(2x)/sigma} dx and the
/// cosine analogue c_k.
double sine_power_moment(double sigma, int k, int nodes = 1024);
double cosine_power_moment(double sigma, int k, int nodes = 1024);

/// Sign factors of the odd power series of the axis residuals:
///   s_{2k+2} / ((2k+1) s_{2k}) - sigma  and the cosine analogue.
/// Strictly decreasing in k with limit -sigma.
double sine_series_factor(double sigma, int k, int nodes = 1024);
double cosine_series_factor(double sigma, int k, int nodes = 1024);

struct SeriesResult {
    double value = 0.0;
    bool converged = false;
    int terms = 0;
};

/// Power series sum_k (m/sigma)^{2k+1} s_{2k} factor_k / (2k)! for the sine
/// axis residual; truncated when the next term drops below tol relative to
/// the partial sum. Caps at 200 terms.
SeriesResult sine_residual_series(double sigma, double m, double tol, int nodes = 1024);

/// d/dm of the sine axis residual at m = 0: (s_2 - sigma s_0) / sigma.
/// Positive below the critical noise strength, negative above.
double sine_residual_slope(double sigma, int nodes = 1024);

/// Residual integral in polar moment coordinates (amplitude, phase):
///   int sin(x - phase) e^{-(cos 2x - amplitude cos(x - phase))/sigma} dx.
/// Vanishing forces fixed points onto the axes.
double polar_residual(double sigma, double amplitude, double phase, int nodes = 1024);

/// f, f', f'' at the minimum of the exponent.
struct LocalValues {
    double f0, f1, f2;
};
/// U and its 2nd..4th derivatives at an interior nondegenerate minimum.
struct LaplaceMinimum {
    double u0, u2, u3, u4;
};

/// Second-order Laplace approximation of int f e^{-U/sigma} around one
/// minimum: sqrt(2 pi sigma / u2) e^{-u0/sigma} (f0 + gamma_f sigma) with
///   gamma_f = f0 (5 u3^2 / (24 u2^3) - u4 / (8 u2^2)) - f1 u3 / (2 u2^2)
///           + f2 / (2 u2).
/// Rejects u2 <= 0.
double laplace_approx(const LocalValues& f, const LaplaceMinimum& u, double sigma);

/// For sigma >= 1/2: checks c_2 - sigma c_0 < 0, negative cosine series
/// factors for k = 1..10, and absence of a sign change of the cosine
/// residual on (0, 1]; together these exclude off-origin fixed points on the
/// cosine axis.
bool cosine_axis_uniqueness(double sigma, int nodes = 1024);

/// Stationary states at the given noise strength. The origin is always
/// included; the axes are scanned for sign changes of the residuals, roots
/// are polished by bisection and verified as fixed points of moment_map, and
/// a multistart 2-D Newton from a 5x5 grid over [-1,1]^2 cross-checks that
/// every solution lies on an axis.
FixedPointReport find_fixed_points(double sigma, double tol = 1e-10, int nodes = 1024);

}  // namespace mckv
