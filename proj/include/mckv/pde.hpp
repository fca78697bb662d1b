#pragma once

#include <vector>

#include "mckv/torus_fourier.hpp"

namespace mckv {

/// Mean-field Fokker-Planck equation on the torus,
///   dt rho = sigma dxx rho + dx[(V' + F' * rho) rho],
/// integrated in spectral space with an integrating-factor (exponential
/// Euler) scheme; the quadratic transport term is evaluated on a dealiased
/// grid.
struct PdeConfig {
    double sigma = 1.0;
    SpectralField potential_v;  // environmental potential V
    SpectralField potential_f;  // interaction potential F
    int order = 64;             // spectral truncation K
    int grid = 256;             // product grid, needs grid > 3*order
    double dt = 1e-3;
    double t_final = 1.0;
    double sample_dt = 0.1;          // monitor sampling interval
    double stationary_rate_tol = 0;  // stop when ||rho_{n+1}-rho_n||/dt drops below; 0 = off
    double blowup_limit = 1e12;
    int snapshot_grid = 0;  // store full density snapshots at sample times when > 0
};

/// Config with the double-well environment V = cos 2x and the attractive
/// interaction F = -cos x.
PdeConfig default_pde_config(double sigma, int order = 64);

struct PdeState {
    SpectralField rho;
    double t = 0.0;
};

/// First moments and mass of a spectral density.
double moment_m1(const SpectralField& rho);
double moment_m2(const SpectralField& rho);
double total_mass(const SpectralField& rho);

/// Uniform probability density 1/(2 pi).
SpectralField uniform_density(int order);

/// Normalized von-Mises-type bump exp(kappa (cos(x - center) - 1)).
SpectralField bump_density(double center, double kappa, int order, int grid = 0);

/// Right-hand side sigma dxx rho + dx[(V' + F' * rho) rho] in spectral space.
SpectralField pde_rhs(const SpectralField& rho, const PdeConfig& cfg);

/// One exponential-Euler step:
///   rho_k <- e^{-sigma dt k^2} rho_k + dt phi1(-sigma dt k^2) N_k(rho),
/// with N the transport term; the mass mode is preserved exactly.
PdeState pde_step(const PdeState& s, const PdeConfig& cfg);

struct PdeSample {
    double t;
    double m1, m2, mass, min_value, l2_residual;
    double rate;  // ||rho_{n} - rho_{n-1}|| / dt at the sample step
};

struct PdeTrajectory {
    std::vector<PdeSample> samples;
    std::vector<std::pair<double, GridFunction>> snapshots;
    PdeState final_state;
    bool stationary = false;
};

/// Integrates rho0 (which must have unit mass) up to t_final, sampling
/// monitors every sample_dt; stops early at the stationarity tolerance when
/// one is set. Blow-up raises BlowupError.
PdeTrajectory pde_evolve(const SpectralField& rho0, const PdeConfig& cfg);

/// Step engine with precomputed integrating factors, reused by the
/// stochastic solver so the zero-noise dynamics coincide exactly.
class PdeStepper {
  public:
    explicit PdeStepper(PdeConfig cfg);

    const PdeConfig& config() const { return cfg_; }
    const SpectralField& v_prime() const { return vp_; }
    const SpectralField& f_prime() const { return fp_; }

    /// dx[(V' + F' * rho) rho] on the dealiased grid.
    SpectralField nonlinear_term(const SpectralField& rho) const;
    /// In-place exponential-Euler update of the coefficients.
    void deterministic_update(SpectralField& rho) const;
    /// Update, advance time, and check for blow-up.
    void advance(PdeState& s) const;

    double decay(int k) const { return decay_[static_cast<std::size_t>(std::abs(k))]; }
    double phi1dt(int k) const { return phi1dt_[static_cast<std::size_t>(std::abs(k))]; }

  private:
    PdeConfig cfg_;
    SpectralField vp_, fp_;
    std::vector<double> decay_, phi1dt_;
};

/// phi1(z) = (e^z - 1)/z with a series branch near zero.
double phi1(double z);
/// phi2(z) = (e^z - 1 - z)/z^2 with a series branch near zero.
double phi2(double z);

}  // namespace mckv
