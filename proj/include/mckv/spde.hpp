#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mckv/pde.hpp"
#include "mckv/torus_fourier.hpp"

namespace mckv {

/// Diagonal trace-class covariance: Q e_k = lambda_k^2 e_k.
struct CovarianceSpec {
    std::vector<double> lambda_sq;  // index k + order

    int order() const { return (static_cast<int>(lambda_sq.size()) - 1) / 2; }
    double eigenvalue(int k) const { return lambda_sq[static_cast<std::size_t>(k + order())]; }
    double amplitude(int k) const;  // lambda_k
    double trace() const;

    /// lambda_k^2 = c (1 + k^2)^{-gamma}; summable in the untruncated limit
    /// for gamma > 1/2.
    static CovarianceSpec power_law(int order, double gamma, double c);
    static CovarianceSpec zero(int order);

    /// Lower bound lambda_k^2 >= c (1 + k^2)^{-gamma} with gamma < 1, the
    /// noise-strength condition for the smoothing regime.
    bool satisfies_growth_bound(double c, double gamma) const;
};

/// Independent per-mode Gaussian increment generators; a seed fixes the
/// whole increment sequence.
class NoiseStream {
  public:
    NoiseStream(std::uint64_t seed, int order);

    std::uint64_t seed() const { return seed_; }
    int order() const { return order_; }
    /// Next standard normal for mode k.
    double normal(int k);

  private:
    std::uint64_t seed_;
    int order_;
    std::vector<std::uint64_t> base_;     // per-mode stream key
    std::vector<std::uint64_t> counter_;  // per-mode draw counter
    std::vector<double> spare_;
    std::vector<unsigned char> has_spare_;
};

/// Exact-in-distribution Ornstein-Uhlenbeck update of one stochastic
/// convolution mode with decay rate k^2:
///   wa <- e^{-k^2 dt} wa + eta,  eta ~ N(0, lambda^2 (1 - e^{-2 k^2 dt})/(2 k^2)),
/// and variance lambda^2 dt for k = 0.
double ou_update(double wa_k, int k, double lambda_k, double dt, NoiseStream& noise);
/// Same update for an arbitrary nonnegative decay rate, given the normal draw.
double ou_update_rate(double wa_k, double rate, double lambda_k, double dt, double gauss);

struct SpdeConfig {
    double sigma = 1.0;  // diffusion coefficient on the Laplacian
    SpectralField potential_v;
    SpectralField potential_f;
    int order = 64;
    int grid = 256;
    double dt = 1e-3;
    double t_final = 1.0;
    double sample_dt = 0.1;
    double cutoff_radius = 0.0;  // R > 0 turns on the smooth interaction cutoff
    double blowup_limit = 1e12;
};

SpdeConfig default_spde_config(double sigma, int order = 64);

struct SpdeState {
    SpectralField u;
    SpectralField wa;  // running stochastic convolution, same noise as u
    double t = 0.0;
};

/// C^2 cutoff of the squared norm: 1 below radius, 0 above radius + 1,
/// quintic smoothstep in between.
double smooth_cutoff(double x, double radius);

/// Interaction term (F' * u) u xi(||u||^2) on the dealiased grid.
SpectralField truncated_interaction(const SpectralField& u, const SpectralField& f_prime,
                                    double radius, int grid);

/// Exponential-Euler step of
///   dt u = sigma dxx u + dx[V' u + (F' * u) u] + Q^{1/2} dW.
/// One Gaussian increment per mode per step is shared between the state
/// update and the stochastic-convolution tracker; with all eigenvalues zero
/// the update coincides bitwise with the deterministic stepper.
class SpdeStepper {
  public:
    SpdeStepper(SpdeConfig cfg, CovarianceSpec q);

    const SpdeConfig& config() const { return cfg_; }
    const CovarianceSpec& covariance() const { return q_; }

    void advance(SpdeState& s, NoiseStream& noise) const;
    /// Advances the noise-subtracted form: state.u holds v with
    /// dt v = sigma dxx v + dx[V' (v+wa) + (F' * (v+wa))(v+wa)], wa as above.
    /// v + wa then reproduces the direct solution to scheme accuracy.
    void advance_subtracted(SpdeState& s, NoiseStream& noise) const;

    SpectralField nonlinear_term(const SpectralField& u) const;

  private:
    void apply_noise(SpdeState& s, NoiseStream& noise) const;

    SpdeConfig cfg_;
    CovarianceSpec q_;
    PdeStepper det_;
    std::vector<double> noise_std_;  // per signed mode, index k + order
};

/// One exponential-Euler step through a freshly built stepper; prefer
/// SpdeStepper for multi-step runs.
SpdeState spde_step(const SpdeState& s, const SpdeConfig& cfg, const CovarianceSpec& q,
                    NoiseStream& noise);

struct SpdeSample {
    double t;
    double m1, m2, l2_norm, mass;
};

struct SpdeTrajectory {
    std::vector<SpdeSample> samples;
    SpdeState final_state;
};

SpdeTrajectory spde_evolve(const SpectralField& u0, const SpdeConfig& cfg,
                           const CovarianceSpec& q, std::uint64_t seed);

/// Control f with samples at n+1 uniform times spanning [0, t_final].
struct Control {
    std::vector<SpectralField> samples;
    double t_final;
};

/// Constructive steering control: along the straight path from y0 to y1 the
/// residual beta = dt alpha - sigma dxx alpha - dx[V' alpha + (F' * alpha) alpha]
/// is computed spectrally and inverted mode-wise through Q^{1/2}. Exact on
/// the truncation; throws if a needed mode has zero eigenvalue.
Control build_control(const SpectralField& y0, const SpectralField& y1, double t_final,
                      const CovarianceSpec& q, const SpdeConfig& cfg, int num_steps);

struct ControlledRun {
    SpectralField endpoint;
    double endpoint_error;  // L2 distance to the target
};

/// Integrates the controlled system dt y = sigma dxx y + dx[...] + Q^{1/2} f
/// with a second-order exponential scheme and reports the endpoint error
/// against the target.
ControlledRun run_controlled(const SpectralField& y0, const SpectralField& target,
                             const Control& control, const SpdeConfig& cfg,
                             const CovarianceSpec& q);

struct ErgodicityReport {
    std::vector<double> times;
    // pairwise L2 distances over time, pairs in lexicographic order
    std::vector<std::vector<double>> pair_distance;
    struct Averages {
        double m1, m2, l2_sq;
    };
    std::vector<Averages> window_averages;  // per initial datum over [window_start, T]
};

/// Runs every initial datum under the same noise realization and reports
/// pairwise distances plus windowed time-averages of the observables.
ErgodicityReport ergodicity_probe(std::span<const SpectralField> inits, const SpdeConfig& cfg,
                                  const CovarianceSpec& q, double window_start,
                                  std::uint64_t seed);

}  // namespace mckv
