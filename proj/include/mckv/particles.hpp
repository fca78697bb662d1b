#pragma once

#include <cstdint>
#include <vector>

#include "mckv/torus_fourier.hpp"

namespace mckv {

/// Positions of the interacting ensemble on [0, 2pi). The seed plus the step
/// counter determine every future noise increment, so runs are reproducible
/// and independent of threading.
struct ParticleEnsemble {
    std::vector<double> positions;
    double t = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t step_index = 0;

    int size() const { return static_cast<int>(positions.size()); }
};

/// i.i.d. uniform positions on the torus.
ParticleEnsemble sample_uniform(int n, std::uint64_t seed);

/// i.i.d. positions with the law given by grid samples of a density
/// (inverse transform on the piecewise-linear CDF).
ParticleEnsemble sample_from_density(int n, const GridFunction& density, std::uint64_t seed);

/// Drift -V'(X_i) + (1/N) sum_l F'(X_l - X_i), evaluated in O(N deg F) via
/// the empirical Fourier moments of the ensemble.
std::vector<double> mean_field_drift(const ParticleEnsemble& e, const SpectralField& v,
                                     const SpectralField& f);

/// O(N^2) reference evaluation of the same drift.
std::vector<double> mean_field_drift_pairwise(const ParticleEnsemble& e, const SpectralField& v,
                                              const SpectralField& f);

/// Euler-Maruyama step X <- X + drift dt + sqrt(2 sigma dt) xi, reduced
/// modulo 2pi.
ParticleEnsemble em_step(const ParticleEnsemble& e, const SpectralField& v,
                         const SpectralField& f, double sigma, double dt);

/// Empirical moments (mean cos, mean sin).
struct EmpiricalMoments {
    double m1, m2;
};
EmpiricalMoments empirical_moments(const ParticleEnsemble& e);

struct ParticleRunConfig {
    int n = 1000;
    double sigma = 1.0;
    SpectralField potential_v;
    SpectralField potential_f;
    double dt = 1e-3;
    double t_final = 1.0;
    double sample_dt = 0.1;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency
};

struct ParticleSample {
    double t, m1, m2;
};

struct ParticleRun {
    std::vector<ParticleSample> samples;
    ParticleEnsemble final_state;
};

/// Multi-step simulation; equivalent to repeated em_step but with cached
/// trigonometric state and optional threading.
ParticleRun run_particles(const ParticleRunConfig& cfg, const ParticleEnsemble& init);
ParticleRun run_particles(const ParticleRunConfig& cfg);  // uniform start

struct ChaosConfig {
    std::vector<int> n_list{1000, 10000, 100000};
    int replicates = 8;
    double sigma = 0.9;
    double t_final = 2.0;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    int pde_order = 64;
    int threads = 0;
};

struct ChaosPoint {
    int n;
    std::vector<double> errors;  // per replicate |(m1,m2)_emp - (m1,m2)_pde|
    double rms_error;
};

struct ChaosReport {
    std::vector<ChaosPoint> points;
    double fitted_exponent;  // least-squares slope of log rms vs log n
    double pde_m1, pde_m2;   // deterministic reference at t_final
};

/// Empirical-moment error against the mean-field solution as the ensemble
/// grows, with the Monte Carlo scaling exponent fitted across n_list.
ChaosReport chaos_compare(const ChaosConfig& cfg);

}  // namespace mckv
