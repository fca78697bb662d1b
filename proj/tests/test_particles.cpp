#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mckv/particles.hpp"
#include "mckv/pde.hpp"
#include "mckv/rng.hpp"
#include "oracles.hpp"

using namespace mckv;

namespace {

const PdeConfig kDefaults = default_pde_config(1.0, 16);

ParticleEnsemble at_positions(std::vector<double> xs) {
    ParticleEnsemble e;
    e.positions = std::move(xs);
    return e;
}

}  // namespace

TEST_CASE("ziggurat sampler has normal moments and tail mass") {
    const long n = 1000000;
    double s1 = 0, s2 = 0, s4 = 0;
    long tail = 0;
    mckv::SplitMix64 rng{987654321};
    for (long i = 0; i < n; ++i) {
        const double x = ziggurat_normal(rng);
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
        if (std::abs(x) > 3.442619855899) ++tail;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3.0) <= 4.0 * std::sqrt(96.0 / n));
    const double expect = std::erfc(3.442619855899 / std::sqrt(2.0)) * n;
    CHECK(std::abs(tail - expect) <= 4.0 * std::sqrt(expect));
}

TEST_CASE("coincident particles feel no interaction for the odd force") {
    const SpectralField zero_v(16);
    ParticleEnsemble e = at_positions({1.3, 1.3, 1.3, 1.3});
    const auto drift = mean_field_drift(e, zero_v, kDefaults.potential_f);
    for (double d : drift) CHECK(std::abs(d) < 1e-14);
}

TEST_CASE("two particles: interaction drift matches the hand value") {
    const SpectralField zero_v(16);
    const ParticleEnsemble e = at_positions({0.0, 1.5707963267948966});
    const auto fast = mean_field_drift(e, zero_v, kDefaults.potential_f);
    // (1/2)(sin(0) + sin(pi/2 - 0)) = 0.5 on the first particle
    CHECK(fast[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fast[1] == doctest::Approx(-0.5).epsilon(1e-14));
    const auto pair = mean_field_drift_pairwise(e, zero_v, kDefaults.potential_f);
    CHECK(std::abs(fast[0] - pair[0]) < 1e-14);
    CHECK(std::abs(fast[1] - pair[1]) < 1e-14);
}

TEST_CASE("fast path agrees with the pairwise sum on random ensembles") {
    const ParticleEnsemble e = sample_uniform(100, 17);
    const auto fast = mean_field_drift(e, kDefaults.potential_v, kDefaults.potential_f);
    const auto pair = mean_field_drift_pairwise(e, kDefaults.potential_v, kDefaults.potential_f);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(fast[i] - pair[i]) < 1e-12);

    // also for a higher-harmonic interaction
    SpectralField f2(16);
    f2.coeff(-3) = -0.8;
    f2.coeff(2) = 0.4;
    const auto fast2 = mean_field_drift(e, kDefaults.potential_v, f2);
    const auto pair2 = mean_field_drift_pairwise(e, kDefaults.potential_v, f2);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(fast2[i] - pair2[i]) < 1e-12);
}

TEST_CASE("zero noise and zero drift freeze the ensemble") {
    const SpectralField zero_v(16);
    ParticleEnsemble e = at_positions({2.0, 2.0, 2.0});
    const ParticleEnsemble out = em_step(e, zero_v, kDefaults.potential_f, 0.0, 0.01);
    for (int i = 0; i < 3; ++i)
        CHECK(out.positions[i] == doctest::Approx(2.0).epsilon(1e-14));

    // a single particle at a critical point of V stays put
    ParticleEnsemble one = at_positions({1.5707963267948966});
    const SpectralField zero_f(16);
    const ParticleEnsemble still =
        em_step(one, kDefaults.potential_v, zero_f, 0.0, 0.01);
    CHECK(still.positions[0] == doctest::Approx(one.positions[0]).epsilon(1e-12));
}

TEST_CASE("positions stay reduced modulo the period") {
    ParticleRunConfig cfg;
    cfg.n = 200;
    cfg.sigma = 2.0;
    cfg.potential_v = kDefaults.potential_v;
    cfg.potential_f = kDefaults.potential_f;
    cfg.dt = 5e-3;
    cfg.t_final = 0.5;
    cfg.sample_dt = 0.5;
    cfg.seed = 5;
    const ParticleRun run = run_particles(cfg);
    for (double x : run.final_state.positions) {
        CHECK(x >= 0.0);
        CHECK(x < two_pi);
    }
    for (const auto& s : run.samples) {
        CHECK(std::abs(s.m1) <= 1.0);
        CHECK(std::abs(s.m2) <= 1.0);
    }
}

TEST_CASE("relabeling particles leaves the empirical moments unchanged") {
    ParticleEnsemble e = sample_uniform(4096, 23);
    const EmpiricalMoments a = empirical_moments(e);
    std::reverse(e.positions.begin(), e.positions.end());
    const EmpiricalMoments b = empirical_moments(e);
    CHECK(a.m1 == doctest::Approx(b.m1).epsilon(1e-12));
    CHECK(a.m2 == doctest::Approx(b.m2).epsilon(1e-12));
}

TEST_CASE("multi-step driver equals repeated single steps exactly") {
    ParticleRunConfig cfg;
    cfg.n = 500;
    cfg.sigma = 0.8;
    cfg.potential_v = kDefaults.potential_v;
    cfg.potential_f = kDefaults.potential_f;
    cfg.dt = 1e-2;
    cfg.t_final = 0.1;
    cfg.sample_dt = 0.1;
    cfg.seed = 31;
    cfg.threads = 1;
    const ParticleRun run = run_particles(cfg);

    ParticleEnsemble manual = sample_uniform(500, 31);
    for (int i = 0; i < 10; ++i)
        manual = em_step(manual, cfg.potential_v, cfg.potential_f, cfg.sigma, cfg.dt);
    for (int i = 0; i < 500; ++i)
        CHECK(run.final_state.positions[i] == manual.positions[i]);
}

TEST_CASE("threaded and serial runs coincide") {
    ParticleRunConfig cfg;
    cfg.n = 20000;
    cfg.sigma = 0.9;
    cfg.potential_v = kDefaults.potential_v;
    cfg.potential_f = kDefaults.potential_f;
    cfg.dt = 5e-3;
    cfg.t_final = 0.05;
    cfg.sample_dt = 0.05;
    cfg.seed = 99;
    cfg.threads = 1;
    const ParticleRun serial = run_particles(cfg);
    cfg.threads = 2;
    const ParticleRun threaded = run_particles(cfg);
    for (int i = 0; i < cfg.n; ++i)
        CHECK(serial.final_state.positions[i] == threaded.final_state.positions[i]);
}

TEST_CASE("density sampling reproduces the target law") {
    const GridFunction density = to_grid(bump_density(3.0, 4.0, 32), 1024);
    const ParticleEnsemble e = sample_from_density(200000, density, 7);
    const EmpiricalMoments m = empirical_moments(e);
    // moments of the sampled law against quadrature of the density
    double m1 = 0.0, m2 = 0.0;
    for (int j = 0; j < 1024; ++j) {
        const double x = GridFunction::node(j, 1024);
        m1 += std::cos(x) * density.values[j];
        m2 += std::sin(x) * density.values[j];
    }
    m1 *= two_pi / 1024;
    m2 *= two_pi / 1024;
    CHECK(std::abs(m.m1 - m1) < 3.5 / std::sqrt(200000.0));
    CHECK(std::abs(m.m2 - m2) < 3.5 / std::sqrt(200000.0));
}

TEST_CASE("weak error against the one-particle density solve") {
    // independent particles in the double well: ensemble mean of cos X at
    // t = 0.5 against the density solver with the interaction off
    const int order = 32;
    PdeConfig pcfg = default_pde_config(1.0, order);
    pcfg.potential_f = SpectralField(order);
    pcfg.dt = 5e-4;
    pcfg.t_final = 0.5;
    pcfg.sample_dt = 0.5;
    const PdeTrajectory pde = pde_evolve(uniform_density(order), pcfg);
    const double ref = moment_m1(pde.final_state.rho);

    ParticleRunConfig cfg;
    cfg.n = 100000;
    cfg.sigma = 1.0;
    cfg.potential_v = pcfg.potential_v;
    cfg.potential_f = SpectralField(order);
    cfg.dt = 5e-4;
    cfg.t_final = 0.5;
    cfg.sample_dt = 0.5;
    cfg.seed = 2718;
    const ParticleRun run = run_particles(cfg);
    const double se = 0.75 / std::sqrt(100000.0);  // sd(cos) < 0.75 here
    CHECK(std::abs(run.samples.back().m1 - ref) <= 3.0 * se);
}

TEST_CASE("a concentrated start tracks the mean-field moment trajectory") {
    // ensemble and density solver launched from the same bump at pi/2
    const double sigma = 0.6, t_final = 2.0;
    const int order = 64;
    PdeConfig pcfg = default_pde_config(sigma, order);
    pcfg.dt = 1e-3;
    pcfg.t_final = t_final;
    pcfg.sample_dt = t_final;
    const SpectralField rho0 = bump_density(1.5707963267948966, 4.0, order);
    const PdeTrajectory pde = pde_evolve(rho0, pcfg);
    const double ref = moment_m2(pde.final_state.rho);

    ParticleRunConfig cfg;
    cfg.n = 100000;
    cfg.sigma = sigma;
    cfg.potential_v = pcfg.potential_v;
    cfg.potential_f = pcfg.potential_f;
    cfg.dt = 1e-3;
    cfg.t_final = t_final;
    cfg.sample_dt = t_final;
    cfg.seed = 314;
    const ParticleRun run = run_particles(cfg, sample_from_density(cfg.n, to_grid(rho0, 1024), 314));
    CHECK(std::abs(run.samples.back().m2 - ref) <= 0.02);
}

TEST_CASE("error scaling against the mean-field solution") {
    ChaosConfig cfg;
    cfg.n_list = {500, 5000};
    cfg.replicates = 6;
    cfg.sigma = 0.9;
    cfg.t_final = 0.5;
    cfg.dt = 2e-3;
    cfg.seed = 11;
    cfg.pde_order = 32;
    const ChaosReport report = chaos_compare(cfg);
    CHECK(report.points[0].rms_error > report.points[1].rms_error);
    CHECK(report.fitted_exponent < -0.2);
    CHECK(report.fitted_exponent > -0.9);
    CHECK(std::abs(report.pde_m2) < 1e-12);
}
