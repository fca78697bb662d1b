#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mckv/errors.hpp"
#include "mckv/pde.hpp"
#include "mckv/stationary.hpp"

using namespace mckv;

namespace {

SpectralField stationary_state(double sigma, double m2, int order, int grid) {
    return to_spectral(stationary_density(sigma, {0.0, m2}, grid).samples, order);
}

double distance(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d.l2_norm();
}

}  // namespace

TEST_CASE("uniform density is stationary for the pure interaction model") {
    PdeConfig cfg = default_pde_config(1.0, 16);
    cfg.potential_v = SpectralField(16);  // V = 0
    CHECK(pde_rhs(uniform_density(16), cfg).l2_norm() == 0.0);
}

TEST_CASE("rhs vanishes at the self-consistent densities") {
    for (double sigma : {0.6, 0.9}) {
        const PdeConfig cfg = default_pde_config(sigma, 64);
        const FixedPointReport report = find_fixed_points(sigma);
        for (const auto& sol : report.solutions) {
            const SpectralField rho =
                to_spectral(stationary_density(sigma, sol, 1024).samples, 64);
            CHECK(pde_rhs(rho, cfg).l2_norm() <= 1e-6);
        }
    }
}

TEST_CASE("rhs has exactly zero mean") {
    const PdeConfig cfg = default_pde_config(0.7, 32);
    const SpectralField rho = bump_density(1.0, 3.0, 32);
    CHECK(pde_rhs(rho, cfg).coeff(0) == 0.0);
}

TEST_CASE("with zero potentials one step is the exact heat flow") {
    PdeConfig cfg = default_pde_config(0.8, 16);
    cfg.potential_v = SpectralField(16);
    cfg.potential_f = SpectralField(16);
    cfg.dt = 0.05;
    SpectralField rho = uniform_density(16);
    rho.coeff(3) = 0.2;
    rho.coeff(-5) = -0.1;
    const PdeState out = pde_step({rho, 0.0}, cfg);
    const SpectralField exact = heat_semigroup(rho, cfg.sigma * cfg.dt);
    for (int k = -16; k <= 16; ++k) CHECK(out.rho.coeff(k) == exact.coeff(k));
}

TEST_CASE("scheme fixes discrete stationary states") {
    const double sigma = 0.6;
    PdeConfig cfg = default_pde_config(sigma, 64);
    const FixedPointReport report = find_fixed_points(sigma);
    double mstar = 0.0;
    for (const auto& s : report.solutions) mstar = std::max(mstar, s.m2);
    const SpectralField rho = stationary_state(sigma, mstar, 64, 1024);
    const PdeState out = pde_step({rho, 0.0}, cfg);
    CHECK(distance(out.rho, rho) <= 1e-8);  // well under C dt^2
}

TEST_CASE("mass mode is untouched by the step") {
    PdeConfig cfg = default_pde_config(0.5, 32);
    cfg.dt = 1e-2;
    PdeState s{bump_density(0.3, 2.0, 32), 0.0};
    const double mass0 = total_mass(s.rho);
    for (int i = 0; i < 50; ++i) s = pde_step(s, cfg);
    CHECK(total_mass(s.rho) == mass0);
}

TEST_CASE("step halving shows first-order global convergence") {
    const double sigma = 0.7;
    const SpectralField rho0 = bump_density(1.2, 2.5, 32);
    auto solve = [&](double dt) {
        PdeConfig cfg = default_pde_config(sigma, 32);
        cfg.dt = dt;
        cfg.t_final = 1.0;
        cfg.sample_dt = 1.0;
        return pde_evolve(rho0, cfg).final_state.rho;
    };
    const SpectralField ref = solve(1.0 / 8192.0);
    const double e1 = distance(solve(1.0 / 512.0), ref);
    const double e2 = distance(solve(1.0 / 1024.0), ref);
    const double e3 = distance(solve(1.0 / 2048.0), ref);
    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    CHECK(order12 >= 0.9);
    CHECK(order23 >= 0.9);
    CHECK(order12 <= 1.5);
}

TEST_CASE("supercritical flow relaxes to the symmetric state") {
    const double sigma = 0.9;
    PdeConfig cfg = default_pde_config(sigma, 64);
    cfg.t_final = 50.0;
    cfg.sample_dt = 1.0;
    cfg.stationary_rate_tol = 1e-7;
    SpectralField rho0 = uniform_density(64);
    rho0.coeff(-1) += 0.1;  // symmetric-breaking cos-perturbation
    const PdeTrajectory traj = pde_evolve(rho0, cfg);
    const SpectralField target = stationary_state(sigma, 0.0, 64, 1024);
    CHECK(distance(traj.final_state.rho, target) <= 1e-4);
    CHECK(pde_rhs(traj.final_state.rho, cfg).l2_norm() <= 1e-5);

    // monitors: exact mass conservation and positivity within tolerance
    for (const auto& s : traj.samples) {
        CHECK(std::abs(s.mass - 1.0) <= 1e-12);
        CHECK(s.min_value >= -1e-8);
    }
}

TEST_CASE("subcritical flow picks the basin of the initial bump") {
    // the spectral gap at sigma = 0.6 is ~0.06, so the tail needs t ~ 130
    const double sigma = 0.6;
    PdeConfig cfg = default_pde_config(sigma, 64);
    cfg.t_final = 130.0;
    cfg.sample_dt = 1.0;
    cfg.stationary_rate_tol = 1e-7;
    const SpectralField rho0 = bump_density(1.5707963267948966, 4.0, 64);
    const PdeTrajectory traj = pde_evolve(rho0, cfg);

    const FixedPointReport report = find_fixed_points(sigma);
    double mstar = 0.0;
    for (const auto& s : report.solutions) mstar = std::max(mstar, s.m2);
    const SpectralField target = stationary_state(sigma, mstar, 64, 1024);
    CHECK(moment_m2(traj.final_state.rho) > 0.5);
    CHECK(distance(traj.final_state.rho, target) <= 1e-4);
}

TEST_CASE("a stationary start stays put") {
    const double sigma = 0.6;
    PdeConfig cfg = default_pde_config(sigma, 64);
    cfg.t_final = 10.0;
    cfg.sample_dt = 1.0;
    const FixedPointReport report = find_fixed_points(sigma);
    double mstar = 0.0;
    for (const auto& s : report.solutions) mstar = std::max(mstar, s.m2);
    const SpectralField rho0 = stationary_state(sigma, mstar, 64, 1024);
    const PdeTrajectory traj = pde_evolve(rho0, cfg);
    CHECK(distance(traj.final_state.rho, rho0) <= 1e-6);
}

TEST_CASE("non-finite data triggers blow-up detection") {
    PdeConfig cfg = default_pde_config(0.5, 16);
    SpectralField rho0 = uniform_density(16);
    rho0.coeff(3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pde_evolve(rho0, cfg), BlowupError);
}

TEST_CASE("configuration is validated") {
    PdeConfig cfg = default_pde_config(0.5, 16);
    cfg.grid = 32;  // too coarse for dealiasing
    CHECK_THROWS_AS(pde_step({uniform_density(16), 0.0}, cfg), std::invalid_argument);
    PdeConfig bad_mass = default_pde_config(0.5, 16);
    SpectralField rho = uniform_density(16);
    rho.coeff(0) *= 2.0;
    CHECK_THROWS_AS(pde_evolve(rho, bad_mass), std::invalid_argument);
}
