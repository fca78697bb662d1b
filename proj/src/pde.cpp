#include "mckv/pde.hpp"

#include <cmath>
#include <stdexcept>

#include "mckv/errors.hpp"

namespace mckv {

namespace {
constexpr double sqrt_pi = 1.7724538509055160272981674833411;
constexpr double sqrt_two_pi = 2.5066282746310005024157652848110;
}  // namespace

double phi1(double z) {
    if (std::abs(z) < 1e-4)
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-4)
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
    return (std::expm1(z) - z) / (z * z);
}

PdeConfig default_pde_config(double sigma, int order) {
    PdeConfig cfg;
    cfg.sigma = sigma;
    cfg.order = order;
    cfg.grid = 4 * order;
    cfg.potential_v = sqrt_pi * SpectralField::basis(-2, order);   // cos 2x
    cfg.potential_f = -sqrt_pi * SpectralField::basis(-1, order);  // -cos x
    return cfg;
}

double moment_m1(const SpectralField& rho) { return sqrt_pi * rho.coeff(-1); }
double moment_m2(const SpectralField& rho) { return sqrt_pi * rho.coeff(1); }
double total_mass(const SpectralField& rho) { return sqrt_two_pi * rho.coeff(0); }

SpectralField uniform_density(int order) {
    return (1.0 / sqrt_two_pi) * SpectralField::basis(0, order);
}

SpectralField bump_density(double center, double kappa, int order, int grid) {
    if (grid <= 0) grid = 4 * order;
    GridFunction g;
    g.values.resize(static_cast<std::size_t>(grid));
    for (int j = 0; j < grid; ++j)
        g.values[j] = std::exp(kappa * (std::cos(GridFunction::node(j, grid) - center) - 1.0));
    SpectralField f = to_spectral(g, order);
    f *= 1.0 / total_mass(f);
    return f;
}

PdeStepper::PdeStepper(PdeConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.order < 1) throw std::invalid_argument("order must be positive");
    if (cfg_.grid <= 3 * cfg_.order)
        throw std::invalid_argument("product grid must exceed 3x the truncation order");
    if (!(cfg_.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg_.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    vp_ = derivative(cfg_.potential_v.truncated(cfg_.order));
    fp_ = derivative(cfg_.potential_f.truncated(cfg_.order));
    decay_.resize(static_cast<std::size_t>(cfg_.order) + 1);
    phi1dt_.resize(static_cast<std::size_t>(cfg_.order) + 1);
    for (int k = 0; k <= cfg_.order; ++k) {
        const double z = -cfg_.sigma * cfg_.dt * k * k;
        decay_[k] = std::exp(z);
        phi1dt_[k] = cfg_.dt * phi1(z);
    }
}

SpectralField PdeStepper::nonlinear_term(const SpectralField& rho) const {
    SpectralField w = convolve(fp_, rho);
    w += vp_;
    GridFunction wg = to_grid(w, cfg_.grid);
    const GridFunction rg = to_grid(rho, cfg_.grid);
    for (int j = 0; j < cfg_.grid; ++j) wg.values[j] *= rg.values[j];
    return derivative(to_spectral(wg, cfg_.order));
}

void PdeStepper::deterministic_update(SpectralField& rho) const {
    const SpectralField n = nonlinear_term(rho);
    for (int k = -cfg_.order; k <= cfg_.order; ++k) {
        const std::size_t a = static_cast<std::size_t>(std::abs(k));
        rho.coeff(k) = decay_[a] * rho.coeff(k) + phi1dt_[a] * n.coeff(k);
    }
}

void PdeStepper::advance(PdeState& s) const {
    deterministic_update(s.rho);
    s.t += cfg_.dt;
    const double norm = s.rho.l2_norm();
    if (!std::isfinite(norm) || norm > cfg_.blowup_limit) throw BlowupError(s.t);
}

SpectralField pde_rhs(const SpectralField& rho, const PdeConfig& cfg) {
    const PdeStepper stepper(cfg);
    SpectralField out = stepper.nonlinear_term(rho);
    for (int k = 1; k <= cfg.order; ++k) {
        const double lam = cfg.sigma * k * k;
        out.coeff(k) -= lam * rho.coeff(k);
        out.coeff(-k) -= lam * rho.coeff(-k);
    }
    return out;
}

PdeState pde_step(const PdeState& s, const PdeConfig& cfg) {
    const PdeStepper stepper(cfg);
    PdeState out = s;
    stepper.advance(out);
    return out;
}

PdeTrajectory pde_evolve(const SpectralField& rho0, const PdeConfig& cfg) {
    if (std::abs(total_mass(rho0) - 1.0) > 1e-8)
        throw std::invalid_argument("initial density must have unit mass");
    const PdeStepper stepper(cfg);
    PdeTrajectory traj;
    PdeState state{rho0.truncated(cfg.order), 0.0};

    const long long n_steps = std::llround(cfg.t_final / cfg.dt);
    long long sample_every = std::llround(cfg.sample_dt / cfg.dt);
    if (sample_every < 1) sample_every = 1;

    SpectralField prev = state.rho;
    auto record = [&](double rate) {
        const GridFunction g = to_grid(state.rho, cfg.grid);
        const double res = pde_rhs(state.rho, cfg).l2_norm();
        traj.samples.push_back({state.t, moment_m1(state.rho), moment_m2(state.rho),
                                total_mass(state.rho), g.min_value(), res, rate});
        if (cfg.snapshot_grid > 0)
            traj.snapshots.emplace_back(state.t, to_grid(state.rho, cfg.snapshot_grid));
    };
    record(0.0);

    for (long long n = 1; n <= n_steps; ++n) {
        prev = state.rho;
        stepper.advance(state);
        SpectralField diff = state.rho;
        diff -= prev;
        const double rate = diff.l2_norm() / cfg.dt;
        if (n % sample_every == 0 || n == n_steps) record(rate);
        if (cfg.stationary_rate_tol > 0.0 && rate < cfg.stationary_rate_tol) {
            traj.stationary = true;
            if (n % sample_every != 0 && n != n_steps) record(rate);
            break;
        }
    }
    traj.final_state = state;
    return traj;
}

}  // namespace mckv
