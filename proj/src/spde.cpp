#include "mckv/spde.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mckv/errors.hpp"
#include "mckv/rng.hpp"

namespace mckv {

double CovarianceSpec::amplitude(int k) const { return std::sqrt(eigenvalue(k)); }

double CovarianceSpec::trace() const {
    double sum = 0.0;
    for (double v : lambda_sq) sum += v;
    return sum;
}

CovarianceSpec CovarianceSpec::power_law(int order, double gamma, double c) {
    if (c <= 0.0) throw std::invalid_argument("covariance scale must be positive");
    CovarianceSpec q;
    q.lambda_sq.resize(static_cast<std::size_t>(2 * order + 1));
    for (int k = -order; k <= order; ++k)
        q.lambda_sq[static_cast<std::size_t>(k + order)] =
            c * std::pow(1.0 + static_cast<double>(k) * k, -gamma);
    return q;
}

CovarianceSpec CovarianceSpec::zero(int order) {
    CovarianceSpec q;
    q.lambda_sq.assign(static_cast<std::size_t>(2 * order + 1), 0.0);
    return q;
}

bool CovarianceSpec::satisfies_growth_bound(double c, double gamma) const {
    if (!(gamma < 1.0)) return false;
    const int ord = order();
    for (int k = -ord; k <= ord; ++k) {
        const double bound = c * std::pow(1.0 + static_cast<double>(k) * k, -gamma);
        if (eigenvalue(k) < bound * (1.0 - 1e-12)) return false;
    }
    return true;
}

NoiseStream::NoiseStream(std::uint64_t seed, int order) : seed_(seed), order_(order) {
    const std::size_t n = static_cast<std::size_t>(2 * order + 1);
    base_.resize(n);
    counter_.assign(n, 0);
    spare_.assign(n, 0.0);
    has_spare_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        base_[i] = splitmix64(splitmix64(seed) ^ splitmix64(0xa0761d6478bd642full + i));
}

double NoiseStream::normal(int k) {
    const std::size_t i = static_cast<std::size_t>(k + order_);
    if (has_spare_[i]) {
        has_spare_[i] = 0;
        return spare_[i];
    }
    const GaussPair g = gauss_pair(splitmix64(base_[i] + 0x9e3779b97f4a7c15ull * counter_[i]++));
    spare_[i] = g.second;
    has_spare_[i] = 1;
    return g.first;
}

double ou_update_rate(double wa_k, double rate, double lambda_k, double dt, double gauss) {
    if (rate == 0.0) return wa_k + lambda_k * std::sqrt(dt) * gauss;
    const double decay = std::exp(-rate * dt);
    const double var = lambda_k * lambda_k * (-std::expm1(-2.0 * rate * dt)) / (2.0 * rate);
    return decay * wa_k + std::sqrt(var) * gauss;
}

double ou_update(double wa_k, int k, double lambda_k, double dt, NoiseStream& noise) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    return ou_update_rate(wa_k, static_cast<double>(k) * k, lambda_k, dt, noise.normal(k));
}

SpdeConfig default_spde_config(double sigma, int order) {
    const PdeConfig p = default_pde_config(sigma, order);
    SpdeConfig cfg;
    cfg.sigma = sigma;
    cfg.potential_v = p.potential_v;
    cfg.potential_f = p.potential_f;
    cfg.order = order;
    cfg.grid = p.grid;
    return cfg;
}

double smooth_cutoff(double x, double radius) {
    if (x <= radius) return 1.0;
    if (x >= radius + 1.0) return 0.0;
    const double s = x - radius;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace {

PdeConfig to_pde_config(const SpdeConfig& cfg) {
    PdeConfig p;
    p.sigma = cfg.sigma;
    p.potential_v = cfg.potential_v;
    p.potential_f = cfg.potential_f;
    p.order = cfg.order;
    p.grid = cfg.grid;
    p.dt = cfg.dt;
    p.blowup_limit = cfg.blowup_limit;
    return p;
}

}  // namespace

SpectralField truncated_interaction(const SpectralField& u, const SpectralField& f_prime,
                                    double radius, int grid) {
    if (!(radius > 0.0)) throw std::invalid_argument("cutoff radius must be positive");
    const double nsq = u.l2_norm() * u.l2_norm();
    const double xi = smooth_cutoff(nsq, radius);
    SpectralField w = convolve(f_prime, u);
    GridFunction wg = to_grid(w, grid);
    const GridFunction ug = to_grid(u, grid);
    for (int j = 0; j < grid; ++j) wg.values[j] *= xi * ug.values[j];
    return to_spectral(wg, u.order());
}

SpdeStepper::SpdeStepper(SpdeConfig cfg, CovarianceSpec q)
    : cfg_(std::move(cfg)), q_(std::move(q)), det_(to_pde_config(cfg_)) {
    if (q_.order() != cfg_.order) throw std::invalid_argument("covariance order mismatch");
    noise_std_.resize(static_cast<std::size_t>(2 * cfg_.order + 1));
    for (int k = -cfg_.order; k <= cfg_.order; ++k) {
        const double lam = q_.amplitude(k);
        const double rate = cfg_.sigma * static_cast<double>(k) * k;
        double std_k;
        if (k == 0)
            std_k = lam * std::sqrt(cfg_.dt);
        else
            std_k = lam * std::sqrt((-std::expm1(-2.0 * rate * cfg_.dt)) / (2.0 * rate));
        noise_std_[static_cast<std::size_t>(k + cfg_.order)] = std_k;
    }
}

SpectralField SpdeStepper::nonlinear_term(const SpectralField& u) const {
    if (cfg_.cutoff_radius > 0.0) {
        const double nsq = u.l2_norm() * u.l2_norm();
        const double xi = smooth_cutoff(nsq, cfg_.cutoff_radius);
        if (xi != 1.0) {
            SpectralField w = convolve(det_.f_prime(), u);
            w *= xi;
            w += det_.v_prime();
            GridFunction wg = to_grid(w, cfg_.grid);
            const GridFunction ug = to_grid(u, cfg_.grid);
            for (int j = 0; j < cfg_.grid; ++j) wg.values[j] *= ug.values[j];
            return derivative(to_spectral(wg, cfg_.order));
        }
    }
    return det_.nonlinear_term(u);
}

void SpdeStepper::apply_noise(SpdeState& s, NoiseStream& noise) const {
    // One draw per mode per step, shared between u and the convolution
    // tracker; silent modes draw nothing so a zero covariance leaves the
    // deterministic bits untouched.
    for (int k = -cfg_.order; k <= cfg_.order; ++k) {
        const double std_k = noise_std_[static_cast<std::size_t>(k + cfg_.order)];
        if (std_k == 0.0) continue;
        const double eta = std_k * noise.normal(k);
        s.u.coeff(k) += eta;
        s.wa.coeff(k) = det_.decay(k) * s.wa.coeff(k) + eta;
    }
}

void SpdeStepper::advance(SpdeState& s, NoiseStream& noise) const {
    if (cfg_.cutoff_radius > 0.0) {
        const SpectralField n = nonlinear_term(s.u);
        for (int k = -cfg_.order; k <= cfg_.order; ++k)
            s.u.coeff(k) = det_.decay(k) * s.u.coeff(k) + det_.phi1dt(k) * n.coeff(k);
    } else {
        det_.deterministic_update(s.u);
    }
    apply_noise(s, noise);
    s.t += cfg_.dt;
    if (!s.u.finite() || s.u.l2_norm() > cfg_.blowup_limit) throw BlowupError(s.t);
}

void SpdeStepper::advance_subtracted(SpdeState& s, NoiseStream& noise) const {
    SpectralField utilde = s.u;
    utilde += s.wa;
    const SpectralField n = nonlinear_term(utilde);
    for (int k = -cfg_.order; k <= cfg_.order; ++k)
        s.u.coeff(k) = det_.decay(k) * s.u.coeff(k) + det_.phi1dt(k) * n.coeff(k);
    for (int k = -cfg_.order; k <= cfg_.order; ++k) {
        const double std_k = noise_std_[static_cast<std::size_t>(k + cfg_.order)];
        if (std_k == 0.0) continue;
        const double eta = std_k * noise.normal(k);
        s.wa.coeff(k) = det_.decay(k) * s.wa.coeff(k) + eta;
    }
    s.t += cfg_.dt;
    if (!s.u.finite() || s.u.l2_norm() > cfg_.blowup_limit) throw BlowupError(s.t);
}

SpdeState spde_step(const SpdeState& s, const SpdeConfig& cfg, const CovarianceSpec& q,
                    NoiseStream& noise) {
    const SpdeStepper stepper(cfg, q);
    SpdeState out = s;
    stepper.advance(out, noise);
    return out;
}

SpdeTrajectory spde_evolve(const SpectralField& u0, const SpdeConfig& cfg,
                           const CovarianceSpec& q, std::uint64_t seed) {
    const SpdeStepper stepper(cfg, q);
    NoiseStream noise(seed, cfg.order);
    SpdeState state{u0.truncated(cfg.order), SpectralField(cfg.order), 0.0};

    const long long n_steps = std::llround(cfg.t_final / cfg.dt);
    long long sample_every = std::llround(cfg.sample_dt / cfg.dt);
    if (sample_every < 1) sample_every = 1;

    SpdeTrajectory traj;
    auto record = [&] {
        traj.samples.push_back({state.t, moment_m1(state.u), moment_m2(state.u),
                                state.u.l2_norm(), total_mass(state.u)});
    };
    record();
    for (long long n = 1; n <= n_steps; ++n) {
        stepper.advance(state, noise);
        if (n % sample_every == 0 || n == n_steps) record();
    }
    traj.final_state = state;
    return traj;
}

Control build_control(const SpectralField& y0, const SpectralField& y1, double t_final,
                      const CovarianceSpec& q, const SpdeConfig& cfg, int num_steps) {
    if (num_steps < 1) throw std::invalid_argument("need at least one control step");
    if (!(t_final > 0.0)) throw std::invalid_argument("horizon must be positive");
    const int order = cfg.order;
    const PdeStepper det(to_pde_config(cfg));

    SpectralField rate = y1.truncated(order);
    rate -= y0.truncated(order);
    rate *= 1.0 / t_final;  // d/dt of the straight-line path

    Control control;
    control.t_final = t_final;
    control.samples.reserve(static_cast<std::size_t>(num_steps) + 1);
    for (int i = 0; i <= num_steps; ++i) {
        const double t = t_final * i / num_steps;
        SpectralField alpha = y0.truncated(order);
        alpha *= (t_final - t) / t_final;
        SpectralField tail = y1.truncated(order);
        tail *= t / t_final;
        alpha += tail;

        SpectralField beta = rate;
        beta -= det.nonlinear_term(alpha);
        for (int k = 1; k <= order; ++k) {
            const double lap = cfg.sigma * static_cast<double>(k) * k;
            beta.coeff(k) += lap * alpha.coeff(k);
            beta.coeff(-k) += lap * alpha.coeff(-k);
        }

        SpectralField f(order);
        const double scale = std::max(1.0, beta.l2_norm());
        for (int k = -order; k <= order; ++k) {
            const double lam = q.amplitude(k);
            if (lam == 0.0) {
                if (std::abs(beta.coeff(k)) > 1e-12 * scale)
                    throw NumericalError("control requires a mode with zero noise eigenvalue");
                continue;
            }
            f.coeff(k) = beta.coeff(k) / lam;
        }
        control.samples.push_back(std::move(f));
    }
    return control;
}

ControlledRun run_controlled(const SpectralField& y0, const SpectralField& target,
                             const Control& control, const SpdeConfig& cfg,
                             const CovarianceSpec& q) {
    const int order = cfg.order;
    const int n = static_cast<int>(control.samples.size()) - 1;
    if (n < 1) throw std::invalid_argument("control must hold at least two time samples");
    const double dt = control.t_final / n;
    const PdeStepper det(to_pde_config(cfg));

    std::vector<double> decay(static_cast<std::size_t>(order) + 1);
    std::vector<double> p1(decay.size()), p2(decay.size());
    for (int k = 0; k <= order; ++k) {
        const double z = -cfg.sigma * dt * k * k;
        decay[k] = std::exp(z);
        p1[k] = dt * phi1(z);
        p2[k] = dt * phi2(z);
    }

    auto forcing = [&](int i) {
        SpectralField g(order);
        for (int k = -order; k <= order; ++k)
            g.coeff(k) = q.amplitude(k) * control.samples[static_cast<std::size_t>(i)].coeff(k);
        return g;
    };

    SpectralField y = y0.truncated(order);
    SpectralField qf_now = forcing(0);
    for (int i = 0; i < n; ++i) {
        // ETD2RK predictor-corrector
        SpectralField g0 = det.nonlinear_term(y);
        g0 += qf_now;
        SpectralField pred(order);
        for (int k = -order; k <= order; ++k) {
            const std::size_t a = static_cast<std::size_t>(std::abs(k));
            pred.coeff(k) = decay[a] * y.coeff(k) + p1[a] * g0.coeff(k);
        }
        SpectralField qf_next = forcing(i + 1);
        SpectralField g1 = det.nonlinear_term(pred);
        g1 += qf_next;
        for (int k = -order; k <= order; ++k) {
            const std::size_t a = static_cast<std::size_t>(std::abs(k));
            y.coeff(k) = pred.coeff(k) + p2[a] * (g1.coeff(k) - g0.coeff(k));
        }
        qf_now = std::move(qf_next);
        if (!y.finite()) throw BlowupError(dt * (i + 1));
    }

    SpectralField diff = y;
    diff -= target.truncated(order);
    return {y, diff.l2_norm()};
}

ErgodicityReport ergodicity_probe(std::span<const SpectralField> inits, const SpdeConfig& cfg,
                                  const CovarianceSpec& q, double window_start,
                                  std::uint64_t seed) {
    if (inits.size() < 2) throw std::invalid_argument("probe needs at least two initial data");
    const SpdeStepper stepper(cfg, q);
    const long long n_steps = std::llround(cfg.t_final / cfg.dt);
    long long sample_every = std::llround(cfg.sample_dt / cfg.dt);
    if (sample_every < 1) sample_every = 1;

    const std::size_t n_traj = inits.size();
    std::vector<std::vector<SpectralField>> snaps(n_traj);
    ErgodicityReport report;

    // Every trajectory re-creates the stream from the same seed and so sees
    // the identical noise realization.
    auto run_one = [&](std::size_t idx) {
        NoiseStream noise(seed, cfg.order);
        SpdeState state{inits[idx].truncated(cfg.order), SpectralField(cfg.order), 0.0};
        snaps[idx].push_back(state.u);
        for (long long n = 1; n <= n_steps; ++n) {
            stepper.advance(state, noise);
            if (n % sample_every == 0 || n == n_steps) snaps[idx].push_back(state.u);
        }
    };

    {
        std::vector<std::thread> pool;
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t workers = std::min<std::size_t>(hw, n_traj);
        std::vector<std::size_t> next(1, 0);
        std::vector<std::exception_ptr> errors(n_traj);
        std::mutex mtx;
        auto worker = [&] {
            for (;;) {
                std::size_t idx;
                {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (next[0] >= n_traj) return;
                    idx = next[0]++;
                }
                try {
                    run_one(idx);
                } catch (...) {
                    errors[idx] = std::current_exception();
                }
            }
        };
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    const std::size_t n_samples = snaps[0].size();
    report.times.resize(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
        report.times[s] = std::min(static_cast<double>(s) * sample_every * cfg.dt, cfg.t_final);

    for (std::size_t i = 0; i < n_traj; ++i) {
        for (std::size_t j = i + 1; j < n_traj; ++j) {
            std::vector<double> dist(n_samples);
            for (std::size_t s = 0; s < n_samples; ++s) {
                SpectralField d = snaps[i][s];
                d -= snaps[j][s];
                dist[s] = d.l2_norm();
            }
            report.pair_distance.push_back(std::move(dist));
        }
    }

    for (std::size_t i = 0; i < n_traj; ++i) {
        double sm1 = 0.0, sm2 = 0.0, sl2 = 0.0;
        long long count = 0;
        for (std::size_t s = 0; s < n_samples; ++s) {
            if (report.times[s] < window_start) continue;
            const SpectralField& u = snaps[i][s];
            sm1 += moment_m1(u);
            sm2 += moment_m2(u);
            const double nn = u.l2_norm();
            sl2 += nn * nn;
            ++count;
        }
        if (count == 0) throw std::invalid_argument("averaging window is empty");
        report.window_averages.push_back(
            {sm1 / count, sm2 / count, sl2 / count});
    }
    return report;
}

}  // namespace mckv
