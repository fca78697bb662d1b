#include "mckv/particles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mckv/pde.hpp"
#include "mckv/rng.hpp"

namespace mckv {

namespace {

constexpr double sqrt_pi = 1.7724538509055160272981674833411;
constexpr double sqrt_two_pi = 2.5066282746310005024157652848110;
constexpr int kChunk = 8192;  // fixed summation block, keeps reductions thread-invariant

double wrap(double x) {
    // steps move positions by O(sqrt(dt)), so one period correction almost
    // always suffices; fall back to fmod for oversized jumps
    if (x >= two_pi) {
        x -= two_pi;
        if (x >= two_pi) x = std::fmod(x, two_pi);
    } else if (x < 0.0) {
        x += two_pi;
        if (x < 0.0) {
            x = std::fmod(x, two_pi);
            if (x < 0.0) x += two_pi;
        }
    }
    return x;
}

int top_harmonic(const SpectralField& f) {
    for (int k = f.order(); k >= 1; --k)
        if (f.coeff(k) != 0.0 || f.coeff(-k) != 0.0) return k;
    return 0;
}

// Trigonometric-polynomial evaluation context for the drift.
struct DriftKernel {
    SpectralField vp, fp;  // V', F'
    int deg_v, deg_f, deg;

    DriftKernel(const SpectralField& v, const SpectralField& f)
        : vp(derivative(v)), fp(derivative(f)) {
        deg_v = top_harmonic(vp);
        deg_f = top_harmonic(fp);
        deg = std::max(deg_v, deg_f);
    }

    // drift at a particle with sin/cos values (s, c), given ensemble moments
    // mc[j], ms[j] = mean cos((j+1)X), mean sin((j+1)X).
    double eval(double s, double c, const std::vector<double>& mc,
                const std::vector<double>& ms) const {
        double out = -vp.coeff(0) / sqrt_two_pi + fp.coeff(0) / sqrt_two_pi;
        double cj = c, sj = s;
        for (int j = 1; j <= deg; ++j) {
            if (j <= deg_v)
                out -= (vp.coeff(j) * sj + vp.coeff(-j) * cj) / sqrt_pi;
            if (j <= deg_f) {
                const double avg_sin = ms[j - 1] * cj - mc[j - 1] * sj;
                const double avg_cos = mc[j - 1] * cj + ms[j - 1] * sj;
                out += (fp.coeff(j) * avg_sin + fp.coeff(-j) * avg_cos) / sqrt_pi;
            }
            const double cn = cj * c - sj * s;
            sj = sj * c + cj * s;
            cj = cn;
        }
        return out;
    }
};

// Empirical moments mean cos(jX), mean sin(jX) for j = 1..deg, accumulated in
// fixed-size blocks so the result does not depend on the thread layout.
void harmonic_moments(const std::vector<double>& sin_x, const std::vector<double>& cos_x, int deg,
                      std::vector<double>& mc, std::vector<double>& ms, int threads) {
    const int n = static_cast<int>(sin_x.size());
    mc.assign(static_cast<std::size_t>(deg), 0.0);
    ms.assign(static_cast<std::size_t>(deg), 0.0);
    if (deg == 0 || n == 0) return;
    const int blocks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(blocks) * 2 * deg, 0.0);

    auto do_block = [&](int b) {
        const int lo = b * kChunk;
        const int hi = std::min(n, lo + kChunk);
        double* acc = partial.data() + static_cast<std::size_t>(b) * 2 * deg;
        for (int i = lo; i < hi; ++i) {
            const double s = sin_x[i], c = cos_x[i];
            double cj = c, sj = s;
            for (int j = 0; j < deg; ++j) {
                acc[2 * j] += cj;
                acc[2 * j + 1] += sj;
                const double cn = cj * c - sj * s;
                sj = sj * c + cj * s;
                cj = cn;
            }
        }
    };

    if (threads > 1 && blocks > 1) {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) do_block(b);
            });
        for (auto& th : pool) th.join();
    } else {
        for (int b = 0; b < blocks; ++b) do_block(b);
    }
    for (int b = 0; b < blocks; ++b) {
        const double* acc = partial.data() + static_cast<std::size_t>(b) * 2 * deg;
        for (int j = 0; j < deg; ++j) {
            mc[j] += acc[2 * j];
            ms[j] += acc[2 * j + 1];
        }
    }
    for (int j = 0; j < deg; ++j) {
        mc[j] /= n;
        ms[j] /= n;
    }
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

ParticleEnsemble sample_uniform(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one particle");
    ParticleEnsemble e;
    e.seed = seed;
    e.positions.resize(static_cast<std::size_t>(n));
    const std::uint64_t base = splitmix64(seed ^ 0x5851f42d4c957f2dull);
    for (int i = 0; i < n; ++i)
        e.positions[i] = two_pi * uniform_from_bits(splitmix64(base + static_cast<std::uint64_t>(i)));
    return e;
}

ParticleEnsemble sample_from_density(int n, const GridFunction& density, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one particle");
    const int m = density.size();
    // piecewise-linear CDF on the periodic grid
    std::vector<double> cdf(static_cast<std::size_t>(m) + 1, 0.0);
    for (int j = 0; j < m; ++j) {
        const double v = std::max(density.values[j], 0.0);
        cdf[j + 1] = cdf[j] + v;
    }
    const double total = cdf[m];
    if (!(total > 0.0)) throw std::invalid_argument("density must have positive mass");
    for (auto& v : cdf) v /= total;

    ParticleEnsemble e;
    e.seed = seed;
    e.positions.resize(static_cast<std::size_t>(n));
    const std::uint64_t base = splitmix64(seed ^ 0x2545f4914f6cdd1dull);
    const double h = two_pi / m;
    for (int i = 0; i < n; ++i) {
        const double u = uniform_from_bits(splitmix64(base + static_cast<std::uint64_t>(i)));
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int j = static_cast<int>(it - cdf.begin()) - 1;
        j = std::clamp(j, 0, m - 1);
        const double seg = cdf[j + 1] - cdf[j];
        const double frac = seg > 0.0 ? (u - cdf[j]) / seg : 0.0;
        e.positions[i] = wrap(h * (j + frac));
    }
    return e;
}

std::vector<double> mean_field_drift(const ParticleEnsemble& e, const SpectralField& v,
                                     const SpectralField& f) {
    const DriftKernel kernel(v, f);
    const int n = e.size();
    std::vector<double> sin_x(static_cast<std::size_t>(n)), cos_x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sin_x[i] = std::sin(e.positions[i]);
        cos_x[i] = std::cos(e.positions[i]);
    }
    std::vector<double> mc, ms;
    harmonic_moments(sin_x, cos_x, kernel.deg_f, mc, ms, 1);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = kernel.eval(sin_x[i], cos_x[i], mc, ms);
    return out;
}

std::vector<double> mean_field_drift_pairwise(const ParticleEnsemble& e, const SpectralField& v,
                                              const SpectralField& f) {
    const SpectralField vp = derivative(v);
    const SpectralField fp = derivative(f);
    const int n = e.size();
    auto eval = [](const SpectralField& g, double x) {
        double out = g.coeff(0) / sqrt_two_pi;
        for (int k = 1; k <= g.order(); ++k)
            out += (g.coeff(k) * std::sin(k * x) + g.coeff(-k) * std::cos(k * x)) / sqrt_pi;
        return out;
    };
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double inter = 0.0;
        for (int l = 0; l < n; ++l) inter += eval(fp, e.positions[l] - e.positions[i]);
        out[i] = -eval(vp, e.positions[i]) + inter / n;
    }
    return out;
}

EmpiricalMoments empirical_moments(const ParticleEnsemble& e) {
    std::vector<double> sin_x(e.positions.size()), cos_x(e.positions.size());
    for (std::size_t i = 0; i < e.positions.size(); ++i) {
        sin_x[i] = std::sin(e.positions[i]);
        cos_x[i] = std::cos(e.positions[i]);
    }
    std::vector<double> mc, ms;
    harmonic_moments(sin_x, cos_x, 1, mc, ms, 1);
    return {mc[0], ms[0]};
}

namespace {

// Shared single-step kernel; sin/cos arrays hold the trig values of the
// current positions and are refreshed in place.
void step_in_place(std::vector<double>& pos, std::vector<double>& sin_x,
                   std::vector<double>& cos_x, const DriftKernel& kernel, double sigma, double dt,
                   std::uint64_t seed, std::uint64_t step, int threads) {
    const int n = static_cast<int>(pos.size());
    std::vector<double> mc, ms;
    harmonic_moments(sin_x, cos_x, kernel.deg_f, mc, ms, threads);
    const double noise_scale = std::sqrt(2.0 * sigma * dt);
    const std::uint64_t base = splitmix64(seed ^ (0x9e3779b97f4a7c15ull * (step + 1)));

    auto do_range = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            // one counter-based substream per particle per step
            SplitMix64 stream{base + 0xd1342543de82ef95ull * static_cast<std::uint64_t>(i)};
            const double g = ziggurat_normal(stream);
            const double drift = kernel.eval(sin_x[i], cos_x[i], mc, ms);
            const double x = wrap(pos[i] + drift * dt + noise_scale * g);
            pos[i] = x;
            sin_x[i] = std::sin(x);
            cos_x[i] = std::cos(x);
        }
    };
    if (threads > 1 && n > 2 * kChunk) {
        const int blocks = (n + kChunk - 1) / kChunk;
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1))
                    do_range(b * kChunk, std::min(n, (b + 1) * kChunk));
            });
        for (auto& th : pool) th.join();
    } else {
        do_range(0, n);
    }
}

}  // namespace

ParticleEnsemble em_step(const ParticleEnsemble& e, const SpectralField& v,
                         const SpectralField& f, double sigma, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
    const DriftKernel kernel(v, f);
    ParticleEnsemble out = e;
    std::vector<double> sin_x(out.positions.size()), cos_x(out.positions.size());
    for (std::size_t i = 0; i < out.positions.size(); ++i) {
        sin_x[i] = std::sin(out.positions[i]);
        cos_x[i] = std::cos(out.positions[i]);
    }
    step_in_place(out.positions, sin_x, cos_x, kernel, sigma, dt, out.seed, out.step_index, 1);
    out.step_index += 1;
    out.t += dt;
    return out;
}

ParticleRun run_particles(const ParticleRunConfig& cfg, const ParticleEnsemble& init) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const DriftKernel kernel(cfg.potential_v, cfg.potential_f);
    const int threads = resolve_threads(cfg.threads);

    ParticleEnsemble state = init;
    const int n = state.size();
    std::vector<double> sin_x(static_cast<std::size_t>(n)), cos_x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sin_x[i] = std::sin(state.positions[i]);
        cos_x[i] = std::cos(state.positions[i]);
    }

    const long long n_steps = std::llround(cfg.t_final / cfg.dt);
    long long sample_every = std::llround(cfg.sample_dt / cfg.dt);
    if (sample_every < 1) sample_every = 1;

    ParticleRun run;
    std::vector<double> mc, ms;
    auto record = [&] {
        harmonic_moments(sin_x, cos_x, 1, mc, ms, threads);
        run.samples.push_back({state.t, mc[0], ms[0]});
    };
    record();
    for (long long s = 1; s <= n_steps; ++s) {
        step_in_place(state.positions, sin_x, cos_x, kernel, cfg.sigma, cfg.dt, state.seed,
                      state.step_index, threads);
        state.step_index += 1;
        state.t += cfg.dt;
        if (s % sample_every == 0 || s == n_steps) record();
    }
    run.final_state = std::move(state);
    return run;
}

ParticleRun run_particles(const ParticleRunConfig& cfg) {
    return run_particles(cfg, sample_uniform(cfg.n, cfg.seed));
}

ChaosReport chaos_compare(const ChaosConfig& cfg) {
    if (cfg.n_list.empty()) throw std::invalid_argument("need at least one ensemble size");
    if (cfg.replicates < 1) throw std::invalid_argument("need at least one replicate");

    PdeConfig pde_cfg = default_pde_config(cfg.sigma, cfg.pde_order);
    pde_cfg.dt = cfg.dt;
    pde_cfg.t_final = cfg.t_final;
    pde_cfg.sample_dt = cfg.t_final;
    const PdeTrajectory pde = pde_evolve(uniform_density(cfg.pde_order), pde_cfg);
    const double m1_ref = moment_m1(pde.final_state.rho);
    const double m2_ref = moment_m2(pde.final_state.rho);

    ChaosReport report;
    report.pde_m1 = m1_ref;
    report.pde_m2 = m2_ref;

    ParticleRunConfig prc;
    prc.sigma = cfg.sigma;
    prc.potential_v = pde_cfg.potential_v;
    prc.potential_f = pde_cfg.potential_f;
    prc.dt = cfg.dt;
    prc.t_final = cfg.t_final;
    prc.sample_dt = cfg.t_final;
    prc.threads = cfg.threads;

    for (int n : cfg.n_list) {
        ChaosPoint point;
        point.n = n;
        double sq = 0.0;
        for (int r = 0; r < cfg.replicates; ++r) {
            prc.n = n;
            prc.seed = splitmix64(cfg.seed + 0x100000001b3ull * static_cast<std::uint64_t>(r) +
                                  static_cast<std::uint64_t>(n));
            const ParticleRun run = run_particles(prc);
            const auto& last = run.samples.back();
            const double err = std::hypot(last.m1 - m1_ref, last.m2 - m2_ref);
            point.errors.push_back(err);
            sq += err * err;
        }
        point.rms_error = std::sqrt(sq / cfg.replicates);
        report.points.push_back(std::move(point));
    }

    // least-squares slope of log rms against log n
    const int np = static_cast<int>(report.points.size());
    if (np >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : report.points) {
            const double x = std::log(static_cast<double>(p.n));
            const double y = std::log(p.rms_error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        report.fitted_exponent = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    } else {
        report.fitted_exponent = 0.0;
    }
    return report;
}

}  // namespace mckv
