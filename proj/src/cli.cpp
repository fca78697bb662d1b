#include "mckv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mckv/bessel.hpp"
#include "mckv/errors.hpp"
#include "mckv/particles.hpp"
#include "mckv/pde.hpp"
#include "mckv/rng.hpp"
#include "mckv/spde.hpp"
#include "mckv/stationary.hpp"

namespace mckv::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Relative output paths honor MCKV_OUT_DIR when it is set.
std::filesystem::path resolve_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("MCKV_OUT_DIR")) p = std::filesystem::path(dir) / p;
    }
    return p;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& out_path, std::ostream& fallback) : stream_(&fallback) {
        if (!out_path.empty()) {
            const auto p = resolve_out(out_path);
            if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
            file_.open(p);
            if (!file_) throw std::invalid_argument("cannot open output file " + p.string());
            stream_ = &file_;
        }
    }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i)
            *stream_ << (i ? "," : "") << names[i];
        *stream_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            *stream_ << (i ? "," : "") << fmt(values[i]);
        *stream_ << "\n";
    }

  private:
    std::ofstream file_;
    std::ostream* stream_;
};

void emit_json(const ordered_json& j, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << j.dump(2) << "\n";
        return;
    }
    const auto p = resolve_out(out_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw std::invalid_argument("cannot open output file " + p.string());
    f << j.dump(2) << "\n";
}

CovarianceSpec make_covariance(int order, double gamma, double c) {
    return c == 0.0 ? CovarianceSpec::zero(order) : CovarianceSpec::power_law(order, gamma, c);
}

SpectralField make_init(const std::string& spec, double sigma, int order, int grid) {
    if (spec == "uniform") return uniform_density(order);
    if (spec.rfind("bump:", 0) == 0) {
        const std::string rest = spec.substr(5);
        double x0 = 0.0, kappa = 4.0;
        const auto colon = rest.find(':');
        x0 = std::stod(rest.substr(0, colon));
        if (colon != std::string::npos) kappa = std::stod(rest.substr(colon + 1));
        return bump_density(x0, kappa, order, grid);
    }
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream f(spec.substr(5));
        if (!f) throw std::invalid_argument("cannot read initial data file");
        GridFunction g;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            const std::string value = line.substr(comma + 1);
            try {
                g.values.push_back(std::stod(value));
            } catch (const std::exception&) {
                continue;  // header row
            }
        }
        if (g.size() < 2 * order + 2)
            throw std::invalid_argument("initial data file holds too few samples");
        SpectralField out = to_spectral(g, order);
        out *= 1.0 / total_mass(out);
        return out;
    }
    if (spec == "stationary" || spec == "stationary+" || spec == "stationary-") {
        const FixedPointReport report = find_fixed_points(sigma);
        double m2 = 0.0;
        for (const auto& s : report.solutions) m2 = std::max(m2, s.m2);
        if (spec == "stationary-") m2 = -m2;
        const StationaryDensity den = stationary_density(sigma, {0.0, m2}, grid);
        return to_spectral(den.samples, order);
    }
    throw std::invalid_argument("unknown initial condition '" + spec + "'");
}

struct Dispatch {
    std::ostream& out;
    int exit_code = 0;
};

void cmd_sigma_c(Dispatch& d, double tol) {
    const RootResult r = find_critical_sigma(tol);
    ordered_json j;
    j["config"] = {{"tol", tol}};
    j["sigma_c"] = r.root;
    j["residual"] = r.residual;
    j["iterations"] = r.iterations;
    d.out << j.dump(2) << "\n";
}

ordered_json report_to_json(const FixedPointReport& report) {
    ordered_json j;
    j["sigma"] = report.sigma;
    j["count"] = report.count;
    ordered_json sols = ordered_json::array();
    for (std::size_t i = 0; i < report.solutions.size(); ++i) {
        sols.push_back({{"m1", report.solutions[i].m1},
                        {"m2", report.solutions[i].m2},
                        {"residual", report.residuals[i]}});
    }
    j["solutions"] = sols;
    j["max_axis_violation"] = report.max_axis_violation;
    j["warnings"] = report.warnings;
    return j;
}

void cmd_stationary(Dispatch& d, double sigma, double tol, const std::vector<double>& scan,
                    const std::string& out_path, const std::string& density_path) {
    if (!density_path.empty()) {
        const FixedPointReport report = find_fixed_points(sigma, tol);
        double m2 = 0.0;
        for (const auto& s : report.solutions) m2 = std::max(m2, s.m2);
        const StationaryDensity den = stationary_density(sigma, {0.0, m2}, 1024);
        CsvWriter csv(density_path == "-" ? "" : density_path, d.out);
        csv.header({"x", "value"});
        for (int j = 0; j < den.samples.size(); ++j)
            csv.row({GridFunction::node(j, den.samples.size()), den.samples.values[j]});
        return;
    }
    if (!scan.empty()) {
        if (scan.size() != 3) throw std::invalid_argument("--scan takes MIN MAX N");
        const int n = static_cast<int>(scan[2]);
        if (n < 1) throw std::invalid_argument("scan needs at least one point");
        CsvWriter csv(out_path, d.out);
        csv.header({"sigma", "count", "m_star"});
        for (int i = 0; i < n; ++i) {
            const double s = n == 1 ? scan[0] : scan[0] + (scan[1] - scan[0]) * i / (n - 1);
            const FixedPointReport report = find_fixed_points(s, tol);
            double mstar = 0.0;
            for (const auto& sol : report.solutions) mstar = std::max(mstar, sol.m2);
            csv.row({s, static_cast<double>(report.count), mstar});
        }
        return;
    }
    const FixedPointReport report = find_fixed_points(sigma, tol);
    ordered_json j;
    j["config"] = {{"sigma", sigma}, {"tol", tol}};
    j.update(report_to_json(report));
    emit_json(j, out_path, d.out);
}

void cmd_phase_diagram(Dispatch& d, double lo, double hi, int n, const std::string& out_path) {
    CsvWriter csv(out_path, d.out);
    csv.header({"sigma", "count", "m_star_on_M2", "zeta_prime0", "f_c"});
    for (int i = 0; i < n; ++i) {
        const double s = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        const FixedPointReport report = find_fixed_points(s);
        double mstar = 0.0;
        for (const auto& sol : report.solutions) mstar = std::max(mstar, sol.m2);
        csv.row({s, static_cast<double>(report.count), mstar, sine_residual_slope(s),
                 critical_noise_function(s)});
    }
}

void cmd_pde(Dispatch& d, double sigma, const std::string& init, double t_final, double dt,
             int order, const std::string& out_path, const std::string& snapshot_path) {
    PdeConfig cfg = default_pde_config(sigma, order);
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.sample_dt = std::max(dt, t_final / 500.0);
    if (!snapshot_path.empty()) cfg.snapshot_grid = 256;
    const SpectralField rho0 = make_init(init, sigma, order, cfg.grid);
    const PdeTrajectory traj = pde_evolve(rho0, cfg);

    CsvWriter csv(out_path, d.out);
    csv.header({"t", "m1", "m2", "mass", "min_value", "l2_residual"});
    for (const auto& s : traj.samples)
        csv.row({s.t, s.m1, s.m2, s.mass, s.min_value, s.l2_residual});

    if (!snapshot_path.empty()) {
        CsvWriter snap(snapshot_path, d.out);
        snap.header({"t", "x", "rho"});
        for (const auto& [t, g] : traj.snapshots)
            for (int j = 0; j < g.size(); ++j)
                snap.row({t, GridFunction::node(j, g.size()), g.values[j]});
    }
}

void cmd_spde(Dispatch& d, double sigma, double gamma, double c, std::uint64_t seed,
              const std::string& init, double t_final, double dt, int order, double cutoff,
              const std::string& out_path) {
    SpdeConfig cfg = default_spde_config(sigma, order);
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.sample_dt = std::max(dt, t_final / 500.0);
    cfg.cutoff_radius = cutoff;
    const CovarianceSpec q = make_covariance(order, gamma, c);
    const SpectralField u0 = make_init(init, sigma, order, cfg.grid);
    const SpdeTrajectory traj = spde_evolve(u0, cfg, q, seed);

    CsvWriter csv(out_path, d.out);
    csv.header({"t", "m1", "m2", "l2_norm", "mass_mode"});
    for (const auto& s : traj.samples) csv.row({s.t, s.m1, s.m2, s.l2_norm, s.mass});
}

void cmd_particles(Dispatch& d, int n, double sigma, double t_final, double dt,
                   std::uint64_t seed, const std::string& init, const std::string& out_path) {
    ParticleRunConfig cfg;
    cfg.n = n;
    cfg.sigma = sigma;
    const PdeConfig defaults = default_pde_config(sigma, 16);
    cfg.potential_v = defaults.potential_v;
    cfg.potential_f = defaults.potential_f;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.sample_dt = std::max(dt, t_final / 500.0);
    cfg.seed = seed;

    ParticleEnsemble start;
    if (init == "uniform") {
        start = sample_uniform(n, seed);
    } else {
        const SpectralField f = make_init(init, sigma, 16, 64);
        start = sample_from_density(n, to_grid(f, 1024), seed);
    }
    const ParticleRun run = run_particles(cfg, start);

    CsvWriter csv(out_path, d.out);
    csv.header({"t", "m1_emp", "m2_emp"});
    for (const auto& s : run.samples) csv.row({s.t, s.m1, s.m2});
}

void cmd_chaos(Dispatch& d, const std::vector<int>& n_list, int replicates, double sigma,
               double t_final, double dt, std::uint64_t seed, const std::string& out_path) {
    ChaosConfig cfg;
    cfg.n_list = n_list;
    cfg.replicates = replicates;
    cfg.sigma = sigma;
    cfg.t_final = t_final;
    cfg.dt = dt;
    cfg.seed = seed;
    const ChaosReport report = chaos_compare(cfg);

    ordered_json j;
    j["config"] = {{"n-list", n_list}, {"replicates", replicates}, {"sigma", sigma},
                   {"T", t_final},     {"dt", dt},                 {"seed", seed}};
    j["pde_m1"] = report.pde_m1;
    j["pde_m2"] = report.pde_m2;
    ordered_json pts = ordered_json::array();
    for (const auto& p : report.points)
        pts.push_back({{"n", p.n}, {"rms_error", p.rms_error}, {"errors", p.errors}});
    j["points"] = pts;
    j["fitted_exponent"] = report.fitted_exponent;
    emit_json(j, out_path, d.out);
}

void cmd_control(Dispatch& d, double sigma, const std::string& target_spec,
                 const std::string& from_spec, double t_final, double dt, int order,
                 double gamma, double c, const std::string& out_path) {
    SpdeConfig cfg = default_spde_config(sigma, order);
    cfg.dt = dt;
    cfg.t_final = t_final;
    const CovarianceSpec q = make_covariance(order, gamma, c);
    const SpectralField y0 = make_init(from_spec, sigma, order, cfg.grid);
    const SpectralField y1 = make_init(target_spec, sigma, order, cfg.grid);
    const int steps = std::max(1, static_cast<int>(std::llround(t_final / dt)));
    const Control control = build_control(y0, y1, t_final, q, cfg, steps);
    const ControlledRun run = run_controlled(y0, y1, control, cfg, q);

    ordered_json j;
    j["config"] = {{"sigma", sigma}, {"target", target_spec}, {"from", from_spec},
                   {"T", t_final},   {"dt", dt},              {"K", order},
                   {"gamma", gamma}, {"c", c}};
    j["endpoint_error"] = run.endpoint_error;
    j["target_m2"] = moment_m2(y1);
    j["endpoint_m2"] = moment_m2(run.endpoint);
    emit_json(j, out_path, d.out);
}

void cmd_ergodicity(Dispatch& d, const std::vector<std::string>& init_specs, int samples,
                    double sigma, double gamma, double c, double t_final, double dt, int order,
                    double window_start, double cutoff, std::uint64_t seed,
                    const std::string& out_path) {
    if (init_specs.size() < 2)
        throw std::invalid_argument("--inits needs at least two comma-separated entries");
    SpdeConfig cfg = default_spde_config(sigma, order);
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.sample_dt = std::max(dt, t_final / 2000.0);
    cfg.cutoff_radius = cutoff;
    const CovarianceSpec q = make_covariance(order, gamma, c);

    std::vector<SpectralField> inits;
    for (const auto& spec : init_specs) inits.push_back(make_init(spec, sigma, order, cfg.grid));

    ordered_json per_seed = ordered_json::array();
    std::vector<double> diffs;
    for (int s = 0; s < samples; ++s) {
        const std::uint64_t run_seed = splitmix64(seed + static_cast<std::uint64_t>(s));
        const ErgodicityReport rep = ergodicity_probe(inits, cfg, q, window_start, run_seed);
        ordered_json averages = ordered_json::array();
        for (const auto& a : rep.window_averages)
            averages.push_back({{"m1", a.m1}, {"m2", a.m2}, {"l2_sq", a.l2_sq}});
        per_seed.push_back({{"seed", run_seed}, {"averages", averages}});
        diffs.push_back(rep.window_averages[0].m2 - rep.window_averages[1].m2);
    }
    double mean = 0.0;
    for (double v : diffs) mean += v;
    mean /= diffs.size();
    double var = 0.0;
    for (double v : diffs) var += (v - mean) * (v - mean);
    var = diffs.size() > 1 ? var / (diffs.size() - 1) : 0.0;
    const double se = std::sqrt(var / diffs.size());

    ordered_json j;
    j["config"] = {{"inits", init_specs}, {"samples", samples}, {"sigma", sigma},
                   {"gamma", gamma},      {"c", c},             {"T", t_final},
                   {"window", window_start}, {"cutoff", cutoff}, {"seed", seed}};
    j["noise_trace"] = q.trace();
    j["m2_diff_mean"] = mean;
    j["m2_diff_se"] = se;
    // floor absorbs the degenerate case of pathwise-synchronized trajectories
    j["agrees_within_3se"] = std::abs(mean) <= 3.0 * se + 1e-10;
    j["per_seed"] = per_seed;
    emit_json(j, out_path, d.out);
}

}  // namespace

void emit_phase_diagram(double sigma_min, double sigma_max, int n, std::ostream& out) {
    Dispatch d{out};
    cmd_phase_diagram(d, sigma_min, sigma_max, n, "");
}

int parse_and_dispatch(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Stationary analysis and simulation of a mean-field model on the torus"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);
    app.allow_config_extras(false);

    Dispatch d{out};

    // sigma-c
    auto* sc = app.add_subcommand("sigma-c", "Critical noise strength by bisection");
    double sc_tol = 1e-6;
    sc->add_option("--tol", sc_tol, "bisection tolerance")->capture_default_str();
    sc->callback([&] { cmd_sigma_c(d, sc_tol); });

    // stationary
    auto* st = app.add_subcommand("stationary", "Stationary states at one or many sigma");
    double st_sigma = 1.0, st_tol = 1e-10;
    std::vector<double> st_scan;
    std::string st_out, st_density;
    st->add_option("--sigma", st_sigma, "noise strength")->capture_default_str();
    st->add_option("--tol", st_tol, "fixed-point residual tolerance")->capture_default_str();
    st->add_option("--scan", st_scan, "MIN MAX N sigma scan emitting CSV")->expected(3);
    st->add_option("--out", st_out, "output path");
    st->add_option("--density", st_density, "write the selected density as x,value CSV (- for stdout)");
    st->callback([&] { cmd_stationary(d, st_sigma, st_tol, st_scan, st_out, st_density); });

    // phase-diagram
    auto* pd = app.add_subcommand("phase-diagram", "Solution count and markers over a sigma grid");
    double pd_min = 0.4, pd_max = 1.0;
    int pd_n = 13;
    std::string pd_out;
    pd->add_option("--min", pd_min, "lowest sigma")->capture_default_str();
    pd->add_option("--max", pd_max, "highest sigma")->capture_default_str();
    pd->add_option("--n", pd_n, "grid points")->capture_default_str();
    pd->add_option("--out", pd_out, "output CSV path");
    pd->callback([&] { cmd_phase_diagram(d, pd_min, pd_max, pd_n, pd_out); });

    // pde
    auto* pe = app.add_subcommand("pde", "Deterministic mean-field solver");
    double pe_sigma = 1.0, pe_T = 1.0, pe_dt = 1e-3;
    int pe_K = 64;
    std::string pe_init = "uniform", pe_out, pe_snap;
    pe->add_option("--sigma", pe_sigma, "noise strength")->capture_default_str();
    pe->add_option("--init", pe_init, "uniform | bump:x0[:kappa] | file:path | stationary[+-]")
        ->capture_default_str();
    pe->add_option("--T", pe_T, "final time")->capture_default_str();
    pe->add_option("--dt", pe_dt, "time step")->capture_default_str();
    pe->add_option("--K", pe_K, "spectral truncation")->capture_default_str();
    pe->add_option("--out", pe_out, "output CSV path");
    pe->add_option("--snapshots", pe_snap, "full density snapshot CSV path");
    pe->callback([&] { cmd_pde(d, pe_sigma, pe_init, pe_T, pe_dt, pe_K, pe_out, pe_snap); });

    // spde
    auto* se = app.add_subcommand("spde", "Stochastic solver with trace-class additive noise");
    double se_sigma = 1.0, se_gamma = 0.9, se_c = 1.0, se_T = 1.0, se_dt = 1e-3, se_cut = 0.0;
    int se_K = 64;
    std::uint64_t se_seed = 0;
    std::string se_init = "uniform", se_out;
    se->add_option("--sigma", se_sigma, "diffusion coefficient")->capture_default_str();
    se->add_option("--gamma", se_gamma, "covariance decay exponent")->capture_default_str();
    se->add_option("--c", se_c, "covariance scale")->capture_default_str();
    se->add_option("--seed", se_seed, "noise seed")->capture_default_str();
    se->add_option("--init", se_init, "initial state spec")->capture_default_str();
    se->add_option("--T", se_T, "final time")->capture_default_str();
    se->add_option("--dt", se_dt, "time step")->capture_default_str();
    se->add_option("--K", se_K, "spectral truncation")->capture_default_str();
    se->add_option("--cutoff", se_cut, "interaction cutoff radius R (0 = off)")
        ->capture_default_str();
    se->add_option("--out", se_out, "output CSV path");
    se->callback([&] {
        cmd_spde(d, se_sigma, se_gamma, se_c, se_seed, se_init, se_T, se_dt, se_K, se_cut, se_out);
    });

    // particles
    auto* pa = app.add_subcommand("particles", "Interacting-ensemble simulation");
    int pa_n = 1000;
    double pa_sigma = 1.0, pa_T = 1.0, pa_dt = 1e-3;
    std::uint64_t pa_seed = 0;
    std::string pa_init = "uniform", pa_out;
    pa->add_option("--n", pa_n, "particle count")->capture_default_str();
    pa->add_option("--sigma", pa_sigma, "noise strength")->capture_default_str();
    pa->add_option("--T", pa_T, "final time")->capture_default_str();
    pa->add_option("--dt", pa_dt, "time step")->capture_default_str();
    pa->add_option("--seed", pa_seed, "noise seed")->capture_default_str();
    pa->add_option("--init", pa_init, "initial law spec")->capture_default_str();
    pa->add_option("--out", pa_out, "output CSV path");
    pa->callback([&] { cmd_particles(d, pa_n, pa_sigma, pa_T, pa_dt, pa_seed, pa_init, pa_out); });

    // chaos
    auto* ch = app.add_subcommand("chaos", "Empirical-moment error scaling against the PDE");
    std::vector<int> ch_nlist{1000, 10000, 100000};
    int ch_rep = 8;
    double ch_sigma = 0.9, ch_T = 2.0, ch_dt = 1e-3;
    std::uint64_t ch_seed = 1;
    std::string ch_out;
    ch->add_option("--n-list", ch_nlist, "ensemble sizes")->delimiter(',')->capture_default_str();
    ch->add_option("--replicates", ch_rep, "replicates per size")->capture_default_str();
    ch->add_option("--sigma", ch_sigma, "noise strength")->capture_default_str();
    ch->add_option("--T", ch_T, "final time")->capture_default_str();
    ch->add_option("--dt", ch_dt, "time step")->capture_default_str();
    ch->add_option("--seed", ch_seed, "base seed")->capture_default_str();
    ch->add_option("--out", ch_out, "output JSON path");
    ch->callback([&] { cmd_chaos(d, ch_nlist, ch_rep, ch_sigma, ch_T, ch_dt, ch_seed, ch_out); });

    // control
    auto* co = app.add_subcommand("control", "Constructive steering of the controlled system");
    double co_sigma = 0.6, co_T = 1.0, co_dt = 1e-3, co_gamma = 0.9, co_c = 1.0;
    int co_K = 64;
    std::string co_target = "stationary", co_from = "uniform", co_out;
    co->add_option("--sigma", co_sigma, "noise strength")->capture_default_str();
    co->add_option("--target", co_target, "target state spec")->capture_default_str();
    co->add_option("--from", co_from, "initial state spec")->capture_default_str();
    co->add_option("--T", co_T, "horizon")->capture_default_str();
    co->add_option("--dt", co_dt, "time step")->capture_default_str();
    co->add_option("--K", co_K, "spectral truncation")->capture_default_str();
    co->add_option("--gamma", co_gamma, "covariance decay exponent")->capture_default_str();
    co->add_option("--c", co_c, "covariance scale")->capture_default_str();
    co->add_option("--out", co_out, "output JSON path");
    co->callback([&] {
        cmd_control(d, co_sigma, co_target, co_from, co_T, co_dt, co_K, co_gamma, co_c, co_out);
    });

    // ergodicity
    auto* er = app.add_subcommand("ergodicity", "Same-noise trajectories from several starts");
    std::vector<std::string> er_inits{"stationary+", "stationary-"};
    int er_samples = 20, er_K = 32;
    double er_sigma = 0.6, er_gamma = 0.9, er_c = 1.0, er_T = 200.0, er_dt = 5e-4,
           er_window = 50.0, er_cutoff = 400.0;
    std::uint64_t er_seed = 0;
    std::string er_out;
    er->add_option("--inits", er_inits, "comma-separated init specs")
        ->delimiter(',')
        ->capture_default_str();
    er->add_option("--samples", er_samples, "number of seeds")->capture_default_str();
    er->add_option("--sigma", er_sigma, "diffusion coefficient")->capture_default_str();
    er->add_option("--gamma", er_gamma, "covariance decay exponent")->capture_default_str();
    er->add_option("--c", er_c, "covariance scale")->capture_default_str();
    er->add_option("--T", er_T, "final time")->capture_default_str();
    er->add_option("--dt", er_dt, "time step")->capture_default_str();
    er->add_option("--K", er_K, "spectral truncation")->capture_default_str();
    er->add_option("--window", er_window, "averaging window start")->capture_default_str();
    er->add_option("--cutoff", er_cutoff, "interaction cutoff radius (0 = off)")
        ->capture_default_str();
    er->add_option("--seed", er_seed, "base seed")->capture_default_str();
    er->add_option("--out", er_out, "output JSON path");
    er->callback([&] {
        cmd_ergodicity(d, er_inits, er_samples, er_sigma, er_gamma, er_c, er_T, er_dt, er_K,
                       er_window, er_cutoff, er_seed, er_out);
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return d.exit_code;
}

}  // namespace mckv::cli
