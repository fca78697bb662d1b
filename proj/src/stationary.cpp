#include "mckv/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mckv/quadrature.hpp"

namespace mckv {

namespace {

void require_positive_sigma(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
}

// Exponent of the Boltzmann density: (-(cos 2x) + m1 cos x + m2 sin x)/sigma,
// with cos 2x = 2 c^2 - 1 so reflected nodes evaluate bitwise-equal.
struct BoltzmannExponent {
    double inv_sigma, m1, m2;
    double operator()(double s, double c) const {
        return inv_sigma * (-(2.0 * c * c - 1.0) + m1 * c + m2 * s);
    }
};

struct MapIntegrals {
    double z;       // scaled partition value
    double num_c;   // scaled int cos x e^phi
    double num_s;   // scaled int sin x e^phi
    double scale;   // common log scale
};

// One pass computing the partition integral and both moment numerators with a
// shared exponent shift.
MapIntegrals map_integrals(double sigma, MomentPair m, const TorusQuadrature& quad) {
    const BoltzmannExponent phi{1.0 / sigma, m.m1, m.m2};
    const auto s = quad.sines();
    const auto c = quad.cosines();
    const int n = quad.nodes();
    std::vector<double> p(static_cast<std::size_t>(n));
    double pmax = -HUGE_VAL;
    for (int j = 0; j < n; ++j) {
        p[j] = phi(s[j], c[j]);
        if (p[j] > pmax) pmax = p[j];
    }
    const int half = n / 2;
    double az = 0.0, ac = 0.0, as = 0.0;
    {
        const double w0 = std::exp(p[0] - pmax);
        const double wh = std::exp(p[half] - pmax);
        az = w0 + wh;
        ac = c[0] * w0 + c[half] * wh;
        as = 0.0;  // sin x vanishes at both poles
    }
    for (int j = 1; j < half; ++j) {
        const double wj = std::exp(p[j] - pmax);
        const double wr = std::exp(p[n - j] - pmax);
        az += wj + wr;
        ac += c[j] * wj + c[n - j] * wr;
        as += s[j] * wj + s[n - j] * wr;
    }
    const double w = quad.node_weight();
    return {az * w, ac * w, as * w, pmax};
}

}  // namespace

double MomentPair::magnitude() const { return std::hypot(m1, m2); }
double MomentPair::phase() const { return std::atan2(m2, m1); }

double partition_function(double sigma, MomentPair m, int nodes) {
    require_positive_sigma(sigma);
    const TorusQuadrature quad(nodes);
    const auto r = map_integrals(sigma, m, quad);
    return r.z * std::exp(r.scale);
}

StationaryDensity stationary_density(double sigma, MomentPair m, int grid_size) {
    require_positive_sigma(sigma);
    const TorusQuadrature quad(grid_size);
    const BoltzmannExponent phi{1.0 / sigma, m.m1, m.m2};
    const auto s = quad.sines();
    const auto c = quad.cosines();
    std::vector<double> w(static_cast<std::size_t>(grid_size));
    double pmax = -HUGE_VAL;
    for (int j = 0; j < grid_size; ++j) {
        w[j] = phi(s[j], c[j]);
        pmax = std::max(pmax, w[j]);
    }
    double zsum = 0.0;
    for (int j = 0; j < grid_size; ++j) {
        w[j] = std::exp(w[j] - pmax);
        zsum += w[j];
    }
    const double z_scaled = zsum * quad.node_weight();
    StationaryDensity out;
    out.sigma = sigma;
    out.moments = m;
    out.normalization = z_scaled * std::exp(pmax);
    out.samples.values.resize(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) out.samples.values[j] = w[j] / z_scaled;
    return out;
}

MomentPair moment_map(double sigma, MomentPair m, int nodes) {
    require_positive_sigma(sigma);
    const TorusQuadrature quad(nodes);
    const auto r = map_integrals(sigma, m, quad);
    return {r.num_c / r.z, r.num_s / r.z};
}

double moment_map_sine(double sigma, double m, int nodes) {
    return moment_map(sigma, {0.0, m}, nodes).m2;
}

double moment_map_cosine(double sigma, double m, int nodes) {
    return moment_map(sigma, {m, 0.0}, nodes).m1;
}

double sine_residual(double sigma, double m, int nodes) {
    require_positive_sigma(sigma);
    const TorusQuadrature quad(nodes);
    const double inv = 1.0 / sigma;
    return quad
        .integrate_exp(
            [inv, m](double s, double c) { return inv * (-(2.0 * c * c - 1.0) + m * s); },
            [m](double s, double) { return s - m; })
        .get();
}

double cosine_residual(double sigma, double m, int nodes) {
    require_positive_sigma(sigma);
    const TorusQuadrature quad(nodes);
    const double inv = 1.0 / sigma;
    return quad
        .integrate_exp(
            [inv, m](double, double c) { return inv * (-(2.0 * c * c - 1.0) + m * c); },
            [m](double, double c) { return c - m; })
        .get();
}

double sine_power_moment(double sigma, int k, int nodes) {
    require_positive_sigma(sigma);
    if (k < 0) throw std::invalid_argument("moment index must be nonnegative");
    const TorusQuadrature quad(nodes);
    const double inv = 1.0 / sigma;
    return quad
        .integrate_exp([inv](double, double c) { return -inv * (2.0 * c * c - 1.0); },
                       [k](double s, double) { return ipow(s, k); })
        .get();
}

double cosine_power_moment(double sigma, int k, int nodes) {
    require_positive_sigma(sigma);
    if (k < 0) throw std::invalid_argument("moment index must be nonnegative");
    const TorusQuadrature quad(nodes);
    const double inv = 1.0 / sigma;
    return quad
        .integrate_exp([inv](double, double c) { return -inv * (2.0 * c * c - 1.0); },
                       [k](double, double c) { return ipow(c, k); })
        .get();
}

double sine_series_factor(double sigma, int k, int nodes) {
    const double a = sine_power_moment(sigma, 2 * k + 2, nodes);
    const double b = sine_power_moment(sigma, 2 * k, nodes);
    return a / ((2.0 * k + 1.0) * b) - sigma;
}

double cosine_series_factor(double sigma, int k, int nodes) {
    const double a = cosine_power_moment(sigma, 2 * k + 2, nodes);
    const double b = cosine_power_moment(sigma, 2 * k, nodes);
    return a / ((2.0 * k + 1.0) * b) - sigma;
}

SeriesResult sine_residual_series(double sigma, double m, double tol, int nodes) {
    require_positive_sigma(sigma);
    if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    constexpr int max_terms = 200;
    constexpr double abs_floor = 1e-300;
    const double q = m / sigma;
    const double q2 = q * q;

    std::vector<double> s_even;  // s_0, s_2, s_4, ...
    auto s_at = [&](int idx) {
        while (static_cast<int>(s_even.size()) <= idx)
            s_even.push_back(sine_power_moment(sigma, 2 * static_cast<int>(s_even.size()), nodes));
        return s_even[static_cast<std::size_t>(idx)];
    };

    SeriesResult out;
    double coeff = q;  // (m/sigma)^{2k+1} / (2k)!
    for (int k = 0; k < max_terms; ++k) {
        const double sk = s_at(k);
        const double factor = s_at(k + 1) / ((2.0 * k + 1.0) * sk) - sigma;
        const double term = coeff * sk * factor;
        out.value += term;
        out.terms = k + 1;
        if (std::abs(term) < tol * std::abs(out.value) + abs_floor) {
            out.converged = true;
            break;
        }
        coeff *= q2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    }
    return out;
}

double sine_residual_slope(double sigma, int nodes) {
    return (sine_power_moment(sigma, 2, nodes) - sigma * sine_power_moment(sigma, 0, nodes)) /
           sigma;
}

double polar_residual(double sigma, double amplitude, double phase, int nodes) {
    require_positive_sigma(sigma);
    if (amplitude < 0.0) throw std::invalid_argument("amplitude must be nonnegative");
    const TorusQuadrature quad(nodes);
    const double inv = 1.0 / sigma;
    const double cp = std::cos(phase), sp = std::sin(phase);
    // cos(x - phase) = c cp + s sp, sin(x - phase) = s cp - c sp
    return quad
        .integrate_exp(
            [&](double s, double c) {
                return inv * (-(2.0 * c * c - 1.0) + amplitude * (c * cp + s * sp));
            },
            [&](double s, double c) { return s * cp - c * sp; })
        .get();
}

double laplace_approx(const LocalValues& f, const LaplaceMinimum& u, double sigma) {
    require_positive_sigma(sigma);
    if (!(u.u2 > 0.0))
        throw std::invalid_argument("Laplace expansion requires a positive second derivative");
    const double gamma = f.f0 * (5.0 * u.u3 * u.u3 / (24.0 * u.u2 * u.u2 * u.u2) -
                                 u.u4 / (8.0 * u.u2 * u.u2)) -
                         f.f1 * u.u3 / (2.0 * u.u2 * u.u2) + f.f2 / (2.0 * u.u2);
    return std::sqrt(two_pi * sigma / u.u2) * std::exp(-u.u0 / sigma) * (f.f0 + gamma * sigma);
}

bool cosine_axis_uniqueness(double sigma, int nodes) {
    if (!(sigma >= 0.5)) throw std::invalid_argument("check applies for sigma >= 1/2");
    const double c0 = cosine_power_moment(sigma, 0, nodes);
    const double c2 = cosine_power_moment(sigma, 2, nodes);
    if (!(c2 - sigma * c0 < 0.0)) return false;
    for (int k = 1; k <= 10; ++k)
        if (!(cosine_series_factor(sigma, k, nodes) < 0.0)) return false;
    constexpr int scan = 200;
    for (int i = 1; i <= scan; ++i) {
        const double m = static_cast<double>(i) / scan;
        if (cosine_residual(sigma, m, nodes) >= 0.0) return false;
    }
    return true;
}

namespace {

// Bisection to |interval| < tol for a callable with a sign change on [a, b].
template <class F>
double bisect(F&& f, double a, double b, double fa, double tol) {
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Positive roots of an odd axis residual on (lo, hi], located by a uniform
// sign-change scan and polished by bisection.
template <class F>
std::vector<double> positive_roots(F&& f, double lo, double hi, int intervals, double tol) {
    std::vector<double> roots;
    double prev_m = lo;
    double prev_f = f(lo);
    for (int i = 1; i <= intervals; ++i) {
        const double m = lo + (hi - lo) * i / intervals;
        const double fm = f(m);
        if (prev_f == 0.0) {
            roots.push_back(prev_m);
        } else if (fm == 0.0 || (fm > 0.0) != (prev_f > 0.0)) {
            roots.push_back(bisect(f, prev_m, m, prev_f, tol));
        }
        prev_m = m;
        prev_f = fm;
    }
    // merge near-duplicates from adjacent brackets
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots)
        if (merged.empty() || r - merged.back() > 1e-6) merged.push_back(r);
    return merged;
}

struct NewtonOutcome {
    MomentPair point;
    bool converged = false;
};

NewtonOutcome newton_2d(double sigma, MomentPair start, double tol, int nodes) {
    constexpr double fd_step = 1e-6;
    MomentPair m = start;
    auto residual = [&](MomentPair p) {
        const MomentPair g = moment_map(sigma, p, nodes);
        return MomentPair{g.m1 - p.m1, g.m2 - p.m2};
    };
    MomentPair r = residual(m);
    double rn = std::hypot(r.m1, r.m2);
    for (int it = 0; it < 60; ++it) {
        if (rn <= tol) return {m, true};
        const MomentPair r1 = residual({m.m1 + fd_step, m.m2});
        const MomentPair r2 = residual({m.m1, m.m2 + fd_step});
        const double j11 = (r1.m1 - r.m1) / fd_step, j12 = (r2.m1 - r.m1) / fd_step;
        const double j21 = (r1.m2 - r.m2) / fd_step, j22 = (r2.m2 - r.m2) / fd_step;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14) break;
        const double dx = (-r.m1 * j22 + r.m2 * j12) / det;
        const double dy = (-j11 * r.m2 + j21 * r.m1) / det;
        double lambda = 1.0;
        MomentPair next;
        MomentPair rn_next;
        double norm_next = 0.0;
        bool improved = false;
        for (int half = 0; half < 25; ++half) {
            next = {m.m1 + lambda * dx, m.m2 + lambda * dy};
            rn_next = residual(next);
            norm_next = std::hypot(rn_next.m1, rn_next.m2);
            if (norm_next < rn) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
        m = next;
        r = rn_next;
        rn = norm_next;
    }
    return {m, rn <= tol};
}

}  // namespace

FixedPointReport find_fixed_points(double sigma, double tol, int nodes) {
    require_positive_sigma(sigma);
    FixedPointReport report;
    report.sigma = sigma;
    report.solutions.push_back({0.0, 0.0});

    const double bisect_tol = 1e-10;
    auto zeta = [&](double m) { return sine_residual(sigma, m, nodes); };
    auto xi = [&](double m) { return cosine_residual(sigma, m, nodes); };

    for (double r : positive_roots(zeta, 1e-4, 1.0, 200, bisect_tol)) {
        report.solutions.push_back({0.0, r});
        report.solutions.push_back({0.0, -r});
    }
    for (double r : positive_roots(xi, 1e-4, 1.0, 200, bisect_tol)) {
        report.solutions.push_back({r, 0.0});
        report.solutions.push_back({-r, 0.0});
    }
    // sanity scan beyond the proven bracket
    if (!positive_roots(zeta, 1.0, 1.5, 100, bisect_tol).empty())
        report.warnings.push_back("sine-axis root found beyond m = 1");

    for (const MomentPair& m : report.solutions) {
        const MomentPair g = moment_map(sigma, m, nodes);
        const double res = std::hypot(g.m1 - m.m1, g.m2 - m.m2);
        report.residuals.push_back(res);
        if (res > tol)
            report.warnings.push_back("root failed fixed-point verification at residual " +
                                      std::to_string(res));
    }
    report.count = static_cast<int>(report.solutions.size());

    const double newton_tol = std::max(tol, 1e-10);
    for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
            const NewtonOutcome out =
                newton_2d(sigma, {0.5 * i, 0.5 * j}, newton_tol, nodes);
            if (!out.converged) {
                report.warnings.push_back("Newton start did not converge");
                continue;
            }
            report.newton_points.push_back(out.point);
            report.max_axis_violation =
                std::max(report.max_axis_violation, std::abs(out.point.m1 * out.point.m2));
        }
    }
    return report;
}

}  // namespace mckv
