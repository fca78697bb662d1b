#include "mckv/torus_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace mckv {

namespace {

constexpr double sqrt_pi = 1.7724538509055160272981674833411;
constexpr double sqrt_two_pi = 2.5066282746310005024157652848110;

// sin/cos at the grid nodes with the reflection symmetries
//   S[M-r] = -S[r], C[M-r] = C[r] and (when 4 | M) C[M/2-r] = -C[r]
// holding exactly, so that symmetric integrands cancel to exact zeros.
struct NodeTable {
    int m;
    std::vector<double> s, c;

    explicit NodeTable(int grid_size) : m(grid_size), s(grid_size), c(grid_size) {
        s[0] = 0.0;
        c[0] = 1.0;
        const int half = m / 2;
        if (m % 4 == 0) {
            const int quarter = m / 4;
            for (int r = 1; r <= quarter; ++r) {
                const double th = two_pi * r / m;
                s[r] = std::sin(th);
                c[r] = std::cos(th);
            }
            s[quarter] = 1.0;
            c[quarter] = 0.0;
            for (int r = 1; r < quarter; ++r) {
                s[half - r] = s[r];
                c[half - r] = -c[r];
            }
        } else {
            for (int r = 1; r < half; ++r) {
                const double th = two_pi * r / m;
                s[r] = std::sin(th);
                c[r] = std::cos(th);
            }
        }
        if (m % 2 == 0) {
            s[half] = 0.0;
            c[half] = -1.0;
        }
        for (int r = half + 1; r < m; ++r) {
            s[r] = -s[m - r];
            c[r] = c[m - r];
        }
    }
};

std::shared_ptr<const NodeTable> node_table(int grid_size) {
    static std::mutex mtx;
    static std::map<int, std::shared_ptr<const NodeTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[grid_size];
    if (!slot) slot = std::make_shared<const NodeTable>(grid_size);
    return slot;
}

void check_resolution(int order, int grid_size) {
    if (order < 0) throw std::invalid_argument("truncation order must be nonnegative");
    if (grid_size < 2 || grid_size % 2 != 0)
        throw std::invalid_argument("grid size must be a positive even integer");
    if (grid_size < 2 * order + 2)
        throw std::invalid_argument("grid too coarse for the requested truncation order");
}

}  // namespace

SpectralField::SpectralField(int order)
    : order_(order), c_(static_cast<std::size_t>(2 * order + 1), 0.0) {
    if (order < 0) throw std::invalid_argument("truncation order must be nonnegative");
}

SpectralField SpectralField::basis(int k, int order) {
    SpectralField f(order);
    f.coeff(k) = 1.0;
    return f;
}

double SpectralField::l2_norm() const {
    double sum = 0.0;
    for (double v : c_) sum += v * v;
    return std::sqrt(sum);
}

bool SpectralField::finite() const {
    for (double v : c_)
        if (!std::isfinite(v)) return false;
    return true;
}

SpectralField SpectralField::truncated(int order) const {
    SpectralField out(order);
    const int kmax = std::min(order, order_);
    for (int k = -kmax; k <= kmax; ++k) out.coeff(k) = coeff(k);
    return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& g) {
    if (g.order_ != order_) throw std::invalid_argument("order mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += g.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& g) {
    if (g.order_ != order_) throw std::invalid_argument("order mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= g.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (double& v : c_) v *= a;
    return *this;
}

double GridFunction::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double GridFunction::integral() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * two_pi / static_cast<double>(values.size());
}

SpectralField to_spectral(const GridFunction& g, int order) {
    const int m = g.size();
    check_resolution(order, m);
    const auto tab = node_table(m);
    const double* s = tab->s.data();
    const double* c = tab->c.data();
    const double* v = g.values.data();
    const double w = two_pi / m;
    const int half = m / 2;

    SpectralField f(order);
    // k = 0
    {
        double acc = v[0] + v[half];
        for (int j = 1; j < half; ++j) acc += v[j] + v[m - j];
        f.coeff(0) = acc * w / sqrt_two_pi;
    }
    for (int k = 1; k <= order; ++k) {
        // Nodes j and m-j carry exactly opposite sine values and equal cosine
        // values, so sums are accumulated pairwise: odd integrands cancel to
        // exact zeros.
        double acc_s = 0.0;                          // j=0 and j=half have sin = 0
        double acc_c = v[0] + c[(k * half) % m] * v[half];
        int r = 0;
        for (int j = 1; j < half; ++j) {
            r += k;
            if (r >= m) r -= m;
            acc_s += (v[j] - v[m - j]) * s[r];
            acc_c += (v[j] + v[m - j]) * c[r];
        }
        f.coeff(k) = acc_s * w / sqrt_pi;
        f.coeff(-k) = acc_c * w / sqrt_pi;
    }
    return f;
}

GridFunction to_grid(const SpectralField& f, int grid_size) {
    const int m = grid_size;
    check_resolution(f.order(), m);
    const auto tab = node_table(m);
    const double* s = tab->s.data();
    const double* c = tab->c.data();

    GridFunction g;
    g.values.assign(static_cast<std::size_t>(m), f.coeff(0) / sqrt_two_pi);
    double* v = g.values.data();
    for (int k = 1; k <= f.order(); ++k) {
        const double a = f.coeff(k) / sqrt_pi;
        const double b = f.coeff(-k) / sqrt_pi;
        if (a == 0.0 && b == 0.0) continue;
        int r = 0;
        v[0] += b;
        for (int j = 1; j < m; ++j) {
            r += k;
            if (r >= m) r -= m;
            v[j] += a * s[r] + b * c[r];
        }
    }
    return g;
}

SpectralField derivative(const SpectralField& f) {
    SpectralField out(f.order());
    for (int k = 1; k <= f.order(); ++k) {
        out.coeff(-k) = k * f.coeff(k);
        out.coeff(k) = -k * f.coeff(-k);
    }
    return out;
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
    if (f.order() != g.order()) throw std::invalid_argument("order mismatch");
    SpectralField h(f.order());
    h.coeff(0) = sqrt_two_pi * f.coeff(0) * g.coeff(0);
    // In the complex exponential basis convolution is diagonal with factor
    // 2 pi; mapping back to the real basis gives, per harmonic k > 0,
    //   h_cos = sqrt(pi) (f_cos g_cos - f_sin g_sin),
    //   h_sin = sqrt(pi) (f_sin g_cos + f_cos g_sin).
    for (int k = 1; k <= f.order(); ++k) {
        const double fs = f.coeff(k), fc = f.coeff(-k);
        const double gs = g.coeff(k), gc = g.coeff(-k);
        h.coeff(-k) = sqrt_pi * (fc * gc - fs * gs);
        h.coeff(k) = sqrt_pi * (fs * gc + fc * gs);
    }
    return h;
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat semigroup requires t >= 0");
    SpectralField out = f;
    for (int k = 1; k <= f.order(); ++k) {
        const double e = std::exp(-t * static_cast<double>(k) * k);
        out.coeff(k) *= e;
        out.coeff(-k) *= e;
    }
    return out;
}

GridFunction periodic_heat_kernel(double t, double tol, int grid_size) {
    if (t <= 0.0) throw std::invalid_argument("periodic heat kernel requires t > 0");
    if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    const double norm = 1.0 / std::sqrt(2.0 * two_pi * t);
    GridFunction g;
    g.values.resize(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        const double x = GridFunction::node(j, grid_size);
        auto image = [&](double y) { return norm * std::exp(-y * y / (4.0 * t)); };
        double sum = image(x) + image(x - two_pi);
        for (int r = 1;; ++r) {
            const double term = image(x + r * two_pi) + image(x - (r + 1) * two_pi);
            sum += term;
            if (term <= tol * sum) break;
        }
        g.values[static_cast<std::size_t>(j)] = sum;
    }
    return g;
}

namespace {

SpectralField duhamel_piecewise(std::span<const SpectralField> z, double t, bool with_dx) {
    if (z.empty()) throw std::invalid_argument("empty time mesh");
    if (t <= 0.0) throw std::invalid_argument("final time must be positive");
    const int order = z[0].order();
    const int n = static_cast<int>(z.size());
    const double h = t / n;
    SpectralField out(order);
    for (int i = 0; i < n; ++i) {
        const SpectralField zi = with_dx ? derivative(z[i]) : z[i];
        if (zi.order() != order) throw std::invalid_argument("order mismatch in time mesh");
        const double s1 = (i + 1) * h;
        out.coeff(0) += h * zi.coeff(0);
        for (int k = 1; k <= order; ++k) {
            const double k2 = static_cast<double>(k) * k;
            // int_{s0}^{s1} e^{-(t-s)k^2} ds = e^{-(t-s1)k^2} (1 - e^{-h k^2}) / k^2
            const double w = std::exp(-(t - s1) * k2) * (-std::expm1(-h * k2)) / k2;
            out.coeff(k) += w * zi.coeff(k);
            out.coeff(-k) += w * zi.coeff(-k);
        }
    }
    return out;
}

}  // namespace

SpectralField integrate_heat_dx(std::span<const SpectralField> z, double t) {
    return duhamel_piecewise(z, t, true);
}

SpectralField integrate_heat(std::span<const SpectralField> z, double t) {
    return duhamel_piecewise(z, t, false);
}

}  // namespace mckv
