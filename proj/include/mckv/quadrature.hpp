#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace mckv {

/// value * exp(log_scale); keeps exponentially large integrals representable.
struct ScaledValue {
    double value = 0.0;
    double log_scale = 0.0;
    double get() const { return value * std::exp(log_scale); }
};

/// Periodic trapezoid rule on [0, 2pi) for integrands built from sin x and
/// cos x. Node values carry exact reflection symmetry (sin(2pi - x) = -sin x
/// bitwise), and sums pair the nodes x_j, 2pi - x_j, so integrals of odd
/// integrands against even weights vanish exactly.
class TorusQuadrature {
  public:
    explicit TorusQuadrature(int nodes = 1024);

    int nodes() const { return m_; }
    double node_weight() const;
    std::span<const double> sines() const { return s_; }
    std::span<const double> cosines() const { return c_; }

    /// integral of f(x) e^{phi(x)} dx with max(phi) factored out;
    /// phi and f are callables of (sin x, cos x).
    template <class Phi, class F>
    ScaledValue integrate_exp(Phi&& phi, F&& f) const {
        const int m = m_;
        std::vector<double> p(static_cast<std::size_t>(m));
        double pmax = -HUGE_VAL;
        for (int j = 0; j < m; ++j) {
            p[j] = phi(s_[j], c_[j]);
            if (p[j] > pmax) pmax = p[j];
        }
        const int half = m / 2;
        double acc = f(s_[0], c_[0]) * std::exp(p[0] - pmax) +
                     f(s_[half], c_[half]) * std::exp(p[half] - pmax);
        for (int j = 1; j < half; ++j) {
            const double t = f(s_[j], c_[j]) * std::exp(p[j] - pmax) +
                             f(s_[m - j], c_[m - j]) * std::exp(p[m - j] - pmax);
            acc += t;
        }
        return {acc * node_weight(), pmax};
    }

    template <class F>
    double integrate(F&& f) const {
        const int m = m_;
        const int half = m / 2;
        double acc = f(s_[0], c_[0]) + f(s_[half], c_[half]);
        for (int j = 1; j < half; ++j) acc += f(s_[j], c_[j]) + f(s_[m - j], c_[m - j]);
        return acc * node_weight();
    }

  private:
    int m_;
    std::vector<double> s_, c_;
};

/// x^n by repeated multiplication; sign-exact for negated arguments.
inline double ipow(double x, int n) {
    double y = 1.0;
    for (int i = 0; i < n; ++i) y *= x;
    return y;
}

}  // namespace mckv
