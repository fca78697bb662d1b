#include "mckv/quadrature.hpp"

#include <stdexcept>

namespace mckv {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TorusQuadrature::TorusQuadrature(int nodes) : m_(nodes) {
    if (nodes < 4 || nodes % 2 != 0)
        throw std::invalid_argument("node count must be an even integer >= 4");
    s_.resize(static_cast<std::size_t>(nodes));
    c_.resize(static_cast<std::size_t>(nodes));
    const int half = nodes / 2;
    s_[0] = 0.0;
    c_[0] = 1.0;
    if (nodes % 4 == 0) {
        const int quarter = nodes / 4;
        for (int r = 1; r < quarter; ++r) {
            const double th = kTwoPi * r / nodes;
            s_[r] = std::sin(th);
            c_[r] = std::cos(th);
        }
        s_[quarter] = 1.0;
        c_[quarter] = 0.0;
        for (int r = 1; r < quarter; ++r) {
            s_[half - r] = s_[r];
            c_[half - r] = -c_[r];
        }
    } else {
        for (int r = 1; r < half; ++r) {
            const double th = kTwoPi * r / nodes;
            s_[r] = std::sin(th);
            c_[r] = std::cos(th);
        }
    }
    s_[half] = 0.0;
    c_[half] = -1.0;
    for (int r = half + 1; r < nodes; ++r) {
        s_[r] = -s_[nodes - r];
        c_[r] = c_[nodes - r];
    }
}

double TorusQuadrature::node_weight() const { return kTwoPi / m_; }

}  // namespace mckv
