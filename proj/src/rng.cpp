#include "mckv/rng.hpp"

#include <cmath>

namespace mckv {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kZigR = 3.442619855899;
}

GaussPair gauss_pair(std::uint64_t key) {
    const double u1 = uniform_from_bits(splitmix64(key));
    const double u2 = uniform_from_bits(splitmix64(key ^ 0xd1342543de82ef95ull));
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

namespace {

// Marsaglia-Tsang ziggurat tables, widened to a 63-bit integer grid.
struct ZigTables {
    std::uint64_t kn[128];
    double wn[128], fn[128];

    ZigTables() {
        const double m1 = 9223372036854775808.0;  // 2^63
        double dn = kZigR, tn = dn;
        const double vn = 9.91256303526217e-3;
        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint64_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint64_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigTables& zig_tables() {
    static const ZigTables tables;
    return tables;
}

}  // namespace

double ziggurat_normal(SplitMix64& rng) {
    const ZigTables& t = zig_tables();
    for (;;) {
        const std::uint64_t u = rng.next();
        const std::int64_t hz = static_cast<std::int64_t>(u);
        const unsigned iz = static_cast<unsigned>(u & 127u);
        const std::uint64_t mag = hz < 0 ? 0 - u : u;
        if (mag < t.kn[iz]) return static_cast<double>(hz) * t.wn[iz];

        if (iz == 0) {
            // tail beyond R by exponential rejection
            double x, y;
            do {
                x = -std::log(rng.uniform()) / kZigR;
                y = -std::log(rng.uniform());
            } while (y + y < x * x);
            return hz > 0 ? kZigR + x : -kZigR - x;
        }
        const double x = static_cast<double>(hz) * t.wn[iz];
        if (t.fn[iz] + rng.uniform() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x))
            return x;
    }
}

}  // namespace mckv
