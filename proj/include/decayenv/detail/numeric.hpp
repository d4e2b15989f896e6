#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace decayenv {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace detail {

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t m) {
    std::size_t r = 1;
    while (r < m) r <<= 1;
    return r;
}

/// Conjugate exponent of p; p == 1 maps to infinity.
inline double conjugate_exponent(double p) {
    if (p == 1.0) return INFINITY;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

/// 17 significant digits, the round-trip precision of a double.
inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Shortest %g rendering, for labels.
inline std::string fmt_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton iteration on P_n.
template <int N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre() {
        for (int i = 0; i < (N + 1) / 2; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = -x;
            nodes[N - 1 - i] = x;
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[N - 1 - i] = w;
        }
    }

    template <class F>
    double integrate(F &&f, double a, double b) const {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double acc = 0.0;
        for (int i = 0; i < N; ++i) acc += weights[i] * f(mid + half * nodes[i]);
        return acc * half;
    }
};

inline const GaussLegendre<32> &gauss_legendre_32() {
    static const GaussLegendre<32> rule;
    return rule;
}

} // namespace detail
} // namespace decayenv
