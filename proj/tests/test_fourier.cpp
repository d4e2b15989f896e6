#include <catch2/catch_amalgamated.hpp>

#include "decayenv/fourier.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace decayenv;
using Catch::Approx;

namespace {

TrigPoly random_trig_poly(int degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    TrigPoly f = TrigPoly::zero(degree);
    for (int n = -degree; n <= degree; ++n) f.set(n, {g(rng), g(rng)});
    return f;
}

// Riemann sum of f(t) e^{-int} on a grid of M points: the discrete oracle, independent of FFTW.
cplx direct_dft(const GridFunction &g, int n) {
    cplx acc{0.0};
    const std::size_t M = g.grid_size();
    for (std::size_t j = 0; j < M; ++j) acc += g.samples()[j] * std::polar(1.0, -n * g.node(j));
    return acc / double(M);
}

} // namespace

TEST_CASE("coeffs_fft", "[fourier]") {
    SECTION("constant on any grid") {
        for (std::size_t M : {2u, 8u, 64u}) {
            const auto c = coeffs_fft(sample(constant_function(), M), 0);
            REQUIRE(std::abs(c[0] - 1.0) < 1e-15);
        }
        const auto c = coeffs_fft(sample(constant_function(), 16), 7);
        for (int n = 1; n <= 7; ++n) REQUIRE(std::abs(c[n]) < 1e-15);
    }
    SECTION("complex_exp(3) on 16 points, N = 5") {
        const auto c = coeffs_fft(sample(complex_exp(3), 16), 5);
        for (int n = -5; n <= 5; ++n) REQUIRE(std::abs(c[n] - (n == 3 ? 1.0 : 0.0)) < 1e-12);
    }
    SECTION("fejer(4) on 64 points, N = 8") {
        const auto c = coeffs_fft(sample(fejer(4), 64), 8);
        for (int n = -8; n <= 8; ++n) {
            const double expected = std::abs(n) <= 4 ? 1.0 - std::abs(n) / 5.0 : 0.0;
            REQUIRE(std::abs(c[n] - expected) < 1e-12);
        }
    }
    SECTION("matches a direct DFT") {
        const auto g = sample(random_trig_poly(9, 3), 32);
        const auto c = coeffs_fft(g, 15);
        for (int n = -15; n <= 15; ++n) REQUIRE(std::abs(c[n] - direct_dft(g, n)) < 1e-12);
    }
    SECTION("sampling then analysis recovers a trig poly for M > 2 degree") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto f = random_trig_poly(12, seed);
            const auto c = coeffs_fft(sample(f, 32), 12);
            for (int n = -12; n <= 12; ++n) REQUIRE(std::abs(c[n] - f.at(n)) <= 1e-10 * std::abs(f.at(n)) + 1e-13);
        }
    }
    SECTION("N too large for the grid") { REQUIRE_THROWS_AS(coeffs_fft(sample(fejer(2), 8), 4), InvalidArgument); }
}

TEST_CASE("coeffs_exact closed forms", "[fourier]") {
    SECTION("square wave: 2/(i pi n) at odd n, zero at even n") {
        const auto c = coeffs_exact(square_wave(), 99);
        REQUIRE(std::abs(c[0]) < 1e-15);
        for (int n = 1; n <= 99; ++n) {
            const cplx expected = (n % 2) ? 2.0 / (cplx{0.0, 1.0} * kPi * double(n)) : cplx{0.0};
            REQUIRE(std::abs(c[n] - expected) < 1e-14);
            REQUIRE(std::abs(c[-n] - std::conj(expected)) < 1e-14);
        }
    }
    SECTION("sawtooth: 1/(2 i n)") {
        const auto c = coeffs_exact(sawtooth(), 50);
        REQUIRE(std::abs(c[0]) < 1e-14);
        for (int n = 1; n <= 50; ++n) REQUIRE(std::abs(c[n] - 1.0 / (2.0 * cplx{0.0, 1.0} * double(n))) < 1e-13);
    }
    SECTION("triangle: |c_n| = 2/(pi n^2) at odd n; fine-grid FFT oracle agrees") {
        const auto c = coeffs_exact(triangle(), 40);
        for (int n = 1; n <= 40; ++n) {
            const double expected = (n % 2) ? 2.0 / (kPi * n * n) : 0.0;
            REQUIRE(std::abs(c[n]) == Approx(expected).margin(1e-14));
        }
        const auto fft = coeffs_fft(sample(triangle(), 1 << 14), 40);
        for (int n = -40; n <= 40; ++n) REQUIRE(std::abs(c[n] - fft[n]) < 1e-6);
    }
    SECTION("cubic piece against Gauss-Legendre quadrature") {
        const PiecewiseFunction f({0.0, 2.0}, {Cubic{{0.3, -1.0, 0.5, -0.1}}, Cubic{{-2.0, 0.0, 0.1, 0.02}}});
        const auto c = coeffs_exact(f, 12);
        const auto &gl = detail::gauss_legendre_32();
        for (int n = -12; n <= 12; ++n) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < f.piece_count(); ++i) {
                // split each piece into 8 panels so the oscillation stays resolved
                for (int k = 0; k < 8; ++k) {
                    const double a = f.left(i) + (f.right(i) - f.left(i)) * k / 8;
                    const double b = f.left(i) + (f.right(i) - f.left(i)) * (k + 1) / 8;
                    re += gl.integrate([&](double t) { return f.piece(i)(t) * std::cos(n * t); }, a, b);
                    im -= gl.integrate([&](double t) { return f.piece(i)(t) * std::sin(n * t); }, a, b);
                }
            }
            REQUIRE(std::abs(c[n] - cplx{re, im} / kTwoPi) < 1e-13);
        }
    }
}

TEST_CASE("coefficient properties", "[fourier][property]") {
    SECTION("realness symmetry c_{-n} = conj(c_n)") {
        for (const auto &f : {square_wave(), sawtooth(), triangle()}) {
            const auto c = coeffs_exact(f, 64);
            for (int n = 0; n <= 64; ++n) REQUIRE(std::abs(c[-n] - std::conj(c[n])) <= 1e-12);
            REQUIRE(c.real_signal());
        }
        const auto w = coeffs_fft(sample(weierstrass(0.5, 5), 64), 20);
        for (int n = 0; n <= 20; ++n) REQUIRE(std::abs(w[-n] - std::conj(w[n])) <= 1e-12);
    }
    SECTION("linearity") {
        const double a = 1.7, b = -0.4;
        const auto combo = coeffs_exact(linear_combination(a, square_wave(), b, triangle()), 30);
        const auto cs = coeffs_exact(square_wave(), 30), ct = coeffs_exact(triangle(), 30);
        for (int n = -30; n <= 30; ++n) REQUIRE(std::abs(combo[n] - (a * cs[n] + b * ct[n])) <= 1e-12);
    }
    SECTION("FFT bias on a discontinuous function shrinks as M grows") {
        const auto exact = coeffs_exact(square_wave(), 16);
        double prev = INFINITY;
        for (std::size_t M : {64u, 256u, 1024u, 4096u, 16384u}) {
            const auto fft = coeffs_fft(sample(square_wave(), M), 16);
            double err = 0.0;
            for (int n = -16; n <= 16; ++n) err = std::max(err, std::abs(fft[n] - exact[n]));
            REQUIRE(err < prev);
            prev = err;
        }
    }
    SECTION("uniform bound |c_n| <= ||f||_1 <= ||f||_p") {
        const std::vector<Function> corpus{constant_function(), complex_exp(3), Function(square_wave()),
                                           Function(sawtooth()), Function(triangle()), weierstrass(0.5, 6), fejer(4)};
        for (const auto &f : corpus) {
            const double l1 = lp_norm(f, 1.0);
            REQUIRE(seq_lq_norm(coefficients(f, 64), INFINITY) <= l1 + 1e-12);
            for (double p : {1.5, 2.0, 3.0}) REQUIRE(l1 <= lp_norm(f, p) + 1e-12);
        }
    }
}

TEST_CASE("seq_lq_norm", "[fourier]") {
    CoeffSeq delta = CoeffSeq::zeros(3);
    delta.set(0, 1.0);
    for (double q : {1.0, 2.0, 3.0, double(INFINITY)}) REQUIRE(seq_lq_norm(delta, q) == 1.0);

    SECTION("square wave at N = 99: below 1, sum over odd n of (2/pi n)^2") {
        const auto c = coeffs_exact(square_wave(), 99);
        double oracle = 0.0;
        for (int n = 1; n <= 99; n += 2) oracle += 2.0 * std::pow(2.0 / (kPi * n), 2);
        REQUIRE(seq_lq_norm(c, 2.0) == Approx(std::sqrt(oracle)).epsilon(1e-14));
        REQUIRE(seq_lq_norm(c, 2.0) < 1.0);
        REQUIRE(seq_lq_norm(coeffs_exact(square_wave(), 9999), 2.0) > seq_lq_norm(c, 2.0));
    }
    REQUIRE(seq_lq_norm(coefficients(fejer(4), 4), INFINITY) == 1.0);
    REQUIRE_THROWS_AS(seq_lq_norm(delta, 0.5), InvalidArgument);
}

TEST_CASE("parseval gap", "[fourier]") {
    REQUIRE(parseval_gap(complex_exp(2)) < 1e-12);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = random_trig_poly(1 + int(seed % 32), seed);
        REQUIRE(parseval_gap(f) <= 1e-10 * std::max(1.0, std::pow(lp_norm(f, 2.0), 2)));
    }
    SECTION("square wave N = 999: gap is the odd tail (8/pi^2) sum_{odd n > 999} n^-2") {
        // Tail oracle: explicit sum to 10^7 plus the integral remainder 1/(2 * 10^7).
        double tail = 0.0;
        for (long n = 1001; n < 10000001; n += 2) tail += 1.0 / (double(n) * double(n));
        tail += 1.0 / (2.0 * 10000001.0);
        tail *= 8.0 / (kPi * kPi);
        const double gap = parseval_gap(square_wave(), 999);
        REQUIRE(gap == Approx(tail).epsilon(1e-7));
        REQUIRE(std::abs(gap - 4.0 / (kPi * kPi * 999)) <= 0.1 * 4.0 / (kPi * kPi * 999));
    }
}

TEST_CASE("coefficient CSV", "[fourier]") {
    std::ostringstream os;
    write_coeffs_csv(os, coefficients(complex_exp(1), 1));
    REQUIRE(os.str() == "n,re,im,abs\n-1,0,0,0\n0,0,0,0\n1,1,0,1\n");
    std::ostringstream os2;
    CoeffSeq c = CoeffSeq::zeros(0);
    c.set(0, cplx{0.1, 0.0});
    write_coeffs_csv(os2, c);
    REQUIRE(os2.str() == "n,re,im,abs\n0,0.10000000000000001,0,0.10000000000000001\n");
}
