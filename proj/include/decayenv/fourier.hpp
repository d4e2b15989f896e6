#pragma once

#include "decayenv/detail/numeric.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/signal.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <ostream>
#include <span>
#include <vector>

namespace decayenv {

/// Fourier (or frame) coefficients c_n for n in [-N, N].
class CoeffSeq {
public:
    CoeffSeq() : values_(1, cplx{0.0}) {}

    explicit CoeffSeq(std::vector<cplx> values, bool real_signal = false)
        : values_(std::move(values)), real_signal_(real_signal) {
        detail::require(values_.size() % 2 == 1, "CoeffSeq: entry count must be 2N+1");
        for (const auto &c : values_)
            detail::require(std::isfinite(c.real()) && std::isfinite(c.imag()), "CoeffSeq: non-finite entry");
    }

    static CoeffSeq zeros(int range) {
        detail::require(range >= 0, "CoeffSeq: negative range");
        return CoeffSeq(std::vector<cplx>(2 * static_cast<std::size_t>(range) + 1, cplx{0.0}));
    }

    int range() const { return static_cast<int>(values_.size() / 2); }
    std::span<const cplx> values() const { return values_; }
    /// Label of values()[0].
    int first_label() const { return -range(); }

    /// Tagged as the coefficients of a real-valued function.
    bool real_signal() const { return real_signal_; }

    cplx operator[](int n) const {
        const int N = range();
        return (n < -N || n > N) ? cplx{0.0} : values_[static_cast<std::size_t>(n + N)];
    }
    void set(int n, cplx v) {
        const int N = range();
        detail::require(n >= -N && n <= N, "CoeffSeq::set: index outside [-N, N]");
        values_[static_cast<std::size_t>(n + N)] = v;
    }

private:
    std::vector<cplx> values_;
    bool real_signal_ = false;
};

namespace detail {

inline std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

/// values[n] = (1/M) sum_j samples[j] e^{-i n t_j}; exact for a trigonometric polynomial of
/// degree D sampled on M > N + D points.
inline CoeffSeq coeffs_fft(const GridFunction &f, int N) {
    const std::size_t M = f.grid_size();
    detail::require(N >= 0 && 2 * static_cast<std::size_t>(N) + 1 <= M, "coeffs_fft: 2N+1 exceeds the grid size");
    std::vector<cplx> in(f.samples().begin(), f.samples().end());
    std::vector<cplx> out(M);
    fftw_plan plan;
    {
        // Only plan creation/destruction is not thread-safe in FFTW.
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(M), reinterpret_cast<fftw_complex *>(in.data()),
                                reinterpret_cast<fftw_complex *>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    CoeffSeq c = CoeffSeq::zeros(N);
    const double inv = 1.0 / static_cast<double>(M);
    for (int n = -N; n <= N; ++n) {
        const std::size_t k = static_cast<std::size_t>((n % static_cast<long>(M) + static_cast<long>(M)) % static_cast<long>(M));
        c.set(n, out[k] * inv);
    }
    return c;
}

/// Closed-form coefficients of a piecewise cubic. On each piece
///   int p(t) e^{-int} dt = [-e^{-int} sum_{k=0}^{3} p^{(k)}(t) / (in)^{k+1}]_a^b.
inline CoeffSeq coeffs_exact(const PiecewiseFunction &f, int N) {
    detail::require(N >= 0, "coeffs_exact: N must be >= 0");
    std::vector<cplx> vals(2 * static_cast<std::size_t>(N) + 1);
    double c0 = 0.0;
    for (std::size_t i = 0; i < f.piece_count(); ++i) c0 += f.piece(i).integral(f.left(i), f.right(i));
    vals[static_cast<std::size_t>(N)] = c0 / kTwoPi;

    for (int n = 1; n <= N; ++n) {
        cplx acc{0.0};
        const cplx in{0.0, static_cast<double>(n)};
        for (std::size_t i = 0; i < f.piece_count(); ++i) {
            Cubic d = f.piece(i);
            std::array<Cubic, 4> derivs;
            for (auto &slot : derivs) {
                slot = d;
                d = d.derivative();
            }
            auto antiderivative = [&](double t) {
                cplx s{0.0};
                cplx denom = in;
                for (const auto &q : derivs) {
                    s += q(t) / denom;
                    denom *= in;
                }
                return -std::polar(1.0, -n * t) * s;
            };
            acc += antiderivative(f.right(i)) - antiderivative(f.left(i));
        }
        const cplx cn = acc / kTwoPi;
        vals[static_cast<std::size_t>(N + n)] = cn;
        // Real-valued input: c_{-n} = conj(c_n).
        vals[static_cast<std::size_t>(N - n)] = std::conj(cn);
    }
    return CoeffSeq(std::move(vals), true);
}

/// Coefficients of a trigonometric polynomial read off directly.
inline CoeffSeq coefficients(const TrigPoly &f, int N) {
    detail::require(N >= 0, "coefficients: N must be >= 0");
    CoeffSeq c = CoeffSeq::zeros(N);
    for (int n = -N; n <= N; ++n) c.set(n, f.at(n));
    return CoeffSeq(std::vector<cplx>(c.values().begin(), c.values().end()), f.is_real_valued());
}

inline CoeffSeq coefficients(const PiecewiseFunction &f, int N) { return coeffs_exact(f, N); }

inline CoeffSeq coefficients(const Function &f, int N) {
    return std::visit([N](const auto &g) { return coefficients(g, N); }, f);
}

/// (sum |c_n|^q)^{1/q}; q = infinity gives the max.
inline double seq_lq_norm(const CoeffSeq &c, double q) {
    detail::require(q >= 1.0, "seq_lq_norm: q must be >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (const auto &v : c.values()) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (const auto &v : c.values()) acc += std::pow(std::abs(v), q);
    return std::pow(acc, 1.0 / q);
}

/// | ||f||_2^2 - sum_{|n|<=N} |c_n|^2 |, with ||f||_2 from sampling (not from the coefficients).
inline double parseval_gap(const TrigPoly &f) {
    const double norm = lp_norm(f, 2.0);
    const double energy = std::pow(seq_lq_norm(coefficients(f, f.degree()), 2.0), 2);
    return std::abs(norm * norm - energy);
}

inline double parseval_gap(const PiecewiseFunction &f, int N) {
    const double norm = lp_norm(f, 2.0);
    const double energy = std::pow(seq_lq_norm(coeffs_exact(f, N), 2.0), 2);
    return std::abs(norm * norm - energy);
}

/// CSV `n,re,im,abs`, n ascending from -N to N, 17 significant digits.
inline void write_coeffs_csv(std::ostream &os, const CoeffSeq &c) {
    os << "n,re,im,abs\n";
    for (int n = -c.range(); n <= c.range(); ++n) {
        const cplx v = c[n];
        os << n << ',' << detail::fmt17(v.real()) << ',' << detail::fmt17(v.imag()) << ','
           << detail::fmt17(std::abs(v)) << '\n';
    }
}

} // namespace decayenv
