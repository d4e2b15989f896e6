#pragma once

#include "decayenv/detail/numeric.hpp"
#include "decayenv/detail/parallel.hpp"
#include "decayenv/envelope.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace decayenv {

/// Finite vector system phi_0..phi_{K-1} in C^d, in a fixed enumeration order.
struct FrameSpec {
    int dim = 0;
    std::vector<std::vector<cplx>> vectors;

    void validate_shape() const {
        detail::require(dim >= 1, "FrameSpec: dim must be >= 1");
        detail::require(!vectors.empty(), "FrameSpec: no vectors");
        for (const auto &v : vectors) {
            detail::require(static_cast<int>(v.size()) == dim, "FrameSpec: vector length differs from dim");
            for (const auto &x : v)
                detail::require(std::isfinite(x.real()) && std::isfinite(x.imag()), "FrameSpec: non-finite entry");
        }
    }
};

struct FrameBounds {
    double A = 0.0;
    double B = 0.0;
};

/// Dense row-major complex square matrix.
struct Matrix {
    int n = 0;
    std::vector<cplx> a;

    explicit Matrix(int size = 0) : n(size), a(static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {}
    cplx &operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    cplx operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// ---------------------------------------------------------------------------
// Built-in frames
// ---------------------------------------------------------------------------

inline FrameSpec onb_frame(int d) {
    detail::require(d >= 1, "onb: dim must be >= 1");
    FrameSpec f{d, {}};
    for (int k = 0; k < d; ++k) {
        std::vector<cplx> e(static_cast<std::size_t>(d), cplx{0.0});
        e[static_cast<std::size_t>(k)] = 1.0;
        f.vectors.push_back(std::move(e));
    }
    return f;
}

/// Two copies of the standard basis, enumerated e_0, e_0, e_1, e_1, ...
inline FrameSpec union_onb_frame(int d) {
    FrameSpec base = onb_frame(d);
    FrameSpec f{d, {}};
    for (const auto &e : base.vectors) {
        f.vectors.push_back(e);
        f.vectors.push_back(e);
    }
    return f;
}

/// Three unit vectors in R^2 at 90, 210 and 330 degrees.
inline FrameSpec mercedes_frame() {
    FrameSpec f{2, {}};
    for (double deg : {90.0, 210.0, 330.0}) {
        const double t = deg * kPi / 180.0;
        f.vectors.push_back({cplx{std::cos(t)}, cplx{std::sin(t)}});
    }
    return f;
}

/// phi_k = K^{-1/2} (e^{2 pi i k j / K})_{j < d}, k = 0..K-1.
inline FrameSpec harmonic_frame(int d, int K) {
    detail::require(d >= 1 && K >= d, "harmonic: need 1 <= dim <= count");
    FrameSpec f{d, {}};
    const double s = 1.0 / std::sqrt(static_cast<double>(K));
    for (int k = 0; k < K; ++k) {
        std::vector<cplx> v(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            v[static_cast<std::size_t>(j)] = s * std::polar(1.0, kTwoPi * static_cast<double>((long(k) * j) % K) / K);
        f.vectors.push_back(std::move(v));
    }
    return f;
}

inline FrameSpec builtin_frame(const std::string &name, int dim, int count) {
    if (name == "onb") return onb_frame(dim);
    if (name == "union_onb") return union_onb_frame(dim);
    if (name == "mercedes") return mercedes_frame();
    if (name == "harmonic") return harmonic_frame(dim, count);
    throw InvalidArgument("unknown builtin frame '" + name + "'");
}

// ---------------------------------------------------------------------------
// Frame operator and bounds
// ---------------------------------------------------------------------------

/// S = sum_n phi_n phi_n^*
inline Matrix frame_operator(const FrameSpec &frame) {
    frame.validate_shape();
    Matrix S(frame.dim);
    for (const auto &phi : frame.vectors)
        for (int i = 0; i < frame.dim; ++i)
            for (int j = 0; j < frame.dim; ++j)
                S(i, j) += phi[static_cast<std::size_t>(i)] * std::conj(phi[static_cast<std::size_t>(j)]);
    return S;
}

struct EigenResult {
    std::vector<double> values; // ascending
    int sweeps = 0;
    double off_norm = 0.0;
};

inline constexpr int kJacobiMaxSweeps = 100;

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on its real symmetric embedding
/// [[Re H, -Im H], [Im H, Re H]], whose spectrum is that of H with every value doubled.
/// Iterates until the off-diagonal Frobenius norm is at most 1e-12 max(1, ||H||_F).
inline EigenResult hermitian_eigenvalues(const Matrix &H) {
    const int n = H.n, m = 2 * n;
    std::vector<double> a(static_cast<std::size_t>(m) * m);
    auto A = [&](int i, int j) -> double & { return a[static_cast<std::size_t>(i) * m + j]; };
    double fro = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // Symmetrize: tolerate rounding asymmetry in the input.
            const cplx h = 0.5 * (H(i, j) + std::conj(H(j, i)));
            A(i, j) = A(i + n, j + n) = h.real();
            A(i + n, j) = h.imag();
            A(i, j + n) = -h.imag();
            fro += std::norm(h);
        }
    const double tol = 1e-12 * std::max(1.0, std::sqrt(fro));

    auto off = [&] {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j) s += A(i, j) * A(i, j);
        return std::sqrt(s);
    };

    EigenResult r;
    r.off_norm = off();
    while (r.off_norm > tol && r.sweeps < kJacobiMaxSweeps) {
        for (int p = 0; p < m - 1; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
        }
        ++r.sweeps;
        r.off_norm = off();
    }
    std::vector<double> diag(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) diag[static_cast<std::size_t>(i)] = A(i, i);
    std::sort(diag.begin(), diag.end());
    for (int i = 0; i < m; i += 2) r.values.push_back(0.5 * (diag[static_cast<std::size_t>(i)] + diag[static_cast<std::size_t>(i) + 1]));
    return r;
}

inline constexpr int kMaxFrameDim = 64;
inline constexpr double kRankTolerance = 1e-12;

/// Optimal frame constants: extreme eigenvalues of the frame operator.
inline FrameBounds frame_bounds(const FrameSpec &frame) {
    frame.validate_shape();
    detail::require(frame.dim <= kMaxFrameDim, "frame_bounds: dim must be <= 64");
    const auto eig = hermitian_eigenvalues(frame_operator(frame));
    const FrameBounds b{eig.values.front(), eig.values.back()};
    if (b.A <= kRankTolerance)
        throw NotAFrame("frame_bounds: not a frame, the frame operator is singular (min eigenvalue " + detail::fmt17(b.A) + ")");
    return b;
}

inline double frame_trace(const FrameSpec &frame) {
    double t = 0.0;
    for (const auto &v : frame.vectors)
        for (const auto &x : v) t += std::norm(x);
    return t;
}

struct FrameReport {
    double A = 0.0;
    double B = 0.0;
    bool tight = false;
    double trace = 0.0;
};

inline FrameReport frame_report(const FrameSpec &frame) {
    const auto b = frame_bounds(frame);
    return {b.A, b.B, std::abs(b.B - b.A) <= 1e-10 * std::max(1.0, b.B), frame_trace(frame)};
}

// ---------------------------------------------------------------------------
// Frame inequality
// ---------------------------------------------------------------------------

struct FrameInequalityReport {
    FrameBounds bounds;
    int trials = 0;
    double min_quotient = INFINITY;
    double max_quotient = 0.0;
    /// max_n |<x, phi_n>| over all trials (unit x); bounded by sqrt(B).
    double max_coefficient = 0.0;
    std::size_t violations = 0;
    bool pass = true;
};

/// sum_n |<x, phi_n>|^2 for x on the unit sphere of C^d.
inline double frame_energy(const FrameSpec &frame, std::span<const cplx> x, double *max_coeff = nullptr) {
    double s = 0.0, mc = 0.0;
    for (const auto &phi : frame.vectors) {
        cplx ip{0.0};
        for (std::size_t m = 0; m < x.size(); ++m) ip += x[m] * std::conj(phi[m]);
        s += std::norm(ip);
        mc = std::max(mc, std::abs(ip));
    }
    if (max_coeff) *max_coeff = mc;
    return s;
}

inline std::vector<cplx> random_unit_vector(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss;
    std::vector<cplx> x(static_cast<std::size_t>(d));
    double n2 = 0.0;
    for (auto &v : x) {
        v = {gauss(rng), gauss(rng)};
        n2 += std::norm(v);
    }
    for (auto &v : x) v /= std::sqrt(n2);
    return x;
}

/// A - 1e-9 <= sum |<x, phi_n>|^2 <= B + 1e-9 and |<x, phi_n>| <= sqrt(B) + 1e-9 for random unit x.
inline FrameInequalityReport frame_inequality_check(const FrameSpec &frame, int trials, std::uint64_t seed) {
    detail::require(trials >= 1, "frame_inequality_check: trials must be >= 1");
    FrameInequalityReport rep;
    rep.bounds = frame_bounds(frame);
    rep.trials = trials;
    std::vector<double> quotient(static_cast<std::size_t>(trials)), coeff(static_cast<std::size_t>(trials));
    detail::parallel_for(quotient.size(), [&](std::size_t t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        const auto x = random_unit_vector(frame.dim, rng);
        quotient[t] = frame_energy(frame, x, &coeff[t]);
    });
    const double tol = kInequalitySlack;
    const double sqrtB = std::sqrt(rep.bounds.B);
    for (std::size_t t = 0; t < quotient.size(); ++t) {
        rep.min_quotient = std::min(rep.min_quotient, quotient[t]);
        rep.max_quotient = std::max(rep.max_quotient, quotient[t]);
        rep.max_coefficient = std::max(rep.max_coefficient, coeff[t]);
        if (quotient[t] < rep.bounds.A - tol || quotient[t] > rep.bounds.B + tol) ++rep.violations;
        if (coeff[t] > sqrtB + tol) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

/// raw_n = sup over the Y-ball of |<y, phi_n>| = ||(phi_{n,m} w_m)_m||_2, then the suffix maximum.
/// Y must be a weighted l^2 norm covering the frame dimension.
inline Envelope frame_coefficient_envelope(const FrameSpec &frame, const NormSpec &y_norm) {
    frame.validate_shape();
    const auto *w = y_norm.get<WeightedLpNorm>();
    if (!w || w->p != 2.0) throw UnsupportedNorm("frame_coefficient_envelope: Y must be weighted l^2");
    detail::require(static_cast<int>(w->weights.size()) >= frame.dim,
                    "frame_coefficient_envelope: fewer weights than the frame dimension");
    return envelope_sequence(FunctionalFamily::explicit_vectors(frame.vectors), y_norm);
}

} // namespace decayenv
