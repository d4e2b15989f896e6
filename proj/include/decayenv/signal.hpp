#pragma once

// Functions on the circle T = [0, 2pi): band-limited trigonometric polynomials, uniform
// samples, and piecewise cubic functions with jumps. All L^p norms use the normalized
// measure dt / 2pi, so ||e^{int}||_p = 1.

#include "decayenv/detail/numeric.hpp"
#include "decayenv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace decayenv {

/// sum_{n=-N}^{N} c_n e^{int}
class TrigPoly {
public:
    TrigPoly() : coeffs_(1, cplx{0.0}) {}

    /// coeffs[i] is the coefficient of e^{i(i-N)t}; the size must be odd.
    explicit TrigPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
        detail::require(coeffs_.size() % 2 == 1, "TrigPoly: coefficient count must be 2N+1");
        for (const auto &c : coeffs_)
            detail::require(std::isfinite(c.real()) && std::isfinite(c.imag()), "TrigPoly: non-finite coefficient");
    }

    static TrigPoly zero(int degree) {
        detail::require(degree >= 0, "TrigPoly: negative degree");
        return TrigPoly(std::vector<cplx>(2 * static_cast<std::size_t>(degree) + 1, cplx{0.0}));
    }

    int degree() const { return static_cast<int>(coeffs_.size() / 2); }
    std::span<const cplx> coeffs() const { return coeffs_; }

    cplx at(int n) const {
        const int N = degree();
        return (n < -N || n > N) ? cplx{0.0} : coeffs_[static_cast<std::size_t>(n + N)];
    }
    void set(int n, cplx value) {
        const int N = degree();
        detail::require(n >= -N && n <= N, "TrigPoly::set: index outside [-N, N]");
        coeffs_[static_cast<std::size_t>(n + N)] = value;
    }

    cplx operator()(double t) const {
        const int N = degree();
        const cplx step = std::polar(1.0, t);
        cplx e = std::polar(1.0, -N * t);
        cplx acc{0.0};
        for (int n = -N; n <= N; ++n) {
            acc += coeffs_[static_cast<std::size_t>(n + N)] * e;
            e *= step;
        }
        return acc;
    }

    bool is_real_valued(double tol = 1e-14) const {
        for (int n = 0; n <= degree(); ++n)
            if (std::abs(at(-n) - std::conj(at(n))) > tol) return false;
        return true;
    }

    TrigPoly scaled(cplx lambda) const {
        auto c = coeffs_;
        for (auto &v : c) v *= lambda;
        return TrigPoly(std::move(c));
    }

private:
    std::vector<cplx> coeffs_;
};

/// Samples at t_j = 2 pi j / M, M a power of two.
class GridFunction {
public:
    explicit GridFunction(std::vector<cplx> samples) : samples_(std::move(samples)) {
        detail::require(samples_.size() >= 2 && detail::is_power_of_two(samples_.size()),
                        "GridFunction: grid size must be a power of two >= 2");
        for (const auto &s : samples_)
            detail::require(std::isfinite(s.real()) && std::isfinite(s.imag()), "GridFunction: non-finite sample");
    }

    std::size_t grid_size() const { return samples_.size(); }
    std::span<const cplx> samples() const { return samples_; }
    double node(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(samples_.size()); }

private:
    std::vector<cplx> samples_;
};

/// Real polynomial c0 + c1 t + c2 t^2 + c3 t^3 in the absolute variable t.
struct Cubic {
    std::array<double, 4> c{};

    double operator()(double t) const { return ((c[3] * t + c[2]) * t + c[1]) * t + c[0]; }

    Cubic derivative() const { return Cubic{{c[1], 2.0 * c[2], 3.0 * c[3], 0.0}}; }

    int degree() const {
        for (int k = 3; k > 0; --k)
            if (c[k] != 0.0) return k;
        return 0;
    }

    /// Exact integral over [a, b].
    double integral(double a, double b) const {
        auto prim = [&](double t) { return t * (c[0] + t * (c[1] / 2 + t * (c[2] / 3 + t * c[3] / 4))); };
        return prim(b) - prim(a);
    }

    /// Real roots in the open interval (a, b), ascending.
    std::vector<double> roots_in(double a, double b) const {
        std::vector<double> out;
        const int deg = degree();
        if (deg == 0) return out;
        if (deg == 1) {
            const double r = -c[0] / c[1];
            if (r > a && r < b) out.push_back(r);
            return out;
        }
        // Split at critical points; p is monotone between them.
        std::vector<double> cuts{a};
        for (double r : derivative().roots_in(a, b)) cuts.push_back(r);
        cuts.push_back(b);
        const Cubic &p = *this;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double lo = cuts[i], hi = cuts[i + 1];
            double flo = p(lo), fhi = p(hi);
            if (i > 0 && flo == 0.0) {
                if (out.empty() || out.back() != lo) out.push_back(lo);
                continue;
            }
            if (flo * fhi >= 0.0) continue;
            for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = p(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        return out;
    }
};

/// Piecewise cubic function on [0, 2pi). Piece i lives on [breakpoints[i], breakpoints[i+1]),
/// the last piece ends at 2pi.
class PiecewiseFunction {
public:
    PiecewiseFunction(std::vector<double> breakpoints, std::vector<Cubic> pieces)
        : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
        detail::require(!breaks_.empty() && breaks_.size() == pieces_.size(),
                        "PiecewiseFunction: need one piece per breakpoint");
        detail::require(breaks_.front() == 0.0, "PiecewiseFunction: first breakpoint must be 0");
        for (std::size_t i = 0; i < breaks_.size(); ++i) {
            detail::require(std::isfinite(breaks_[i]) && breaks_[i] < kTwoPi,
                            "PiecewiseFunction: breakpoints must lie in [0, 2pi)");
            if (i > 0) detail::require(breaks_[i] > breaks_[i - 1], "PiecewiseFunction: breakpoints must increase");
            for (double c : pieces_[i].c) detail::require(std::isfinite(c), "PiecewiseFunction: non-finite coefficient");
        }
    }

    std::size_t piece_count() const { return pieces_.size(); }
    const Cubic &piece(std::size_t i) const { return pieces_[i]; }
    double left(std::size_t i) const { return breaks_[i]; }
    double right(std::size_t i) const { return i + 1 < breaks_.size() ? breaks_[i + 1] : kTwoPi; }
    std::span<const double> breakpoints() const { return breaks_; }

    /// Right-continuous value at t (t taken modulo 2pi).
    double operator()(double t) const { return pieces_[piece_index(t)](wrap(t)); }

    /// Value with jumps averaged: (f(t-) + f(t+)) / 2 at breakpoints.
    double symmetric_value(double t) const {
        t = wrap(t);
        const std::size_t i = piece_index(t);
        if (t != breaks_[i]) return pieces_[i](t);
        const std::size_t prev = (i == 0 ? pieces_.size() - 1 : i - 1);
        const double left_limit = pieces_[prev](i == 0 ? kTwoPi : t);
        return 0.5 * (left_limit + pieces_[i](t));
    }

    /// Jump f(t_i+) - f(t_i-) at breakpoint i; i == 0 is the wrap-around 2pi -> 0.
    double jump(std::size_t i) const {
        const std::size_t prev = (i == 0 ? pieces_.size() - 1 : i - 1);
        return pieces_[i](breaks_[i]) - pieces_[prev](right(prev));
    }

    bool is_continuous(double tol = 1e-12) const {
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (std::abs(jump(i)) > tol) return false;
        return true;
    }

    PiecewiseFunction scaled(double lambda) const {
        auto p = pieces_;
        for (auto &q : p)
            for (auto &c : q.c) c *= lambda;
        return {breaks_, std::move(p)};
    }

    PiecewiseFunction plus_constant(double k) const {
        auto p = pieces_;
        for (auto &q : p) q.c[0] += k;
        return {breaks_, std::move(p)};
    }

    static double wrap(double t) {
        double r = std::fmod(t, kTwoPi);
        if (r < 0.0) r += kTwoPi;
        return r >= kTwoPi ? 0.0 : r;
    }

private:
    std::size_t piece_index(double t) const {
        t = wrap(t);
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        return static_cast<std::size_t>(std::distance(breaks_.begin(), it)) - 1;
    }

    std::vector<double> breaks_;
    std::vector<Cubic> pieces_;
};

/// a f + b g on the union of both breakpoint sets.
inline PiecewiseFunction linear_combination(double a, const PiecewiseFunction &f, double b,
                                            const PiecewiseFunction &g) {
    std::vector<double> br(f.breakpoints().begin(), f.breakpoints().end());
    br.insert(br.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<Cubic> pieces;
    auto find_piece = [](const PiecewiseFunction &h, double t) -> const Cubic & {
        std::size_t i = 0;
        while (i + 1 < h.piece_count() && h.left(i + 1) <= t) ++i;
        return h.piece(i);
    };
    for (double t : br) {
        const Cubic &p = find_piece(f, t), &q = find_piece(g, t);
        Cubic r;
        for (int k = 0; k < 4; ++k) r.c[k] = a * p.c[k] + b * q.c[k];
        pieces.push_back(r);
    }
    return {std::move(br), std::move(pieces)};
}

using Function = std::variant<TrigPoly, PiecewiseFunction>;

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

inline TrigPoly constant_function(double value = 1.0) { return TrigPoly(std::vector<cplx>{cplx{value}}); }

inline TrigPoly complex_exp(int k) {
    TrigPoly f = TrigPoly::zero(std::abs(k));
    f.set(k, 1.0);
    return f;
}

/// 1 on [0, pi), -1 on [pi, 2pi).
inline PiecewiseFunction square_wave() { return {{0.0, kPi}, {Cubic{{1.0}}, Cubic{{-1.0}}}}; }

/// (pi - t) / 2 on (0, 2pi).
inline PiecewiseFunction sawtooth() { return {{0.0}, {Cubic{{kPi / 2, -0.5}}}}; }

/// |pi - t| - pi/2.
inline PiecewiseFunction triangle() {
    return {{0.0, kPi}, {Cubic{{kPi / 2, -1.0}}, Cubic{{-1.5 * kPi, 1.0}}}};
}

/// sum_{k<K} 2^{-alpha k} cos(2^k t).
inline TrigPoly weierstrass(double alpha, int terms) {
    detail::require(alpha > 0.0 && alpha <= 1.0, "weierstrass: alpha must lie in (0, 1]");
    detail::require(terms >= 1 && terms <= 24, "weierstrass: K must lie in [1, 24]");
    TrigPoly f = TrigPoly::zero(1 << (terms - 1));
    for (int k = 0; k < terms; ++k) {
        const double a = 0.5 * std::pow(2.0, -alpha * k);
        f.set(1 << k, a);
        f.set(-(1 << k), a);
    }
    return f;
}

/// Fejer kernel: coefficients 1 - |n| / (N + 1).
inline TrigPoly fejer(int N) {
    detail::require(N >= 0, "fejer: N must be >= 0");
    TrigPoly f = TrigPoly::zero(N);
    for (int n = -N; n <= N; ++n) f.set(n, 1.0 - std::abs(n) / (N + 1.0));
    return f;
}

/// Builds a named corpus member. Parameters are positional:
/// complex_exp(k), weierstrass(alpha, K), fejer(N); the rest take none.
inline Function builtin(const std::string &name, std::span<const double> params = {}) {
    auto param = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
    auto integral = [](double v, const char *what) {
        detail::require(std::isfinite(v) && v == std::floor(v), std::string(what) + " must be an integer");
        return static_cast<int>(v);
    };
    if (name == "constant") return constant_function(param(0, 1.0));
    if (name == "complex_exp") return complex_exp(integral(param(0, 1.0), "complex_exp: k"));
    if (name == "square_wave") return square_wave();
    if (name == "sawtooth") return sawtooth();
    if (name == "triangle") return triangle();
    if (name == "weierstrass") return weierstrass(param(0, 0.5), integral(param(1, 8.0), "weierstrass: K"));
    if (name == "fejer") return fejer(integral(param(0, 4.0), "fejer: N"));
    throw InvalidArgument("unknown builtin function '" + name + "'");
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

inline GridFunction sample(const TrigPoly &f, std::size_t M) {
    detail::require(M >= 2 && detail::is_power_of_two(M), "sample: grid size must be a power of two >= 2");
    std::vector<cplx> s(M);
    for (std::size_t j = 0; j < M; ++j) s[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(M));
    return GridFunction(std::move(s));
}

/// Jumps are sampled at their midpoint value.
inline GridFunction sample(const PiecewiseFunction &f, std::size_t M) {
    detail::require(M >= 2 && detail::is_power_of_two(M), "sample: grid size must be a power of two >= 2");
    std::vector<cplx> s(M);
    for (std::size_t j = 0; j < M; ++j)
        s[j] = f.symmetric_value(kTwoPi * static_cast<double>(j) / static_cast<double>(M));
    return GridFunction(std::move(s));
}

inline GridFunction sample(const Function &f, std::size_t M) {
    return std::visit([M](const auto &g) { return sample(g, M); }, f);
}

// ---------------------------------------------------------------------------
// Variation and norms
// ---------------------------------------------------------------------------

/// V_[0,2pi](f): integral of |f'| over every piece plus all jump magnitudes, the
/// wrap-around jump at 2pi -> 0 included.
inline double total_variation(const PiecewiseFunction &f) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const Cubic &p = f.piece(i);
        const double a = f.left(i), b = f.right(i);
        double prev_t = a;
        for (double r : p.derivative().roots_in(a, b)) {
            v += std::abs(p(r) - p(prev_t));
            prev_t = r;
        }
        v += std::abs(p(b) - p(prev_t));
        v += std::abs(f.jump(i));
    }
    return v;
}

/// ((1/2pi) int |f|^p)^{1/p} by 32-point Gauss-Legendre on every piece, pieces further split
/// at zeros of f so |f|^p is smooth on each panel.
inline double lp_norm(const PiecewiseFunction &f, double p) {
    detail::require(p >= 1.0 && std::isfinite(p), "lp_norm: p must lie in [1, inf)");
    const auto &gl = detail::gauss_legendre_32();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const Cubic &q = f.piece(i);
        std::vector<double> cuts{f.left(i)};
        for (double r : q.roots_in(f.left(i), f.right(i))) cuts.push_back(r);
        cuts.push_back(f.right(i));
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            acc += gl.integrate([&](double t) { return std::pow(std::abs(q(t)), p); }, cuts[k], cuts[k + 1]);
    }
    return std::pow(acc / kTwoPi, 1.0 / p);
}

/// Riemann sum over the grid.
inline double lp_norm(const GridFunction &f, double p) {
    detail::require(p >= 1.0 && std::isfinite(p), "lp_norm: p must lie in [1, inf)");
    double acc = 0.0;
    for (const auto &s : f.samples()) acc += std::pow(std::abs(s), p);
    return std::pow(acc / static_cast<double>(f.grid_size()), 1.0 / p);
}

/// Grid with more than (p + 2) * degree points; the sum is exact for even integer p and
/// converges spectrally otherwise.
inline double lp_norm(const TrigPoly &f, double p) {
    detail::require(p >= 1.0 && std::isfinite(p), "lp_norm: p must lie in [1, inf)");
    const std::size_t need = static_cast<std::size_t>(std::ceil((p + 2.0) * (f.degree() + 1)));
    const std::size_t M = detail::next_power_of_two(std::max<std::size_t>(4096, need));
    return lp_norm(sample(f, M), p);
}

inline double lp_norm(const Function &f, double p) {
    return std::visit([p](const auto &g) { return lp_norm(g, p); }, f);
}

namespace detail {

inline double lip_from_samples(std::span<const cplx> v, double alpha) {
    const std::size_t P = v.size();
    std::vector<double> inv_dist(P, 0.0);
    for (std::size_t k = 1; k < P; ++k) {
        const double d = std::min(k, P - k) * kTwoPi / static_cast<double>(P);
        inv_dist[k] = std::pow(d, -alpha);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = i + 1; j < P; ++j) best = std::max(best, std::abs(v[i] - v[j]) * inv_dist[j - i]);
    return best;
}

} // namespace detail

/// max |f(x) - f(y)| / d(x, y)^alpha over pairs of a uniform probe grid, d the circle
/// distance. This is a lower bound of the Lip_alpha seminorm; it is non-decreasing under
/// grid refinement (nested grids).
inline double lip_seminorm_estimate(const TrigPoly &f, double alpha, int probe_grid) {
    detail::require(alpha > 0.0 && alpha <= 1.0, "lip_seminorm_estimate: alpha must lie in (0, 1]");
    detail::require(probe_grid >= 8, "lip_seminorm_estimate: probe_grid must be >= 8");
    std::vector<cplx> v(static_cast<std::size_t>(probe_grid));
    for (int j = 0; j < probe_grid; ++j) v[static_cast<std::size_t>(j)] = f(kTwoPi * j / probe_grid);
    return detail::lip_from_samples(v, alpha);
}

/// Probes every (M / probe_grid)-th sample; probe_grid must divide the grid size.
inline double lip_seminorm_estimate(const GridFunction &f, double alpha, int probe_grid) {
    detail::require(alpha > 0.0 && alpha <= 1.0, "lip_seminorm_estimate: alpha must lie in (0, 1]");
    detail::require(probe_grid >= 8, "lip_seminorm_estimate: probe_grid must be >= 8");
    const std::size_t P = static_cast<std::size_t>(probe_grid);
    detail::require(P <= f.grid_size() && f.grid_size() % P == 0,
                    "lip_seminorm_estimate: probe_grid must divide the grid size");
    const std::size_t stride = f.grid_size() / P;
    std::vector<cplx> v(P);
    for (std::size_t j = 0; j < P; ++j) v[j] = f.samples()[j * stride];
    return detail::lip_from_samples(v, alpha);
}

} // namespace decayenv
