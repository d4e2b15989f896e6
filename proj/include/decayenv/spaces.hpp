#pragma once

// Normed spaces Y and X of the decay problem, acting on labeled coefficient vectors, and
// delta-nets of truncated Hilbertian unit balls.

#include "decayenv/detail/numeric.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/fourier.hpp"
#include "decayenv/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace decayenv {

/// Coefficients y(first_label + i) = values[i]. A CoeffSeq is the view with first_label = -N,
/// a coordinate vector the view with first_label = 0.
struct CoeffView {
    int first_label = 0;
    std::span<const cplx> values;

    int last_label() const { return first_label + static_cast<int>(values.size()) - 1; }
    cplx at(int label) const {
        const int i = label - first_label;
        return (i < 0 || i >= static_cast<int>(values.size())) ? cplx{0.0} : values[static_cast<std::size_t>(i)];
    }
};

inline CoeffView view(const CoeffSeq &c) { return {c.first_label(), c.values()}; }
inline CoeffView coordinates(std::span<const cplx> v) { return {0, v}; }

// ---------------------------------------------------------------------------
// NormSpec
// ---------------------------------------------------------------------------

struct LpNorm {
    double p = 2.0;
};
/// ||y||^2 = sum (1 + n^2)^s |y(n)|^2
struct SobolevNorm {
    double s = 1.0;
};
/// ||y|| = (sum |y(n) / w_|n||^p)^{1/p}
struct WeightedLpNorm {
    std::vector<double> weights;
    double p = 2.0;
};
/// ||f||_1 + V(f)
struct BVNorm {};
/// sup |f| + [f]_alpha, both estimated on a probe grid.
struct LipAlphaNorm {
    double alpha = 1.0;
    int probe_grid = 256;
};

class NormSpec {
public:
    using Variant = std::variant<LpNorm, SobolevNorm, WeightedLpNorm, BVNorm, LipAlphaNorm>;

    static NormSpec lp(double p) {
        detail::require(p >= 1.0 && std::isfinite(p), "NormSpec: p must lie in [1, inf)");
        return NormSpec(LpNorm{p});
    }
    static NormSpec sobolev(double s) {
        detail::require(s > 0.0 && std::isfinite(s), "NormSpec: Sobolev order s must be > 0");
        return NormSpec(SobolevNorm{s});
    }
    static NormSpec weighted_lp(std::vector<double> weights, double p) {
        detail::require(p >= 1.0 && std::isfinite(p), "NormSpec: p must lie in [1, inf)");
        detail::require(!weights.empty(), "NormSpec: weighted_lp needs at least one weight");
        for (double w : weights)
            detail::require(w > 0.0 && std::isfinite(w), "NormSpec: weights must be positive and finite");
        return NormSpec(WeightedLpNorm{std::move(weights), p});
    }
    /// w_n = ratio^n for n = 0..dim-1.
    static NormSpec geometric_weights(double ratio, int dim, double p = 2.0) {
        detail::require(ratio > 0.0 && dim >= 1, "NormSpec: geometric weights need ratio > 0 and dim >= 1");
        std::vector<double> w(static_cast<std::size_t>(dim));
        for (int n = 0; n < dim; ++n) w[static_cast<std::size_t>(n)] = std::pow(ratio, n);
        return weighted_lp(std::move(w), p);
    }
    static NormSpec bv() { return NormSpec(BVNorm{}); }
    static NormSpec lip_alpha(double alpha, int probe_grid = 256) {
        detail::require(alpha > 0.0 && alpha <= 1.0, "NormSpec: alpha must lie in (0, 1]");
        detail::require(probe_grid >= 8 && detail::is_power_of_two(static_cast<std::size_t>(probe_grid)),
                        "NormSpec: probe grid must be a power of two >= 8");
        return NormSpec(LipAlphaNorm{alpha, probe_grid});
    }

    const Variant &variant() const { return v_; }
    template <class T>
    const T *get() const {
        return std::get_if<T>(&v_);
    }

    std::string tag() const {
        return std::visit(
            [](const auto &n) -> std::string {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, LpNorm>) return "lp";
                else if constexpr (std::is_same_v<T, SobolevNorm>) return "sobolev_hs";
                else if constexpr (std::is_same_v<T, WeightedLpNorm>) return "weighted_lp";
                else if constexpr (std::is_same_v<T, BVNorm>) return "bv";
                else return "lip_alpha";
            },
            v_);
    }

    /// Inner-product norm on coefficient vectors: sum a(n) |y(n)|^2 with a(n) = axis_weight(n).
    bool is_hilbertian() const {
        if (auto *l = get<LpNorm>()) return l->p == 2.0;
        if (get<SobolevNorm>()) return true;
        if (auto *w = get<WeightedLpNorm>()) return w->p == 2.0;
        return false;
    }

    /// a(n) in ||y||^2 = sum a(n) |y(n)|^2; only for Hilbertian specs.
    double axis_weight(int label) const {
        if (!is_hilbertian()) throw UnsupportedNorm("axis_weight: norm '" + tag() + "' is not Hilbertian");
        if (auto *s = get<SobolevNorm>()) return std::pow(1.0 + double(label) * label, s->s);
        if (get<WeightedLpNorm>()) {
            const double wn = weight(label);
            return 1.0 / (wn * wn);
        }
        return 1.0;
    }

    /// w_|n| of a weighted spec.
    double weight(int label) const {
        const auto *w = get<WeightedLpNorm>();
        if (!w) throw UnsupportedNorm("weight: norm '" + tag() + "' has no weights");
        const std::size_t k = static_cast<std::size_t>(std::abs(label));
        if (k >= w->weights.size())
            throw InvalidArgument("weighted_lp: label " + std::to_string(label) + " outside the weight range");
        return w->weights[k];
    }

private:
    explicit NormSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// ---------------------------------------------------------------------------
// norm_eval
// ---------------------------------------------------------------------------

namespace detail {

inline TrigPoly synthesize(CoeffView y) {
    const int D = std::max(std::abs(y.first_label), std::abs(y.last_label()));
    TrigPoly f = TrigPoly::zero(D);
    for (int n = y.first_label; n <= y.last_label(); ++n) f.set(n, y.at(n));
    return f;
}

inline double lip_norm_on_grid(const GridFunction &g, const LipAlphaNorm &l) {
    const std::size_t stride = g.grid_size() / static_cast<std::size_t>(l.probe_grid);
    double sup = 0.0;
    for (std::size_t j = 0; j < g.grid_size(); j += stride) sup = std::max(sup, std::abs(g.samples()[j]));
    return sup + lip_seminorm_estimate(g, l.alpha, l.probe_grid);
}

} // namespace detail

inline double norm_eval(const NormSpec &spec, CoeffView y) {
    if (auto *l = spec.get<LpNorm>()) {
        if (l->p == 2.0) {
            double acc = 0.0;
            for (const auto &v : y.values) acc += std::norm(v);
            return std::sqrt(acc);
        }
        return lp_norm(detail::synthesize(y), l->p);
    }
    if (auto *s = spec.get<SobolevNorm>()) {
        double acc = 0.0;
        for (int n = y.first_label; n <= y.last_label(); ++n)
            acc += std::pow(1.0 + double(n) * n, s->s) * std::norm(y.at(n));
        return std::sqrt(acc);
    }
    if (auto *w = spec.get<WeightedLpNorm>()) {
        double acc = 0.0;
        for (int n = y.first_label; n <= y.last_label(); ++n) {
            const cplx v = y.at(n);
            if (v == cplx{0.0}) continue;
            acc += std::pow(std::abs(v) / spec.weight(n), w->p);
        }
        return std::pow(acc, 1.0 / w->p);
    }
    if (auto *l = spec.get<LipAlphaNorm>()) {
        return detail::lip_norm_on_grid(sample(detail::synthesize(y), static_cast<std::size_t>(l->probe_grid)), *l);
    }
    throw UnsupportedNorm("norm_eval: '" + spec.tag() + "' needs a piecewise function, not coefficients");
}

inline double norm_eval(const NormSpec &spec, const CoeffSeq &y) { return norm_eval(spec, view(y)); }

inline double norm_eval(const NormSpec &spec, const TrigPoly &f) {
    if (auto *l = spec.get<LpNorm>()) return lp_norm(f, l->p);
    if (spec.get<BVNorm>()) throw UnsupportedNorm("norm_eval: bv needs a piecewise function");
    return norm_eval(spec, view(coefficients(f, f.degree())));
}

inline double norm_eval(const NormSpec &spec, const PiecewiseFunction &f) {
    if (auto *l = spec.get<LpNorm>()) return lp_norm(f, l->p);
    if (spec.get<BVNorm>()) return lp_norm(f, 1.0) + total_variation(f);
    if (auto *l = spec.get<LipAlphaNorm>())
        return detail::lip_norm_on_grid(sample(f, static_cast<std::size_t>(l->probe_grid)), *l);
    throw UnsupportedNorm("norm_eval: '" + spec.tag() + "' needs coefficients, not a piecewise function");
}

inline double norm_eval(const NormSpec &spec, const GridFunction &f) {
    if (auto *l = spec.get<LpNorm>()) return lp_norm(f, l->p);
    if (auto *l = spec.get<LipAlphaNorm>()) {
        detail::require(f.grid_size() % static_cast<std::size_t>(l->probe_grid) == 0 &&
                            f.grid_size() >= static_cast<std::size_t>(l->probe_grid),
                        "norm_eval: probe grid must divide the grid size");
        return detail::lip_norm_on_grid(f, *l);
    }
    throw UnsupportedNorm("norm_eval: '" + spec.tag() + "' is not defined on grid samples");
}

inline double norm_eval(const NormSpec &spec, const Function &f) {
    return std::visit([&](const auto &g) { return norm_eval(spec, g); }, f);
}

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

/// Y inside X with a caller-declared compactness flag.
struct EmbeddingSpec {
    NormSpec y_norm;
    NormSpec x_norm;
    bool compact = false;
};

struct CompactnessCheck {
    bool decidable = false;
    bool consistent = true;
    std::string reason;
};

/// X is the l^2 / L^2 norm on coefficients.
inline bool is_l2(const NormSpec &x) {
    if (auto *l = x.get<LpNorm>()) return l->p == 2.0;
    if (auto *w = x.get<WeightedLpNorm>())
        return w->p == 2.0 && std::all_of(w->weights.begin(), w->weights.end(), [](double v) { return v == 1.0; });
    return false;
}

/// Checks the declared flag where that is decidable: Sobolev into L^2 is compact (Rellich);
/// weighted l^2 into l^2 is compact iff the weights trend to zero on the finite range
/// (max of the last quarter strictly below the max of the first quarter); Y = X is not.
inline CompactnessCheck validate_compactness(const EmbeddingSpec &emb) {
    CompactnessCheck out;
    auto verdict = [&](bool truth, std::string why) {
        out.decidable = true;
        out.consistent = (truth == emb.compact);
        out.reason = std::move(why);
    };
    if (!is_l2(emb.x_norm)) {
        out.reason = "compactness not decidable for X = " + emb.x_norm.tag();
        return out;
    }
    if (emb.y_norm.get<SobolevNorm>()) {
        verdict(true, "H^s into L^2 with s > 0 is compact");
    } else if (auto *w = emb.y_norm.get<WeightedLpNorm>()) {
        if (is_l2(emb.y_norm)) {
            verdict(false, "identity on l^2 is not compact");
        } else {
            const auto &ws = w->weights;
            const std::size_t q = std::max<std::size_t>(1, (ws.size() + 3) / 4);
            const double head = *std::max_element(ws.begin(), ws.begin() + static_cast<long>(q));
            const double tail = *std::max_element(ws.end() - static_cast<long>(q), ws.end());
            const bool decays = ws.size() >= 2 && tail < head;
            verdict(decays, decays ? "weights trend to zero" : "weights do not trend to zero");
        }
    } else if (auto *l = emb.y_norm.get<LpNorm>()) {
        verdict(false, "L^" + detail::fmt17(l->p) + " into L^2 is not compact");
    } else {
        out.reason = "compactness not decidable for Y = " + emb.y_norm.tag();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nets
// ---------------------------------------------------------------------------

/// Which coefficient labels a net covers. Complex labels contribute two real coordinates
/// (re, im), real labels one.
struct NetDomain {
    std::vector<int> labels;
    bool complex_coords = true;

    std::size_t real_dim() const { return labels.size() * (complex_coords ? 2 : 1); }

    /// Labels 0..d-1.
    static NetDomain leading(int d, bool complex_coords) {
        NetDomain dom{{}, complex_coords};
        for (int k = 0; k < d; ++k) dom.labels.push_back(k);
        return dom;
    }
    /// d consecutive labels centred on 0 (for d = 3: -1, 0, 1).
    static NetDomain centred(int d, bool complex_coords) {
        NetDomain dom{{}, complex_coords};
        for (int k = 0; k < d; ++k) dom.labels.push_back(k - (d - 1) / 2);
        return dom;
    }

    int label_of_axis(std::size_t axis) const { return labels[complex_coords ? axis / 2 : axis]; }

    /// Real coordinates -> coefficient vector over [min label, max label].
    std::vector<cplx> to_coeffs(std::span<const double> point, int &first_label) const {
        const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
        first_label = *lo;
        std::vector<cplx> c(static_cast<std::size_t>(*hi - *lo + 1), cplx{0.0});
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const std::size_t slot = static_cast<std::size_t>(labels[i] - *lo);
            c[slot] = complex_coords ? cplx{point[2 * i], point[2 * i + 1]} : cplx{point[i]};
        }
        return c;
    }
};

/// S_m: finite subset of the truncated Y-unit ball, delta-dense in the X-norm.
struct Net {
    int stage = 1;
    double delta = 0.0;
    NetDomain domain;
    std::vector<std::vector<double>> points;
};

inline constexpr std::size_t kMaxNetRealDim = 8;
inline constexpr double kMaxNetPoints = 1e7;

namespace detail {

/// Euclidean projection of g onto {x : sum a_i x_i^2 <= 1}. Solves
/// phi(lambda) = sum a_i g_i^2 / (1 + lambda a_i)^2 - 1 = 0 by Newton from lambda = 0, which
/// is monotone because phi is convex and decreasing.
inline void project_to_ellipsoid(std::span<double> x, std::span<const double> a) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += a[i] * x[i] * x[i];
    if (q <= 1.0) return;
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        double phi = -1.0, dphi = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double den = 1.0 + lambda * a[i];
            const double t = a[i] * x[i] * x[i] / (den * den);
            phi += t;
            dphi -= 2.0 * a[i] * t / den;
        }
        if (phi <= 1e-15 || dphi == 0.0) break;
        const double step = phi / dphi;
        lambda -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, lambda)) break;
    }
    q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] /= (1.0 + lambda * a[i]);
        q += a[i] * x[i] * x[i];
    }
    if (q > 1.0) {
        const double s = 1.0 / std::sqrt(q);
        for (auto &v : x) v *= s;
    }
}

struct NetGrid {
    std::vector<double> axis_weights; // a_i per real axis
    std::vector<long> half_counts;    // grid indices run over [-K_i, K_i]
    double spacing = 0.0;
    double count = 1.0;
};

inline NetGrid plan_net(const NormSpec &y_norm, const NetDomain &domain, const NormSpec &x_norm, double delta) {
    if (!y_norm.is_hilbertian()) throw UnsupportedNorm("net: Y-norm '" + y_norm.tag() + "' is not Hilbertian");
    if (!is_l2(x_norm)) throw UnsupportedNorm("net: X-norm must be l^2 / L^2");
    detail::require(delta > 0.0 && std::isfinite(delta), "net: delta must be positive");
    detail::require(!domain.labels.empty(), "net: empty domain");
    const std::size_t d = domain.real_dim();
    if (d > kMaxNetRealDim) throw BudgetExceeded("net: real dimension " + std::to_string(d) + " exceeds 8");
    NetGrid g;
    g.spacing = 2.0 * delta / std::sqrt(static_cast<double>(d));
    for (std::size_t axis = 0; axis < d; ++axis) {
        const double a = y_norm.axis_weight(domain.label_of_axis(axis));
        const long K = static_cast<long>(std::ceil(1.0 / std::sqrt(a) / g.spacing - 1e-12));
        g.axis_weights.push_back(a);
        g.half_counts.push_back(K);
        g.count *= static_cast<double>(2 * K + 1);
    }
    if (g.count > kMaxNetPoints)
        throw BudgetExceeded("net: " + fmt17(g.count) + " points exceed the budget of 1e7");
    return g;
}

} // namespace detail

/// Predicted number of points of unit_ball_net(y_norm, domain, x_norm, delta).
inline double net_size(const NormSpec &y_norm, const NetDomain &domain, const NormSpec &x_norm, double delta) {
    return detail::plan_net(y_norm, domain, x_norm, delta).count;
}

/// Streams the net points (real coordinates) in grid-index order without storing them.
/// Every point of the axis-aligned grid of spacing 2 delta / sqrt(d) that covers the bounding
/// box of the Y-ball is projected onto the ball; the projection is non-expansive in the
/// Euclidean X-norm, so every ball point stays within delta of some net point.
inline std::size_t for_each_net_point(const NormSpec &y_norm, const NetDomain &domain, const NormSpec &x_norm,
                                      double delta, const std::function<void(std::span<const double>)> &visit) {
    const auto g = detail::plan_net(y_norm, domain, x_norm, delta);
    const std::size_t d = g.half_counts.size();
    std::vector<long> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = -g.half_counts[i];
    std::vector<double> x(d);
    std::size_t n = 0;
    while (true) {
        for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(idx[i]) * g.spacing;
        detail::project_to_ellipsoid(x, g.axis_weights);
        visit(x);
        ++n;
        std::size_t i = 0;
        while (i < d && idx[i] == g.half_counts[i]) {
            idx[i] = -g.half_counts[i];
            ++i;
        }
        if (i == d) break;
        ++idx[i];
    }
    return n;
}

inline Net unit_ball_net(const NormSpec &y_norm, const NetDomain &domain, const NormSpec &x_norm, double delta,
                         int stage = 1) {
    Net net{stage, delta, domain, {}};
    for_each_net_point(y_norm, domain, x_norm, delta,
                       [&](std::span<const double> p) { net.points.emplace_back(p.begin(), p.end()); });
    return net;
}

/// Uniform sample from the truncated Hilbertian Y-ball (real coordinates).
inline std::vector<double> sample_ball_point(const NormSpec &y_norm, const NetDomain &domain, std::mt19937_64 &rng) {
    const std::size_t d = domain.real_dim();
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    std::vector<double> x(d);
    double r2 = 0.0;
    for (auto &v : x) {
        v = gauss(rng);
        r2 += v * v;
    }
    const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(d)) / std::sqrt(r2);
    for (std::size_t i = 0; i < d; ++i) x[i] *= radius / std::sqrt(y_norm.axis_weight(domain.label_of_axis(i)));
    return x;
}

/// Largest observed X-distance from a random ball point to its nearest net point.
inline double covering_radius_sample(const Net &net, const NormSpec &y_norm, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const auto y = sample_ball_point(y_norm, net.domain, rng);
        double best = INFINITY;
        for (const auto &z : net.points) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) d2 += (y[i] - z[i]) * (y[i] - z[i]);
            best = std::min(best, d2);
        }
        worst = std::max(worst, std::sqrt(best));
    }
    return worst;
}

} // namespace decayenv
