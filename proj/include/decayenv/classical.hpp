#pragma once

// Classical coefficient inequalities on the circle, evaluated on concrete functions:
// Hausdorff-Young, L^p in L^2 for p > 2, the bounded-variation bound, Riemann-Lebesgue and
// smoothness decay (the last two as finite-horizon evidence only).

#include "decayenv/detail/numeric.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/fourier.hpp"
#include "decayenv/signal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace decayenv {

/// holds <=> lhs <= rhs + tolerance
struct CheckResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double tolerance = 0.0;
    std::optional<double> witness;
    /// lhs / rhs where a sharpness ratio is meaningful.
    std::optional<double> ratio;
    /// Finite-horizon trend evidence for a limit statement, not a proof.
    bool evidence = false;
};

inline CheckResult make_check(std::string name, double lhs, double rhs, double tolerance) {
    return {std::move(name), lhs, rhs, lhs <= rhs + tolerance, tolerance, std::nullopt, std::nullopt, false};
}

/// ||(c_n)_{|n|<=N}||_q <= ||f||_p, 1 < p <= 2, 1/p + 1/q = 1.
inline CheckResult hausdorff_young(const Function &f, double p, int N) {
    detail::require(p > 1.0 && p <= 2.0, "hausdorff_young: p must lie in (1, 2]");
    const double q = detail::conjugate_exponent(p);
    return make_check("hausdorff_young", seq_lq_norm(coefficients(f, N), q), lp_norm(f, p), 1e-9);
}

/// ||f||_2 <= ||f||_p for p > 2 (normalized measure).
inline CheckResult l2_membership(const Function &f, double p) {
    detail::require(p > 2.0 && std::isfinite(p), "l2_membership: p must be > 2");
    return make_check("l2_membership", lp_norm(f, 2.0), lp_norm(f, p), 1e-9);
}

/// max_{1<=|n|<=N} |c_n| 2 pi |n| <= V(f); the witness is the maximizing n.
inline CheckResult bv_bound(const PiecewiseFunction &f, int N) {
    detail::require(N >= 1, "bv_bound: N must be >= 1");
    const CoeffSeq c = coeffs_exact(f, N);
    double best = 0.0;
    int arg = 1;
    for (int n = 1; n <= N; ++n) {
        const double v = std::max(std::abs(c[n]), std::abs(c[-n])) * kTwoPi * n;
        if (v > best) {
            best = v;
            arg = n;
        }
    }
    auto r = make_check("bv_bound", best, total_variation(f), 1e-9);
    r.witness = arg;
    if (r.rhs > 0.0) r.ratio = r.lhs / r.rhs;
    return r;
}

/// Least-squares slope of log |c_n| against log n over the given indices.
inline double decay_exponent(const CoeffSeq &c, const std::vector<int> &indices) {
    std::vector<std::pair<double, double>> pts;
    for (int n : indices) {
        detail::require(n > 0, "decay_exponent: indices must be positive");
        const double a = std::abs(c[n]);
        if (n <= c.range() && a > 0.0) pts.emplace_back(std::log(double(n)), std::log(a));
    }
    if (pts.size() < 3) throw InvalidArgument("decay_exponent: fewer than 3 usable points");
    double mx = 0.0, my = 0.0;
    for (const auto &[x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= double(pts.size());
    my /= double(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto &[x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
}

/// Odd n in [1, up_to].
inline std::vector<int> odd_indices(int up_to) {
    std::vector<int> v;
    for (int n = 1; n <= up_to; n += 2) v.push_back(n);
    return v;
}

/// n = 2^k for k = 0..K-1.
inline std::vector<int> lacunary_indices(int K) {
    std::vector<int> v;
    for (int k = 0; k < K; ++k) v.push_back(1 << k);
    return v;
}

inline constexpr double kLittleOMargin = 0.05;

/// c_n = o(n^{-k}) read as: fitted slope strictly below -k - 0.05 over the horizon.
inline CheckResult smoothness_decay_evidence(const CoeffSeq &c, const std::vector<int> &indices, int k) {
    const double slope = decay_exponent(c, indices);
    CheckResult r{"smoothness_decay", slope, -k - kLittleOMargin, false, 0.0, std::nullopt, std::nullopt, true};
    r.holds = slope < r.rhs;
    return r;
}

/// Lip_alpha decay O(n^{-alpha}) with the constant made explicit:
/// |c_n| <= (1/2) [f]_alpha (pi / |n|)^alpha. The seminorm is a probe-grid lower bound, so
/// the result is evidence.
inline CheckResult lip_alpha_decay(const TrigPoly &f, double alpha, int probe_grid, int N) {
    detail::require(N >= 1, "lip_alpha_decay: N must be >= 1");
    double best = 0.0;
    int arg = 1;
    for (int n = 1; n <= N; ++n) {
        const double v = std::max(std::abs(f.at(n)), std::abs(f.at(-n))) * std::pow(double(n), alpha);
        if (v > best) {
            best = v;
            arg = n;
        }
    }
    auto r = make_check("lip_alpha_decay", best, 0.5 * std::pow(kPi, alpha) * lip_seminorm_estimate(f, alpha, probe_grid),
                        1e-9);
    r.witness = arg;
    r.evidence = true;
    return r;
}

/// Finite-horizon Riemann-Lebesgue: max over |n| in [N/2, N] against max over |n| in [1, N/2).
inline CheckResult riemann_lebesgue(const Function &f, int N) {
    detail::require(N >= 8, "riemann_lebesgue: N must be >= 8");
    const CoeffSeq c = coefficients(f, N);
    double head = 0.0, tail = 0.0;
    int arg = N / 2;
    for (int n = 1; n <= N; ++n) {
        const double v = std::max(std::abs(c[n]), std::abs(c[-n]));
        if (n < N / 2) head = std::max(head, v);
        else if (v > tail) {
            tail = v;
            arg = n;
        }
    }
    auto r = make_check("riemann_lebesgue", tail, head, 1e-12);
    r.witness = arg;
    r.evidence = true;
    return r;
}

/// |c_n| <= ||f||_1 for |n| <= N.
inline CheckResult coefficient_bound(const Function &f, int N) {
    return make_check("coefficient_bound", seq_lq_norm(coefficients(f, N), INFINITY), lp_norm(f, 1.0), 1e-9);
}

// ---------------------------------------------------------------------------
// Corpus suite
// ---------------------------------------------------------------------------

struct CorpusEntry {
    std::string name;
    Function f;
};

inline std::vector<CorpusEntry> default_corpus() {
    return {{"constant", constant_function()},
            {"complex_exp(3)", complex_exp(3)},
            {"square_wave", square_wave()},
            {"sawtooth", sawtooth()},
            {"triangle", triangle()},
            {"weierstrass(0.5,8)", weierstrass(0.5, 8)},
            {"fejer(4)", fejer(4)}};
}

inline constexpr double kHausdorffYoungExponents[] = {1.2, 1.5, 2.0};
inline constexpr double kL2MembershipExponents[] = {3.0, 4.0};

/// Every check over the given corpus, sorted by name.
inline std::vector<CheckResult> run_classical_suite(const std::vector<CorpusEntry> &corpus, int N = 999) {
    std::vector<CheckResult> out;
    auto tagged = [](CheckResult r, const std::string &suffix) {
        r.name += "[" + suffix + "]";
        return r;
    };
    for (const auto &e : corpus) {
        for (double p : kHausdorffYoungExponents)
            out.push_back(tagged(hausdorff_young(e.f, p, N), e.name + ",p=" + detail::fmt_g(p)));
        for (double p : kL2MembershipExponents)
            out.push_back(tagged(l2_membership(e.f, p), e.name + ",p=" + detail::fmt_g(p)));
        out.push_back(tagged(riemann_lebesgue(e.f, 200), e.name + ",N=200"));
        out.push_back(tagged(coefficient_bound(e.f, std::min(N, 256)), e.name));
        if (const auto *pw = std::get_if<PiecewiseFunction>(&e.f)) {
            out.push_back(tagged(bv_bound(*pw, 99), e.name + ",N=99"));
            if (pw->is_continuous())
                out.push_back(tagged(smoothness_decay_evidence(coeffs_exact(*pw, 99), odd_indices(99), 1), e.name + ",k=1"));
        }
    }
    for (const auto &e : corpus) {
        if (e.name.rfind("weierstrass", 0) == 0)
            out.push_back(tagged(lip_alpha_decay(std::get<TrigPoly>(e.f), 0.5, 1024, std::get<TrigPoly>(e.f).degree()),
                                 e.name + ",alpha=0.5"));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.name < b.name; });
    return out;
}

/// CSV `name,lhs,rhs,holds,tolerance`.
inline void write_checks_csv(std::ostream &os, const std::vector<CheckResult> &checks) {
    os << "name,lhs,rhs,holds,tolerance\n";
    for (const auto &c : checks) {
        std::string name = c.name;
        if (name.find(',') != std::string::npos) name = "\"" + name + "\"";
        os << name << ',' << detail::fmt17(c.lhs) << ',' << detail::fmt17(c.rhs) << ',' << (c.holds ? "true" : "false")
           << ',' << detail::fmt17(c.tolerance) << '\n';
    }
}

} // namespace decayenv
