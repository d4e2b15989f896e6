#pragma once

// Decay envelopes eps_n with |a_n(y)| <= eps_n ||y||_Y: exact restricted dual norms, their
// minimal non-increasing majorant, the finite-net certification procedure, and randomized
// domination checks.

#include "decayenv/detail/numeric.hpp"
#include "decayenv/detail/parallel.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/fourier.hpp"
#include "decayenv/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace decayenv {

/// Linear functional on coefficient vectors, a(y) = sum_j c_j y(label_j).
class Functional {
public:
    enum class Kind { FourierCoefficient, Coordinate, ExplicitVector };

    struct Term {
        int label;
        cplx c;
    };

    /// y -> y(n)
    static Functional fourier_coefficient(int n) { return Functional(Kind::FourierCoefficient, n, {}); }
    /// y -> y(k), k >= 0
    static Functional coordinate(int k) {
        detail::require(k >= 0, "Functional: coordinate index must be >= 0");
        return Functional(Kind::Coordinate, k, {});
    }
    /// y -> <y, v> = sum conj(v_m) y(m), m = 0..len-1
    static Functional explicit_vector(std::vector<cplx> v) {
        for (const auto &x : v)
            detail::require(std::isfinite(x.real()) && std::isfinite(x.imag()), "Functional: non-finite entry");
        return Functional(Kind::ExplicitVector, 0, std::move(v));
    }

    Kind kind() const { return kind_; }
    int index() const { return index_; }

    /// (lambda a)(y) = lambda a(y)
    Functional scaled(cplx lambda) const {
        Functional f = *this;
        f.factor_ *= lambda;
        return f;
    }

    std::vector<Term> terms() const {
        if (kind_ != Kind::ExplicitVector) return {{index_, factor_}};
        std::vector<Term> t;
        t.reserve(vec_.size());
        for (std::size_t m = 0; m < vec_.size(); ++m) t.push_back({static_cast<int>(m), factor_ * std::conj(vec_[m])});
        return t;
    }

    int min_label() const { return kind_ == Kind::ExplicitVector ? 0 : index_; }
    int max_label() const { return kind_ == Kind::ExplicitVector ? static_cast<int>(vec_.size()) - 1 : index_; }

    cplx operator()(CoeffView y) const {
        cplx acc{0.0};
        for (const auto &t : terms()) acc += t.c * y.at(t.label);
        return acc;
    }
    cplx operator()(const CoeffSeq &y) const { return (*this)(view(y)); }

private:
    Functional(Kind k, int idx, std::vector<cplx> v) : kind_(k), index_(idx), vec_(std::move(v)) {}

    Kind kind_;
    int index_;
    std::vector<cplx> vec_;
    cplx factor_{1.0};
};

enum class EnvelopeIndexing { AbsFrequency, Enumeration };

/// Ordered functionals a_i with the envelope slot each one maps to. Fourier families collapse
/// n and -n onto slot |n|.
struct FunctionalFamily {
    std::vector<Functional> members;
    std::vector<std::size_t> slots;
    EnvelopeIndexing indexing = EnvelopeIndexing::Enumeration;

    /// c_n for n = -N..N, slot |n|.
    static FunctionalFamily fourier(int N) {
        detail::require(N >= 0, "fourier family: N must be >= 0");
        FunctionalFamily f;
        f.indexing = EnvelopeIndexing::AbsFrequency;
        for (int n = -N; n <= N; ++n) {
            f.members.push_back(Functional::fourier_coefficient(n));
            f.slots.push_back(static_cast<std::size_t>(std::abs(n)));
        }
        return f;
    }
    /// y -> y(k) for k = 0..d-1.
    static FunctionalFamily coordinates(int d) {
        detail::require(d >= 1, "coordinate family: d must be >= 1");
        FunctionalFamily f;
        for (int k = 0; k < d; ++k) {
            f.members.push_back(Functional::coordinate(k));
            f.slots.push_back(static_cast<std::size_t>(k));
        }
        return f;
    }
    static FunctionalFamily explicit_vectors(const std::vector<std::vector<cplx>> &vectors) {
        FunctionalFamily f;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            f.members.push_back(Functional::explicit_vector(vectors[i]));
            f.slots.push_back(i);
        }
        return f;
    }

    std::size_t slot_count() const { return slots.empty() ? 0 : *std::max_element(slots.begin(), slots.end()) + 1; }
    int min_label() const {
        int m = std::numeric_limits<int>::max();
        for (const auto &a : members) m = std::min(m, a.min_label());
        return m;
    }
    int max_label() const {
        int m = std::numeric_limits<int>::min();
        for (const auto &a : members) m = std::max(m, a.max_label());
        return m;
    }
    int truncation() const { return std::max(std::abs(min_label()), std::abs(max_label())); }
};

/// Non-increasing, non-negative eps_0 >= eps_1 >= ...; raw holds the values it majorizes.
struct Envelope {
    std::vector<double> values;
    std::vector<double> raw;
    EnvelopeIndexing indexing = EnvelopeIndexing::Enumeration;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// ---------------------------------------------------------------------------
// Restricted dual norms
// ---------------------------------------------------------------------------

/// sup { |a(y)| : ||y||_Y <= 1 }, in closed form:
///  - weighted l^p: (sum |c_m w_m|^q)^{1/q}, 1/p + 1/q = 1 (Hoelder, attained)
///  - Sobolev H^s: (sum |c_m|^2 (1 + m^2)^{-s})^{1/2}
///  - L^p on the circle: |c| for a single coefficient functional (|c_n(y)| <= ||y||_1 <= ||y||_p,
///    equality at e^{int}); the l^2 norm of the terms for p = 2.
/// Every label the functional touches must satisfy |label| <= truncation.
inline double restricted_norm(const Functional &a, const NormSpec &y_norm, int truncation) {
    const auto terms = a.terms();
    for (const auto &t : terms)
        if (std::abs(t.label) > truncation)
            throw InvalidArgument("restricted_norm: functional touches label " + std::to_string(t.label) +
                                  " outside the truncation");
    if (auto *w = y_norm.get<WeightedLpNorm>()) {
        const double q = detail::conjugate_exponent(w->p);
        double acc = 0.0;
        for (const auto &t : terms) {
            const double v = std::abs(t.c) * y_norm.weight(t.label);
            acc = std::isinf(q) ? std::max(acc, v) : acc + std::pow(v, q);
        }
        return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
    }
    if (auto *s = y_norm.get<SobolevNorm>()) {
        double acc = 0.0;
        for (const auto &t : terms) acc += std::norm(t.c) * std::pow(1.0 + double(t.label) * t.label, -s->s);
        return std::sqrt(acc);
    }
    if (auto *l = y_norm.get<LpNorm>()) {
        if (terms.size() == 1) return std::abs(terms.front().c);
        if (l->p == 2.0) {
            double acc = 0.0;
            for (const auto &t : terms) acc += std::norm(t.c);
            return std::sqrt(acc);
        }
        throw UnsupportedNorm("restricted_norm: no closed-form L^p dual for a multi-term functional with p != 2");
    }
    throw UnsupportedNorm("restricted_norm: no exact dual norm for '" + y_norm.tag() + "'");
}

inline double restricted_norm(const Functional &a, const NormSpec &y_norm) {
    return restricted_norm(a, y_norm, std::max(std::abs(a.min_label()), std::abs(a.max_label())));
}

/// Unit-norm maximizer y* of |a(y)| for Hilbertian Y: y*(m) = conj(c_m) / (A_m R), where
/// ||y||^2 = sum A_m |y(m)|^2 and R is the restricted norm. Returned over [min label, max label].
inline std::vector<cplx> extremizer(const Functional &a, const NormSpec &y_norm, int &first_label) {
    if (!y_norm.is_hilbertian()) throw UnsupportedNorm("extremizer: Y-norm must be Hilbertian");
    const double R = restricted_norm(a, y_norm);
    first_label = a.min_label();
    std::vector<cplx> y(static_cast<std::size_t>(a.max_label() - a.min_label() + 1), cplx{0.0});
    if (R == 0.0) return y;
    for (const auto &t : a.terms())
        y[static_cast<std::size_t>(t.label - first_label)] += std::conj(t.c) / (y_norm.axis_weight(t.label) * R);
    return y;
}

// ---------------------------------------------------------------------------
// Envelopes
// ---------------------------------------------------------------------------

/// Suffix maximum: the smallest non-increasing sequence lying above raw.
inline Envelope monotone_envelope(std::span<const double> raw, EnvelopeIndexing indexing = EnvelopeIndexing::Enumeration) {
    for (double r : raw)
        detail::require(std::isfinite(r) && r >= 0.0, "monotone_envelope: entries must be finite and non-negative");
    Envelope env{std::vector<double>(raw.size()), std::vector<double>(raw.begin(), raw.end()), indexing};
    double run = 0.0;
    for (std::size_t i = raw.size(); i-- > 0;) {
        run = std::max(run, raw[i]);
        env.values[i] = run;
    }
    return env;
}

/// raw_i = max over the members in slot i of restricted_norm(a, Y), then the suffix maximum.
inline Envelope envelope_sequence(const FunctionalFamily &family, const NormSpec &y_norm) {
    detail::require(!family.members.empty(), "envelope_sequence: empty family");
    std::vector<double> raw(family.slot_count(), 0.0);
    std::vector<double> per_member(family.members.size());
    const int trunc = family.truncation();
    detail::parallel_for(family.members.size(),
                         [&](std::size_t i) { per_member[i] = restricted_norm(family.members[i], y_norm, trunc); });
    for (std::size_t i = 0; i < family.members.size(); ++i)
        raw[family.slots[i]] = std::max(raw[family.slots[i]], per_member[i]);
    return monotone_envelope(raw, family.indexing);
}

inline Envelope fourier_envelope(int N, const NormSpec &y_norm) {
    return envelope_sequence(FunctionalFamily::fourier(N), y_norm);
}

/// CSV `n,raw,epsilon`, 17 significant digits.
inline void write_envelope_csv(std::ostream &os, const Envelope &env) {
    os << "n,raw,epsilon\n";
    for (std::size_t i = 0; i < env.size(); ++i)
        os << i << ',' << detail::fmt17(i < env.raw.size() ? env.raw[i] : env.values[i]) << ','
           << detail::fmt17(env.values[i]) << '\n';
}

// ---------------------------------------------------------------------------
// Domination checks
// ---------------------------------------------------------------------------

inline constexpr double kInequalitySlack = 1e-9;

struct DominationWitness {
    int trial = -1;
    std::size_t member = 0;
    std::size_t slot = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    int first_label = 0;
    std::vector<cplx> y;
};

struct DominationReport {
    bool pass = true;
    int trials = 0;
    std::size_t violations = 0;
    /// max |a_n(y)| / (eps_n ||y||_Y) over all trials and members with a positive denominator.
    double max_ratio = 0.0;
    std::optional<DominationWitness> witness;
};

namespace detail {

struct TrialOutcome {
    std::size_t violations = 0;
    double max_ratio = 0.0;
    std::optional<DominationWitness> witness;
};

inline TrialOutcome check_vector(const Envelope &env, const FunctionalFamily &family, const NormSpec &y_norm,
                                 CoeffView y) {
    TrialOutcome out;
    const double ny = norm_eval(y_norm, y);
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const std::size_t slot = family.slots[i];
        detail::require(slot < env.size(), "verify_domination: envelope shorter than the family");
        const double lhs = std::abs(family.members[i](y));
        const double rhs = env[slot] * ny;
        if (rhs > 0.0) out.max_ratio = std::max(out.max_ratio, lhs / rhs);
        else if (lhs > kInequalitySlack) out.max_ratio = INFINITY;
        if (lhs > rhs + kInequalitySlack) {
            ++out.violations;
            if (!out.witness || lhs - rhs > out.witness->lhs - out.witness->rhs)
                out.witness = DominationWitness{-1, i, slot, lhs, rhs, y.first_label,
                                                std::vector<cplx>(y.values.begin(), y.values.end())};
        }
    }
    return out;
}

} // namespace detail

/// Checks |a_n(y)| <= eps_n ||y||_Y + 1e-9 for one vector.
inline DominationReport check_domination_at(const Envelope &env, const FunctionalFamily &family,
                                            const NormSpec &y_norm, CoeffView y) {
    auto o = detail::check_vector(env, family, y_norm, y);
    return {o.violations == 0, 1, o.violations, o.max_ratio, std::move(o.witness)};
}

/// Random points of the Y-ball over the family's labels: a complex Gaussian vector normalized
/// in the Y-norm, scaled by u^{1/D} (D the real dimension). Trial t draws from the stream seeded
/// by (seed, t), so the report does not depend on thread count.
inline DominationReport verify_domination(const Envelope &env, const FunctionalFamily &family,
                                          const NormSpec &y_norm, int trials, std::uint64_t seed) {
    detail::require(trials >= 1, "verify_domination: trials must be >= 1");
    const int lo = family.min_label(), hi = family.max_label();
    const std::size_t dim = static_cast<std::size_t>(hi - lo + 1);
    std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    detail::parallel_for(outcomes.size(), [&](std::size_t t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> unif;
        std::vector<cplx> y(dim);
        for (auto &v : y) v = {gauss(rng), gauss(rng)};
        const double n = norm_eval(y_norm, CoeffView{lo, y});
        const double scale = n > 0.0 ? std::pow(unif(rng), 1.0 / (2.0 * double(dim))) / n : 0.0;
        for (auto &v : y) v *= scale;
        outcomes[t] = detail::check_vector(env, family, y_norm, CoeffView{lo, y});
        if (outcomes[t].witness) outcomes[t].witness->trial = static_cast<int>(t);
    });
    DominationReport rep;
    rep.trials = trials;
    for (auto &o : outcomes) {
        rep.violations += o.violations;
        rep.max_ratio = std::max(rep.max_ratio, o.max_ratio);
        if (o.witness && !rep.witness) rep.witness = std::move(o.witness);
    }
    rep.pass = rep.violations == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Net certification
// ---------------------------------------------------------------------------

struct CertificationStage {
    int m = 0;
    double delta = 0.0;
    std::size_t net_size = 0;
    /// Smallest index with |a_k(z)| < 1/(2m) on the whole net for every k in [index, K).
    std::size_t minimal_threshold = 0;
    /// N_m after enforcing N_1 < N_2 < ...
    std::size_t threshold = 0;
    bool certified = false;
};

struct NetCertification {
    double m_bound = 0.0; // M
    std::vector<CertificationStage> stages;
    std::size_t horizon = 0; // K
    Envelope step_envelope;  // values: the step envelope, raw: restricted norms
    bool dominated = false;
    /// Restricted norms past the horizon are non-increasing and below the last step value.
    bool tail_extended = false;
    /// The family continues past K and the tail could not be extended analytically.
    bool horizon_limited = false;
    bool certified = false;
};

/// Runs the finite-net argument on a truncation:
///  1. M = max_i ||a_i||_{X*}.
///  2. For m = 1..m_max, S_m is a 1/(2Mm)-net of the Y-ball on `domain`; N_m is the first index
///     from which every |a_k(z)|, z in S_m, k < K, is strictly below 1/(2m), raised to
///     N_{m-1} + 1 when needed.
///  3. eps_i = M for i < N_1 and min(M, 1/m) on [N_m, N_{m+1}).
/// The step envelope is then checked against the exact restricted norms of every member.
/// A stage without a valid threshold below K, and every stage after it, is left uncertified.
inline NetCertification net_certify(const FunctionalFamily &family, const EmbeddingSpec &emb, const NetDomain &domain,
                                    int m_max, std::size_t horizon) {
    detail::require(m_max >= 1, "net_certify: m_max must be >= 1");
    detail::require(horizon >= 1 && family.slot_count() >= horizon, "net_certify: family shorter than the horizon");
    if (!emb.y_norm.is_hilbertian()) throw UnsupportedNorm("net_certify: Y-norm must be Hilbertian");
    if (!is_l2(emb.x_norm)) throw UnsupportedNorm("net_certify: X-norm must be l^2 / L^2");
    detail::require(emb.compact, "net_certify: embedding must be declared compact");
    const auto check = validate_compactness(emb);
    detail::require(check.consistent, "net_certify: declared compactness contradicts: " + check.reason);

    const int trunc = std::max(family.truncation(), [&] {
        int t = 0;
        for (int l : domain.labels) t = std::max(t, std::abs(l));
        return t;
    }());

    NetCertification cert;
    cert.horizon = horizon;
    for (const auto &a : family.members) cert.m_bound = std::max(cert.m_bound, restricted_norm(a, emb.x_norm, trunc));
    const double M = cert.m_bound;

    // Each member's coefficients on the net's real axes.
    const std::size_t d = domain.real_dim();
    std::vector<std::size_t> scanned;
    for (std::size_t i = 0; i < family.members.size(); ++i)
        if (family.slots[i] < horizon) scanned.push_back(i);
    std::vector<std::vector<cplx>> axis_coeff(scanned.size(), std::vector<cplx>(d, cplx{0.0}));
    for (std::size_t s = 0; s < scanned.size(); ++s) {
        for (const auto &t : family.members[scanned[s]].terms()) {
            for (std::size_t j = 0; j < domain.labels.size(); ++j) {
                if (domain.labels[j] != t.label) continue;
                if (domain.complex_coords) {
                    axis_coeff[s][2 * j] += t.c;
                    axis_coeff[s][2 * j + 1] += t.c * cplx{0.0, 1.0};
                } else {
                    axis_coeff[s][j] += t.c;
                }
            }
        }
    }

    std::size_t prev_threshold = 0;
    bool chain_ok = true;
    for (int m = 1; m <= m_max; ++m) {
        CertificationStage st;
        st.m = m;
        // With M = 0 every functional vanishes and the mesh is irrelevant.
        st.delta = 1.0 / (2.0 * (M > 0.0 ? M : 1.0) * m);
        const double level = 1.0 / (2.0 * m);
        std::vector<double> slot_max(horizon, 0.0);
        if (M > 0.0) {
            st.net_size = for_each_net_point(emb.y_norm, domain, emb.x_norm, st.delta, [&](std::span<const double> z) {
                for (std::size_t s = 0; s < scanned.size(); ++s) {
                    cplx v{0.0};
                    for (std::size_t j = 0; j < d; ++j) v += axis_coeff[s][j] * z[j];
                    auto &mx = slot_max[family.slots[scanned[s]]];
                    mx = std::max(mx, std::abs(v));
                }
            });
        }
        std::size_t minimal = 0;
        for (std::size_t k = 0; k < horizon; ++k)
            if (slot_max[k] >= level) minimal = k + 1;
        st.minimal_threshold = minimal;
        st.threshold = (m == 1) ? minimal : std::max(minimal, prev_threshold + 1);
        st.certified = chain_ok && st.threshold < horizon;
        if (st.certified) prev_threshold = st.threshold;
        else chain_ok = false;
        cert.stages.push_back(st);
    }

    // Step envelope.
    std::vector<double> step(horizon, M);
    for (const auto &st : cert.stages) {
        if (!st.certified) break;
        for (std::size_t i = st.threshold; i < horizon; ++i) step[i] = std::min(M, 1.0 / st.m);
    }

    const std::size_t slots = family.slot_count();
    std::vector<double> rn(slots, 0.0);
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        auto &r = rn[family.slots[i]];
        r = std::max(r, restricted_norm(family.members[i], emb.y_norm, trunc));
    }
    cert.dominated = true;
    for (std::size_t i = 0; i < horizon; ++i)
        if (step[i] + kInequalitySlack < rn[i]) cert.dominated = false;

    if (slots > horizon) {
        bool ok = true;
        for (std::size_t i = horizon; i < slots; ++i) {
            if (rn[i] > step[horizon - 1] + kInequalitySlack) ok = false;
            if (i > horizon && rn[i] > rn[i - 1] + kInequalitySlack) ok = false;
        }
        cert.tail_extended = ok;
        cert.horizon_limited = !ok;
    }

    cert.step_envelope.values = step;
    cert.step_envelope.raw.assign(rn.begin(), rn.begin() + static_cast<long>(horizon));
    cert.step_envelope.indexing = family.indexing;
    cert.certified = cert.dominated && std::all_of(cert.stages.begin(), cert.stages.end(),
                                                   [](const auto &s) { return s.certified; });
    return cert;
}

/// Oracle for a single functional: max |a(z)| over a delta-net of the Y-ball on `domain`.
/// For a functional supported on the domain, net_max <= restricted_norm <= net_max + ||a||_{X*} delta.
inline double net_sup(const Functional &a, const NormSpec &y_norm, const NetDomain &domain, const NormSpec &x_norm,
                      double delta) {
    double best = 0.0;
    for_each_net_point(y_norm, domain, x_norm, delta, [&](std::span<const double> z) {
        int first = 0;
        const auto c = domain.to_coeffs(z, first);
        best = std::max(best, std::abs(a(CoeffView{first, c})));
    });
    return best;
}

// ---------------------------------------------------------------------------
// Weak-null evidence
// ---------------------------------------------------------------------------

struct WeakNullRow {
    std::vector<double> values; // |a_slot(probe)|, max over members in the slot
    double head_max = 0.0;      // slots [0, S/2)
    double tail_max = 0.0;      // slots [S/2, S)
    bool trend_violation = false;
};

/// Finite-horizon evidence only; a decaying table does not prove a limit.
struct WeakNullTable {
    std::size_t slots = 0;
    std::vector<WeakNullRow> rows;
};

inline WeakNullTable weak_null_evidence(const FunctionalFamily &family, const std::vector<Function> &probes) {
    WeakNullTable table;
    table.slots = family.slot_count();
    const int trunc = family.truncation();
    for (const auto &probe : probes) {
        const CoeffSeq c = coefficients(probe, trunc);
        WeakNullRow row;
        row.values.assign(table.slots, 0.0);
        for (std::size_t i = 0; i < family.members.size(); ++i)
            row.values[family.slots[i]] = std::max(row.values[family.slots[i]], std::abs(family.members[i](c)));
        const std::size_t half = table.slots / 2;
        for (std::size_t k = 0; k < table.slots; ++k) {
            double &bucket = k < half ? row.head_max : row.tail_max;
            bucket = std::max(bucket, row.values[k]);
        }
        row.trend_violation = row.tail_max > row.head_max;
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace decayenv
