#include <catch2/catch_amalgamated.hpp>

#include "decayenv/envelope.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace decayenv;
using Catch::Approx;

namespace {

const NormSpec kL2 = NormSpec::lp(2.0);

std::vector<double> random_raw(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<double> v(n);
    for (auto &x : v) x = u(rng);
    return v;
}

} // namespace

TEST_CASE("restricted_norm closed forms", "[envelope]") {
    SECTION("Fourier coefficient on H^s") {
        for (double s : {0.5, 1.0, 2.0})
            for (int n = -64; n <= 64; ++n)
                REQUIRE(restricted_norm(Functional::fourier_coefficient(n), NormSpec::sobolev(s)) ==
                        Approx(std::pow(1.0 + double(n) * n, -s / 2)).epsilon(1e-12));
    }
    SECTION("coordinate on weighted l^2 gives w_k") {
        const auto y = NormSpec::weighted_lp({1.0, 0.5, 0.7, 0.1}, 2.0);
        const double w[] = {1.0, 0.5, 0.7, 0.1};
        for (int k = 0; k < 4; ++k) REQUIRE(restricted_norm(Functional::coordinate(k), y) == w[k]);
    }
    SECTION("Fourier coefficient on L^p gives 1") {
        for (double p : {1.0, 1.5, 2.0, 6.0})
            for (int n : {-5, 0, 17}) REQUIRE(restricted_norm(Functional::fourier_coefficient(n), NormSpec::lp(p)) == 1.0);
    }
    SECTION("explicit vector, Hoelder on weighted l^p") {
        const std::vector<cplx> v{cplx{1.0, 2.0}, cplx{-0.5}, cplx{0.0, 3.0}};
        const std::vector<double> w{1.0, 0.5, 0.25};
        // p = 3, q = 3/2
        double acc = 0.0;
        for (int m = 0; m < 3; ++m) acc += std::pow(std::abs(v[m]) * w[m], 1.5);
        REQUIRE(restricted_norm(Functional::explicit_vector(v), NormSpec::weighted_lp(w, 3.0)) ==
                Approx(std::pow(acc, 1.0 / 1.5)).epsilon(1e-14));
        // p = 1, q = inf
        double mx = 0.0;
        for (int m = 0; m < 3; ++m) mx = std::max(mx, std::abs(v[m]) * w[m]);
        REQUIRE(restricted_norm(Functional::explicit_vector(v), NormSpec::weighted_lp(w, 1.0)) == mx);
    }
    SECTION("scaling: ||lambda a|| = |lambda| ||a||") {
        const auto a = Functional::explicit_vector({cplx{1.0, -1.0}, cplx{2.0}});
        for (const auto &y : {NormSpec::sobolev(1.5), NormSpec::weighted_lp({1.0, 0.3}, 1.7), kL2})
            for (cplx lambda : {cplx{2.0}, cplx{0.0, -3.0}, cplx{0.0}})
                REQUIRE(restricted_norm(a.scaled(lambda), y) ==
                        Approx(std::abs(lambda) * restricted_norm(a, y)).epsilon(1e-14).margin(1e-300));
    }
    SECTION("unsupported and out-of-range") {
        REQUIRE_THROWS_AS(restricted_norm(Functional::fourier_coefficient(1), NormSpec::bv()), UnsupportedNorm);
        REQUIRE_THROWS_AS(restricted_norm(Functional::fourier_coefficient(1), NormSpec::lip_alpha(0.5)), UnsupportedNorm);
        REQUIRE_THROWS_AS(restricted_norm(Functional::explicit_vector({1.0, 1.0}), NormSpec::lp(3.0)), UnsupportedNorm);
        REQUIRE_THROWS_AS(restricted_norm(Functional::fourier_coefficient(5), NormSpec::sobolev(1.0), 4),
                          InvalidArgument);
        REQUIRE_THROWS_AS(restricted_norm(Functional::coordinate(4), NormSpec::weighted_lp({1.0, 0.5}, 2.0)),
                          InvalidArgument);
    }
}

TEST_CASE("restricted_norm is attained and never exceeded", "[envelope][property]") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const std::vector<NormSpec> specs{NormSpec::sobolev(0.7), NormSpec::sobolev(2.0),
                                      NormSpec::geometric_weights(0.6, 6, 2.0), kL2};
    for (const auto &y : specs) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> v(6);
            for (auto &x : v) x = {g(rng), g(rng)};
            const auto a = Functional::explicit_vector(v);
            const double R = restricted_norm(a, y);
            int first = 0;
            const auto ystar = extremizer(a, y, first);
            REQUIRE(norm_eval(y, CoeffView{first, ystar}) == Approx(1.0).epsilon(1e-12));
            REQUIRE(std::abs(a(CoeffView{first, ystar})) == Approx(R).epsilon(1e-12));
            for (int k = 0; k < 50; ++k) {
                std::vector<cplx> z(6);
                for (auto &x : z) x = {g(rng), g(rng)};
                const double nz = norm_eval(y, CoeffView{0, z});
                REQUIRE(std::abs(a(CoeffView{0, z})) <= R * nz * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("net oracle brackets the restricted norm", "[envelope]") {
    // net_max <= R <= net_max + M delta, M = 1 for a single coefficient in l^2
    for (double s : {0.5, 1.0, 2.0}) {
        for (int n : {0, 1, 3}) {
            const auto y = NormSpec::sobolev(s);
            const NetDomain dom{{n - 1, n, n + 1}, false};
            const auto a = Functional::fourier_coefficient(n);
            const double R = restricted_norm(a, y);
            for (int m = 1; m <= 3; ++m) {
                const double delta = 1.0 / (2.0 * m);
                const double net = net_sup(a, y, dom, kL2, delta);
                REQUIRE(net <= R + 1e-12);
                REQUIRE(R <= net + delta + 1e-12);
            }
        }
    }
}

TEST_CASE("monotone_envelope", "[envelope]") {
    const std::vector<double> a{1.0, 0.5, 0.25};
    REQUIRE(monotone_envelope(a).values == a);
    const std::vector<double> b{1.0, 0.5, 0.7, 0.1};
    REQUIRE(monotone_envelope(b).values == std::vector<double>{1.0, 0.7, 0.7, 0.1});
    REQUIRE(monotone_envelope(std::vector<double>(5, 0.0)).values == std::vector<double>(5, 0.0));
    REQUIRE(monotone_envelope(std::vector<double>{}).values.empty());
    REQUIRE_THROWS_AS(monotone_envelope(std::vector<double>{1.0, -0.1}), InvalidArgument);
    REQUIRE_THROWS_AS(monotone_envelope(std::vector<double>{NAN}), InvalidArgument);
    REQUIRE_THROWS_AS(monotone_envelope(std::vector<double>{INFINITY}), InvalidArgument);
}

TEST_CASE("monotone_envelope is the minimal non-increasing majorant", "[envelope][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto raw = random_raw(1 + trial % 40, rng);
        const auto env = monotone_envelope(raw);
        REQUIRE(env.raw == raw);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            REQUIRE(env.values[i] >= raw[i]);
            if (i + 1 < raw.size()) REQUIRE(env.values[i] >= env.values[i + 1]);
            // any non-increasing majorant u has u_i >= raw_j for j >= i, and eps_i equals one such raw_j
            bool attained = false;
            for (std::size_t j = i; j < raw.size(); ++j) attained = attained || env.values[i] == raw[j];
            REQUIRE(attained);
        }
        // idempotent
        REQUIRE(monotone_envelope(env.values).values == env.values);
    }
}

TEST_CASE("envelope_sequence", "[envelope]") {
    SECTION("Fourier range 4 on H^1") {
        const auto env = fourier_envelope(4, NormSpec::sobolev(1.0));
        const double expected[] = {1.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(5.0), 1.0 / std::sqrt(10.0),
                                   1.0 / std::sqrt(17.0)};
        REQUIRE(env.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) REQUIRE(env[i] == Approx(expected[i]).epsilon(1e-15));
        REQUIRE(env.indexing == EnvelopeIndexing::AbsFrequency);
    }
    SECTION("coordinates on weighted l^2") {
        const auto env = envelope_sequence(FunctionalFamily::coordinates(4), NormSpec::weighted_lp({1.0, 0.5, 0.7, 0.1}, 2.0));
        REQUIRE(env.values == std::vector<double>{1.0, 0.7, 0.7, 0.1});
        REQUIRE(env.raw == std::vector<double>{1.0, 0.5, 0.7, 0.1});
    }
    SECTION("L^2 gives all ones") {
        const auto env = fourier_envelope(32, kL2);
        for (double v : env.values) REQUIRE(v == 1.0);
    }
    SECTION("slot |n| takes the max over n and -n") {
        FunctionalFamily fam = FunctionalFamily::fourier(1);
        fam.members[0] = fam.members[0].scaled(3.0); // c_{-1}
        const auto env = envelope_sequence(fam, NormSpec::sobolev(1.0));
        REQUIRE(env.raw[1] == Approx(3.0 / std::sqrt(2.0)));
        REQUIRE(env.values[0] == env.values[1]);
    }
    SECTION("CSV") {
        std::ostringstream os;
        write_envelope_csv(os, monotone_envelope(std::vector<double>{1.0, 0.5, 0.7}));
        REQUIRE(os.str() == "n,raw,epsilon\n0,1,1\n1,0.5,0.69999999999999996\n2,0.69999999999999996,0.69999999999999996\n");
    }
}

TEST_CASE("domination checks", "[envelope]") {
    const auto y = NormSpec::sobolev(1.0);
    const auto fam = FunctionalFamily::fourier(16);
    const auto env = envelope_sequence(fam, y);

    SECTION("exact envelope passes with ratio at most 1") {
        const auto rep = verify_domination(env, fam, y, 1000, 0);
        REQUIRE(rep.pass);
        REQUIRE(rep.trials == 1000);
        REQUIRE(rep.max_ratio <= 1.0 + 1e-9);
        REQUIRE(rep.max_ratio > 0.0);
    }
    SECTION("a halved envelope fails with a witness") {
        Envelope half = env;
        for (auto &v : half.values) v *= 0.5;
        const auto rep = verify_domination(half, fam, y, 1000, 0);
        REQUIRE_FALSE(rep.pass);
        REQUIRE(rep.witness.has_value());
        REQUIRE(rep.witness->lhs > rep.witness->rhs);
        // the witness replays
        const auto replay = check_domination_at(half, fam, y, CoeffView{rep.witness->first_label, rep.witness->y});
        REQUIRE_FALSE(replay.pass);
        // the extremizer of the witness slot is the sharpest counterexample
        int first = 0;
        const auto ystar = extremizer(fam.members[rep.witness->member], y, first);
        REQUIRE_FALSE(check_domination_at(half, fam, y, CoeffView{first, ystar}).pass);
    }
    SECTION("the zero vector passes trivially") {
        const std::vector<cplx> zero(33, cplx{0.0});
        const auto rep = check_domination_at(env, fam, y, CoeffView{-16, zero});
        REQUIRE(rep.pass);
        REQUIRE(rep.max_ratio == 0.0);
    }
    SECTION("extremizers sit on the envelope") {
        for (std::size_t i = 0; i < fam.members.size(); ++i) {
            int first = 0;
            const auto ystar = extremizer(fam.members[i], y, first);
            const auto rep = check_domination_at(env, fam, y, CoeffView{first, ystar});
            REQUIRE(rep.pass);
        }
    }
    SECTION("same seed, same report; thread count does not matter") {
        const auto a = verify_domination(env, fam, y, 300, 17);
        const auto b = verify_domination(env, fam, y, 300, 17);
        REQUIRE(a.max_ratio == b.max_ratio);
        const auto c = verify_domination(env, fam, y, 300, 18);
        REQUIRE(a.max_ratio != c.max_ratio);
    }
    SECTION("weighted and H^2 models") {
        for (const auto &spec : {NormSpec::sobolev(2.0), NormSpec::geometric_weights(0.5, 12, 2.0),
                                 NormSpec::geometric_weights(0.8, 12, 1.5)}) {
            const FunctionalFamily f = spec.get<WeightedLpNorm>() ? FunctionalFamily::coordinates(12) : fam;
            const auto e = envelope_sequence(f, spec);
            const auto rep = verify_domination(e, f, spec, 1000, 3);
            REQUIRE(rep.pass);
            REQUIRE(rep.max_ratio <= 1.0 + 1e-9);
        }
    }
    REQUIRE_THROWS_AS(verify_domination(env, fam, y, 0, 0), InvalidArgument);
}

TEST_CASE("net certification", "[envelope]") {
    SECTION("coordinates with geometric weights") {
        const auto y = NormSpec::geometric_weights(0.5, 8, 2.0);
        const auto fam = FunctionalFamily::coordinates(8);
        const auto cert = net_certify(fam, {y, kL2, true}, NetDomain::leading(4, false), 3, 8);
        REQUIRE(cert.m_bound == 1.0);
        REQUIRE(cert.certified);
        REQUIRE(cert.dominated);
        REQUIRE(cert.stages.size() == 3);
        std::set<double> allowed{cert.m_bound, 1.0, 0.5, 1.0 / 3.0};
        for (std::size_t i = 0; i < 8; ++i) {
            REQUIRE(allowed.count(cert.step_envelope.values[i]) == 1);
            REQUIRE(cert.step_envelope.values[i] + 1e-9 >= std::pow(0.5, double(i)));
            if (i + 1 < 8) REQUIRE(cert.step_envelope.values[i] >= cert.step_envelope.values[i + 1]);
        }
        REQUIRE(cert.stages[0].threshold < cert.stages[1].threshold);
        REQUIRE(cert.stages[1].threshold < cert.stages[2].threshold);
        for (const auto &st : cert.stages) {
            REQUIRE(st.delta == Approx(1.0 / (2.0 * st.m)));
            REQUIRE(st.net_size > 0);
            REQUIRE(st.threshold >= st.minimal_threshold);
        }
    }
    SECTION("Fourier |n| <= 8 on H^2, three complex modes") {
        const auto y = NormSpec::sobolev(2.0);
        const auto cert =
            net_certify(FunctionalFamily::fourier(8), {y, kL2, true}, NetDomain::centred(3, true), 2, 9);
        REQUIRE(cert.certified);
        REQUIRE(cert.m_bound == 1.0);
        for (std::size_t n = 0; n <= 8; ++n) {
            const double v = cert.step_envelope.values[n];
            REQUIRE((v == 1.0 || v == 0.5));
            REQUIRE(v + 1e-9 >= 1.0 / (1.0 + double(n * n)));
        }
        // the net sees only |n| <= 1, so the first index clear of 1/4 is 2
        REQUIRE(cert.stages[1].minimal_threshold == 2);
    }
    SECTION("zero functionals: every minimal threshold is 0, envelope is 0") {
        const auto fam = FunctionalFamily::explicit_vectors(std::vector<std::vector<cplx>>(4, std::vector<cplx>(4)));
        const auto cert =
            net_certify(fam, {NormSpec::geometric_weights(0.5, 4), kL2, true}, NetDomain::leading(2, false), 3, 4);
        REQUIRE(cert.m_bound == 0.0);
        REQUIRE(cert.certified);
        for (const auto &st : cert.stages) REQUIRE(st.minimal_threshold == 0);
        REQUIRE(cert.stages[0].threshold == 0);
        REQUIRE(cert.stages[1].threshold == 1);
        REQUIRE(cert.stages[2].threshold == 2);
        for (double v : cert.step_envelope.values) REQUIRE(v == 0.0);
    }
    SECTION("a short horizon leaves late stages uncertified") {
        const auto y = NormSpec::geometric_weights(0.5, 8, 2.0);
        const auto cert = net_certify(FunctionalFamily::coordinates(8), {y, kL2, true}, NetDomain::leading(4, false), 3, 2);
        REQUIRE_FALSE(cert.certified);
        REQUIRE_FALSE(cert.stages.back().certified);
    }
    SECTION("tail beyond the horizon") {
        const auto y = NormSpec::geometric_weights(0.5, 8, 2.0);
        const auto cert = net_certify(FunctionalFamily::coordinates(8), {y, kL2, true}, NetDomain::leading(3, false), 2, 6);
        REQUIRE(cert.tail_extended);
        REQUIRE_FALSE(cert.horizon_limited);
    }
    SECTION("preconditions") {
        const auto fam = FunctionalFamily::coordinates(4);
        const auto dom = NetDomain::leading(2, false);
        REQUIRE_THROWS_AS(net_certify(fam, {NormSpec::geometric_weights(0.5, 4, 1.5), kL2, true}, dom, 2, 4),
                          UnsupportedNorm);
        REQUIRE_THROWS_AS(net_certify(fam, {NormSpec::geometric_weights(0.5, 4), kL2, false}, dom, 2, 4),
                          InvalidArgument);
        REQUIRE_THROWS_AS(net_certify(fam, {NormSpec::weighted_lp({1, 1, 1, 1}, 2.0), kL2, true}, dom, 2, 4),
                          InvalidArgument);
        REQUIRE_THROWS_AS(net_certify(fam, {NormSpec::geometric_weights(0.5, 4), kL2, true}, dom, 0, 4),
                          InvalidArgument);
        REQUIRE_THROWS_AS(net_certify(fam, {NormSpec::geometric_weights(0.5, 4), kL2, true}, dom, 2, 5),
                          InvalidArgument);
    }
}

TEST_CASE("weak-null evidence", "[envelope]") {
    const auto table = weak_null_evidence(FunctionalFamily::fourier(99),
                                          {Function(square_wave()), complex_exp(5), fejer(4)});
    REQUIRE(table.slots == 100);
    SECTION("square wave: |c_n| = 2/(pi n) at odd n, running max decays") {
        const auto &row = table.rows[0];
        for (int n = 1; n <= 99; ++n) REQUIRE(row.values[n] == Approx(n % 2 ? 2.0 / (kPi * n) : 0.0).margin(1e-14));
        REQUIRE(row.head_max == Approx(2.0 / kPi));
        REQUIRE(row.tail_max == Approx(2.0 / (kPi * 51)));
        REQUIRE_FALSE(row.trend_violation);
    }
    SECTION("e^{5it}: a single spike") {
        const auto &row = table.rows[1];
        for (int n = 0; n < 100; ++n) REQUIRE(row.values[n] == Approx(n == 5 ? 1.0 : 0.0).margin(1e-15));
        REQUIRE(row.tail_max == 0.0);
    }
    SECTION("fejer(4): zero beyond 4") {
        const auto &row = table.rows[2];
        for (int n = 5; n < 100; ++n) REQUIRE(row.values[n] == 0.0);
    }
}
