#pragma once

// Pipelines behind the `decayenv` command-line tool. Exit status: 0 when every check holds,
// 1 when a check fails, 2 on usage, configuration or I/O errors.

#include "decayenv/classical.hpp"
#include "decayenv/envelope.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/fourier.hpp"
#include "decayenv/frames.hpp"
#include "decayenv/io.hpp"
#include "decayenv/spaces.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace decayenv::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsageError = 2 };

struct RunConfig {
    std::string command; // envelope | certify | frame | classical | demo-noncompact | coeffs
    std::optional<std::string> space;
    std::optional<std::string> fn;
    std::optional<std::string> frame;
    std::optional<std::string> builtin;
    std::optional<int> range;
    std::optional<int> dim;
    std::optional<int> count;
    std::optional<int> mmax;
    std::optional<int> horizon;
    int trials = 1000;
    std::uint64_t seed = 0;
    std::optional<double> p;
    std::string out; // empty: stdout
};

namespace detail {

enum class Format { Csv, Json };

inline Format format_of(const std::string &out) {
    auto ends_with = [&](const char *ext) {
        const std::string e(ext);
        return out.size() >= e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0;
    };
    if (out.empty() || ends_with(".csv")) return Format::Csv;
    if (ends_with(".json")) return Format::Json;
    throw InvalidArgument("cannot infer output format from '" + out + "' (use .csv or .json)");
}

struct Output {
    std::string text;
    int status = kOk;
};

inline std::string dump(const io::json &j) { return j.dump(2) + "\n"; }

inline Output run_envelope(const RunConfig &cfg, Format fmt) {
    if (!cfg.space) throw InvalidArgument("envelope: --space is required");
    const NormSpec y = io::parse_norm_spec(io::load_json_arg(*cfg.space));
    FunctionalFamily family;
    if (const auto *w = y.get<WeightedLpNorm>()) {
        const int dim = static_cast<int>(w->weights.size());
        const int n = cfg.range.value_or(dim);
        decayenv::detail::require(n >= 1 && n <= dim, "envelope: --range exceeds the weight dimension");
        family = FunctionalFamily::coordinates(n);
    } else {
        family = FunctionalFamily::fourier(cfg.range.value_or(64));
    }
    const Envelope env = envelope_sequence(family, y);
    const DominationReport dom = verify_domination(env, family, y, cfg.trials, cfg.seed);
    Output o;
    o.status = dom.pass ? kOk : kCheckFailed;
    if (fmt == Format::Csv) {
        std::ostringstream ss;
        write_envelope_csv(ss, env);
        o.text = ss.str();
    } else {
        io::json j = io::to_json(env);
        j["space"] = io::to_json(y);
        j["domination"] = io::to_json(dom);
        o.text = dump(j);
    }
    return o;
}

inline Output run_certify(const RunConfig &cfg, Format fmt) {
    if (!cfg.space) throw InvalidArgument("certify: --space is required");
    const NormSpec y = io::parse_norm_spec(io::load_json_arg(*cfg.space));
    const EmbeddingSpec emb{y, NormSpec::lp(2.0), true};
    FunctionalFamily family;
    NetDomain domain;
    if (const auto *w = y.get<WeightedLpNorm>()) {
        const int size = cfg.range.value_or(static_cast<int>(w->weights.size()));
        decayenv::detail::require(size >= 1 && size <= static_cast<int>(w->weights.size()),
                                  "certify: --range exceeds the weight dimension");
        family = FunctionalFamily::coordinates(size);
        domain = NetDomain::leading(std::min(cfg.dim.value_or(4), size), false);
    } else {
        family = FunctionalFamily::fourier(cfg.range.value_or(8));
        domain = NetDomain::centred(cfg.dim.value_or(3), true);
    }
    const std::size_t K = static_cast<std::size_t>(cfg.horizon.value_or(static_cast<int>(family.slot_count())));
    const auto cert = net_certify(family, emb, domain, cfg.mmax.value_or(3), K);
    Output o;
    o.status = cert.certified ? kOk : kCheckFailed;
    if (fmt == Format::Csv) {
        std::ostringstream ss;
        write_envelope_csv(ss, cert.step_envelope);
        o.text = ss.str();
    } else {
        o.text = dump(io::to_json(cert));
    }
    return o;
}

inline Output run_frame(const RunConfig &cfg, Format fmt, std::ostream &diag) {
    FrameSpec frame;
    if (cfg.frame) frame = io::parse_frame_spec(io::load_json_arg(*cfg.frame));
    else if (cfg.builtin) frame = builtin_frame(*cfg.builtin, cfg.dim.value_or(2), cfg.count.value_or(cfg.dim.value_or(2)));
    else throw InvalidArgument("frame: --builtin or --frame is required");
    Output o;
    FrameReport report;
    try {
        report = frame_report(frame);
    } catch (const NotAFrame &e) {
        diag << "error: " << e.what() << '\n';
        o.status = kCheckFailed;
        return o;
    }
    const auto ineq = frame_inequality_check(frame, cfg.trials, cfg.seed);
    bool ok = ineq.pass;
    std::optional<Envelope> env;
    std::optional<DominationReport> dom;
    if (cfg.space) {
        const NormSpec y = io::parse_norm_spec(io::load_json_arg(*cfg.space));
        env = frame_coefficient_envelope(frame, y);
        dom = verify_domination(*env, FunctionalFamily::explicit_vectors(frame.vectors), y, cfg.trials, cfg.seed);
        ok = ok && dom->pass;
    }
    o.status = ok ? kOk : kCheckFailed;
    std::ostringstream ss;
    if (fmt == Format::Csv) {
        if (env) {
            write_envelope_csv(ss, *env);
        } else {
            ss << "A,B,tight,trace\n"
               << decayenv::detail::fmt17(report.A) << ',' << decayenv::detail::fmt17(report.B) << ','
               << (report.tight ? "true" : "false") << ',' << decayenv::detail::fmt17(report.trace) << '\n';
        }
        o.text = ss.str();
    } else {
        io::json j = io::to_json(report);
        j["inequality"] = io::to_json(ineq);
        if (env) {
            j["envelope"] = io::to_json(*env);
            j["domination"] = io::to_json(*dom);
        }
        o.text = dump(j);
    }
    return o;
}

inline Output run_classical(const RunConfig &cfg, Format fmt) {
    std::vector<CorpusEntry> corpus;
    if (cfg.fn) {
        auto spec = io::parse_function_arg(*cfg.fn);
        corpus.push_back({*cfg.fn, std::move(spec.f)});
    } else {
        corpus = default_corpus();
    }
    const auto checks = run_classical_suite(corpus, cfg.range.value_or(999));
    Output o;
    o.status = std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.holds; }) ? kOk : kCheckFailed;
    if (fmt == Format::Csv) {
        std::ostringstream ss;
        write_checks_csv(ss, checks);
        o.text = ss.str();
    } else {
        o.text = dump(io::to_json(checks));
    }
    return o;
}

inline Output run_demo_noncompact(const RunConfig &cfg, Format fmt, std::ostream &diag) {
    const NormSpec y = NormSpec::lp(cfg.p.value_or(2.0));
    const FunctionalFamily family = FunctionalFamily::fourier(cfg.range.value_or(32));
    const Envelope env = envelope_sequence(family, y);
    const auto dom = verify_domination(env, family, y, cfg.trials, cfg.seed);
    bool flat = true;
    for (double v : env.values) flat = flat && std::abs(v - 1.0) <= 1e-12;
    diag << "NOTICE: Y = L^" << decayenv::detail::fmt_g(cfg.p.value_or(2.0))
         << " is not compactly embedded in L^2; the Fourier envelope is constant 1 and no decay occurs\n";
    Output o;
    o.status = (flat && dom.pass) ? kOk : kCheckFailed;
    std::ostringstream ss;
    if (fmt == Format::Csv) {
        write_envelope_csv(ss, env);
        o.text = ss.str();
    } else {
        io::json j = io::to_json(env);
        j["space"] = io::to_json(y);
        j["domination"] = io::to_json(dom);
        j["decays"] = !flat;
        o.text = dump(j);
    }
    return o;
}

/// Coefficient table of one function: exact for piecewise functions, read off for
/// trigonometric polynomials, FFT when the spec names a grid.
inline Output run_coeffs(const RunConfig &cfg, Format fmt) {
    if (!cfg.fn) throw InvalidArgument("coeffs: --fn is required");
    const auto spec = io::parse_function_arg(*cfg.fn);
    const int N = cfg.range.value_or(16);
    const CoeffSeq c = spec.grid ? coeffs_fft(sample(spec.f, *spec.grid), N) : coefficients(spec.f, N);
    Output o;
    std::ostringstream ss;
    if (fmt == Format::Csv) {
        write_coeffs_csv(ss, c);
    } else {
        io::json rows = io::json::array();
        for (int n = -c.range(); n <= c.range(); ++n) rows.push_back({{"n", n}, {"re", c[n].real()}, {"im", c[n].imag()}});
        ss << dump(rows);
    }
    o.text = ss.str();
    return o;
}

} // namespace detail

/// Runs one command; report text goes to `cfg.out` (or `out` when empty), messages to `diag`.
inline int run(const RunConfig &cfg, std::ostream &out = std::cout, std::ostream &diag = std::cerr) {
    detail::Output result;
    try {
        decayenv::detail::require(cfg.trials >= 1, "--trials must be >= 1");
        const auto fmt = detail::format_of(cfg.out);
        if (cfg.command == "envelope") result = detail::run_envelope(cfg, fmt);
        else if (cfg.command == "certify") result = detail::run_certify(cfg, fmt);
        else if (cfg.command == "frame") result = detail::run_frame(cfg, fmt, diag);
        else if (cfg.command == "classical") result = detail::run_classical(cfg, fmt);
        else if (cfg.command == "demo-noncompact") result = detail::run_demo_noncompact(cfg, fmt, diag);
        else if (cfg.command == "coeffs") result = detail::run_coeffs(cfg, fmt);
        else throw InvalidArgument("unknown command '" + cfg.command + "'");
    } catch (const Error &e) {
        diag << "error: " << e.what() << '\n';
        return kUsageError;
    }
    if (cfg.out.empty()) {
        out << result.text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
        f << result.text;
        f.close();
        if (!f) {
            diag << "error: cannot write '" << cfg.out << "'\n";
            return kUsageError;
        }
    }
    if (result.status == kCheckFailed) diag << "FAIL: one or more checks did not hold\n";
    return result.status;
}

} // namespace decayenv::cli
