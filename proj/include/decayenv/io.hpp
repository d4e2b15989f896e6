#pragma once

// JSON readers for norm, function and frame specs, and JSON writers for reports.

#include "decayenv/classical.hpp"
#include "decayenv/envelope.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/frames.hpp"
#include "decayenv/signal.hpp"
#include "decayenv/spaces.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace decayenv::io {

using json = nlohmann::json;

/// Inline JSON, or `@path` to read it from a file.
inline json load_json_arg(const std::string &arg) {
    std::string text = arg;
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw InvalidArgument("cannot open '" + arg.substr(1) + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

namespace detail {

inline double number(const json &j, const char *key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw InvalidArgument(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline double required_number(const json &j, const char *key) {
    if (!j.contains(key)) throw InvalidArgument(std::string("missing '") + key + "'");
    return number(j, key, 0.0);
}

} // namespace detail

/// {"tag":"sobolev_hs","s":1.0} | {"tag":"weighted_lp","weights":"geometric:0.5","p":2,"dim":8}
/// | {"tag":"lp","p":2} | {"tag":"bv"} | {"tag":"lip_alpha","alpha":0.5}.
/// Weights may also be an explicit array.
inline NormSpec parse_norm_spec(const json &j) {
    if (!j.is_object() || !j.contains("tag") || !j.at("tag").is_string())
        throw InvalidArgument("norm spec needs a string 'tag'");
    const std::string tag = j.at("tag").get<std::string>();
    if (tag == "lp") return NormSpec::lp(detail::number(j, "p", 2.0));
    if (tag == "sobolev_hs") return NormSpec::sobolev(detail::required_number(j, "s"));
    if (tag == "bv") return NormSpec::bv();
    if (tag == "lip_alpha")
        return NormSpec::lip_alpha(detail::required_number(j, "alpha"),
                                   static_cast<int>(detail::number(j, "probe_grid", 256)));
    if (tag == "weighted_lp") {
        const double p = detail::number(j, "p", 2.0);
        if (!j.contains("weights")) throw InvalidArgument("weighted_lp needs 'weights'");
        const json &w = j.at("weights");
        if (w.is_string()) {
            const std::string s = w.get<std::string>();
            const std::string prefix = "geometric:";
            if (s.rfind(prefix, 0) != 0) throw InvalidArgument("unknown weight generator '" + s + "'");
            double r = 0.0;
            try {
                r = std::stod(s.substr(prefix.size()));
            } catch (const std::exception &) {
                throw InvalidArgument("bad geometric ratio in '" + s + "'");
            }
            const double dim = detail::required_number(j, "dim");
            return NormSpec::geometric_weights(r, static_cast<int>(dim), p);
        }
        if (w.is_array()) {
            std::vector<double> ws;
            for (const auto &x : w) {
                if (!x.is_number()) throw InvalidArgument("weights must be numbers");
                ws.push_back(x.get<double>());
            }
            return NormSpec::weighted_lp(std::move(ws), p);
        }
        throw InvalidArgument("'weights' must be a generator string or an array");
    }
    throw InvalidArgument("unknown norm tag '" + tag + "'");
}

inline json to_json(const NormSpec &spec) {
    json j;
    j["tag"] = spec.tag();
    std::visit(
        [&](const auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LpNorm>) j["p"] = n.p;
            else if constexpr (std::is_same_v<T, SobolevNorm>) j["s"] = n.s;
            else if constexpr (std::is_same_v<T, WeightedLpNorm>) {
                j["weights"] = n.weights;
                j["p"] = n.p;
            } else if constexpr (std::is_same_v<T, LipAlphaNorm>) {
                j["alpha"] = n.alpha;
                j["probe_grid"] = n.probe_grid;
            }
        },
        spec.variant());
    return j;
}

struct FunctionSpec {
    std::string kind;
    Function f;
    std::optional<std::size_t> grid;
};

/// {"kind": "<builtin>", "params": {...}, "grid": M?}. Parameter keys: complex_exp "k",
/// weierstrass "alpha" and "K", fejer "N", constant "value".
inline FunctionSpec parse_function_spec(const json &j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw InvalidArgument("function spec needs a string 'kind'");
    FunctionSpec out;
    out.kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (!params.is_object()) throw InvalidArgument("'params' must be an object");
    std::vector<double> pos;
    if (out.kind == "complex_exp") pos = {detail::number(params, "k", 1.0)};
    else if (out.kind == "weierstrass") pos = {detail::number(params, "alpha", 0.5), detail::number(params, "K", 8.0)};
    else if (out.kind == "fejer") pos = {detail::number(params, "N", 4.0)};
    else if (out.kind == "constant") pos = {detail::number(params, "value", 1.0)};
    out.f = builtin(out.kind, pos);
    if (j.contains("grid")) {
        const double g = detail::required_number(j, "grid");
        if (g < 2 || g != std::floor(g) || !decayenv::detail::is_power_of_two(static_cast<std::size_t>(g)))
            throw InvalidArgument("'grid' must be a power of two >= 2");
        out.grid = static_cast<std::size_t>(g);
    }
    return out;
}

/// `name` or `name:p1,p2,...` with positional parameters, or a JSON function spec.
inline FunctionSpec parse_function_arg(const std::string &arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '@')) return parse_function_spec(load_json_arg(arg));
    FunctionSpec out;
    const auto colon = arg.find(':');
    out.kind = arg.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::stringstream ss(arg.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                params.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception &) {
                throw InvalidArgument("bad parameter '" + item + "' in '" + arg + "'");
            }
        }
    }
    out.f = builtin(out.kind, params);
    return out;
}

/// {"dim": d, "vectors": [[[re, im], ...], ...]} (entries may also be plain reals), or
/// {"builtin": "mercedes" | "onb" | "union_onb" | "harmonic", "dim": d, "count": K}.
inline FrameSpec parse_frame_spec(const json &j) {
    if (!j.is_object()) throw InvalidArgument("frame spec must be an object");
    if (j.contains("builtin")) {
        const int dim = static_cast<int>(detail::number(j, "dim", 2));
        const int count = static_cast<int>(detail::number(j, "count", dim));
        return builtin_frame(j.at("builtin").get<std::string>(), dim, count);
    }
    FrameSpec f;
    f.dim = static_cast<int>(detail::required_number(j, "dim"));
    if (!j.contains("vectors") || !j.at("vectors").is_array()) throw InvalidArgument("frame spec needs 'vectors'");
    for (const auto &v : j.at("vectors")) {
        if (!v.is_array()) throw InvalidArgument("each frame vector must be an array");
        std::vector<cplx> vec;
        for (const auto &e : v) {
            if (e.is_number()) vec.emplace_back(e.get<double>());
            else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                vec.emplace_back(e[0].get<double>(), e[1].get<double>());
            else throw InvalidArgument("frame entries must be reals or [re, im] pairs");
        }
        f.vectors.push_back(std::move(vec));
    }
    f.validate_shape();
    return f;
}

// ---------------------------------------------------------------------------
// Report writers
// ---------------------------------------------------------------------------

inline json to_json(const FrameReport &r) {
    return json{{"A", r.A}, {"B", r.B}, {"tight", r.tight}, {"trace", r.trace}};
}

inline json to_json(const FrameInequalityReport &r) {
    return json{{"trials", r.trials},
                {"min_quotient", r.min_quotient},
                {"max_quotient", r.max_quotient},
                {"max_coefficient", r.max_coefficient},
                {"violations", r.violations},
                {"pass", r.pass}};
}

inline json to_json(const DominationReport &r) {
    json j{{"pass", r.pass}, {"trials", r.trials}, {"violations", r.violations}, {"max_ratio", r.max_ratio}};
    if (r.witness) j["witness"] = {{"trial", r.witness->trial}, {"member", r.witness->member},
                                   {"slot", r.witness->slot},   {"lhs", r.witness->lhs},
                                   {"rhs", r.witness->rhs}};
    return j;
}

inline json to_json(const Envelope &env) {
    return json{{"indexing", env.indexing == EnvelopeIndexing::AbsFrequency ? "abs_frequency" : "enumeration"},
                {"raw", env.raw},
                {"epsilon", env.values}};
}

/// {"M":..., "stages":[{"m", "delta", "net_size", "N_m", ...}], "horizon":..., "certified":bool, ...}
inline json to_json(const NetCertification &c) {
    json stages = json::array();
    for (const auto &s : c.stages)
        stages.push_back({{"m", s.m},
                          {"delta", s.delta},
                          {"net_size", s.net_size},
                          {"N_m", s.threshold},
                          {"minimal_N_m", s.minimal_threshold},
                          {"certified", s.certified}});
    return json{{"M", c.m_bound},
                {"stages", stages},
                {"horizon", c.horizon},
                {"certified", c.certified},
                {"dominated", c.dominated},
                {"tail_extended", c.tail_extended},
                {"horizon_limited", c.horizon_limited},
                {"step_envelope", c.step_envelope.values},
                {"restricted_norms", c.step_envelope.raw}};
}

inline json to_json(const CheckResult &r) {
    json j{{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}, {"tolerance", r.tolerance}};
    j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
    if (r.ratio) j["ratio"] = *r.ratio;
    if (r.evidence) j["evidence"] = true;
    return j;
}

inline json to_json(const std::vector<CheckResult> &checks) {
    json arr = json::array();
    for (const auto &c : checks) arr.push_back(to_json(c));
    return arr;
}

} // namespace decayenv::io
