#include "decayenv/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    using decayenv::cli::RunConfig;
    RunConfig cfg;
    CLI::App app{"Coefficient decay envelopes and classical Fourier/frame checks"};
    app.require_subcommand(1);

    auto common = [&](CLI::App *sub) {
        sub->add_option("--out", cfg.out, "Output path; format from extension (.csv, .json)");
        sub->add_option("--seed", cfg.seed, "Seed for all randomness");
        sub->add_option("--trials", cfg.trials, "Random trials for domination / frame checks");
    };
    auto opt_int = [](CLI::App *sub, const char *name, std::optional<int> &slot, const char *help) {
        sub->add_option_function<int>(name, [&slot](const int &v) { slot = v; }, help);
    };
    auto opt_str = [](CLI::App *sub, const char *name, std::optional<std::string> &slot, const char *help) {
        sub->add_option_function<std::string>(name, [&slot](const std::string &v) { slot = v; }, help);
    };

    auto *env = app.add_subcommand("envelope", "Exact decay envelope of Fourier or coordinate functionals on Y");
    opt_str(env, "--space", cfg.space, "Y norm spec (JSON or @file)");
    opt_int(env, "--range", cfg.range, "Fourier range N (|n| <= N) or coordinate count");

    auto *cert = app.add_subcommand("certify", "Finite-net certification of a step envelope");
    opt_str(cert, "--space", cfg.space, "Hilbertian Y norm spec (JSON or @file)");
    opt_int(cert, "--range", cfg.range, "Family size: Fourier range or coordinate count");
    opt_int(cert, "--dim", cfg.dim, "Net truncation: coordinates (real) or centred Fourier modes (complex)");
    opt_int(cert, "--mmax", cfg.mmax, "Number of net stages m = 1..mmax");
    opt_int(cert, "--horizon", cfg.horizon, "Scan horizon K");

    auto *frame = app.add_subcommand("frame", "Frame bounds, frame inequality and coefficient envelope");
    opt_str(frame, "--builtin", cfg.builtin, "mercedes | onb | union_onb | harmonic");
    opt_str(frame, "--frame", cfg.frame, "Frame JSON (or @file)");
    opt_int(frame, "--dim", cfg.dim, "Dimension d");
    opt_int(frame, "--count", cfg.count, "Vector count K (harmonic)");
    opt_str(frame, "--space", cfg.space, "Weighted l^2 Y norm for the coefficient envelope");

    auto *classical = app.add_subcommand("classical", "Classical inequality suite over the corpus");
    opt_str(classical, "--fn", cfg.fn, "Single function: builtin[:params] or JSON spec");
    opt_int(classical, "--range", cfg.range, "Coefficient truncation N");

    auto *demo = app.add_subcommand("demo-noncompact", "Envelope of Y = L^p: constant, no decay");
    opt_int(demo, "--range", cfg.range, "Fourier range N");
    demo->add_option_function<double>("--p", [&](const double &v) { cfg.p = v; }, "Exponent p of Y = L^p");

    auto *coeffs = app.add_subcommand("coeffs", "Fourier coefficient table n,re,im,abs");
    opt_str(coeffs, "--fn", cfg.fn, "builtin[:params] or JSON spec");
    opt_int(coeffs, "--range", cfg.range, "Range N");

    for (auto *sub : {env, cert, frame, classical, demo, coeffs}) common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return decayenv::cli::kUsageError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return decayenv::cli::run(cfg);
}
