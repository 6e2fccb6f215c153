// Command-line front end: exact oracles, Monte Carlo estimates, oracle
// cross-verification and figure presets.

#include "isingdual/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace isingdual;

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void print_results(const RunManifest& manifest, const std::string& out)
{
    for (const auto& r : manifest.results) {
        if (r.chain_id < 0)
            std::printf("exact: ln Z = %.12g, per-site log2 Z = %.12g\n", r.ln_z, r.per_site_log2_z);
        else
            std::printf("chain %lld: ln Z = %.10g +- %.3g, per-site log2 Z = %.10g\n", r.chain_id,
                        r.ln_z, r.std_error_ln_z, r.per_site_log2_z);
    }
    std::printf("wrote %s and %s\n", out.c_str(), manifest_path(out).string().c_str());
}

struct RunArgs
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    bool check_constraints = false;
};

int run_configured(const RunArgs& args, bool want_exact)
{
    ExperimentConfig cfg = parse_config(read_file(args.config));
    if (want_exact && !cfg.exact)
        throw ConfigError("/method", "the exact subcommand needs /method/exact");
    if (!want_exact && !cfg.mc)
        throw ConfigError("/method", "the estimate subcommand needs /method/mc");
    if (!args.out.empty())
        cfg.output.path = args.out;
    if (args.seed && cfg.mc)
        cfg.mc->seed = *args.seed;
    RunOptions opts;
    opts.threads = args.threads;
    opts.check_constraints = args.check_constraints;
    const RunManifest manifest = run_experiment(cfg, opts);
    print_results(manifest, cfg.output.path);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Partition function of 1D and 2D Ising models on the primal and dual factor graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(isingdual::version));

    RunArgs exact_args;
    auto* exact = app.add_subcommand("exact", "Compute ln Z with an exact method from a config file");
    exact->add_option("--config,config", exact_args.config, "JSON config or run manifest")->required();
    exact->add_option("--out", exact_args.out, "Output path (overrides the config)");

    RunArgs est_args;
    auto* estimate = app.add_subcommand("estimate", "Run Monte Carlo chains from a config file");
    estimate->add_option("--config,config", est_args.config, "JSON config or run manifest")->required();
    estimate->add_option("--out", est_args.out, "Output path (overrides the config)");
    estimate->add_option("--seed", est_args.seed, "Base seed (overrides the config)");
    estimate->add_option("--threads", est_args.threads, "Worker threads")->check(CLI::PositiveNumber);
    estimate->add_flag("--check-constraints", est_args.check_constraints,
                       "Assert the dual parity constraints after every sample");

    VerifyOptions verify_opts;
    auto* verify_cmd = app.add_subcommand("verify", "Cross-check all exact methods on random models");
    verify_cmd->add_option("--max-m", verify_opts.max_m, "Largest grid side")->check(CLI::Range(2, 5));
    verify_cmd->add_option("--max-n", verify_opts.max_n, "Longest chain")->check(CLI::Range(2, 26));
    verify_cmd->add_option("--trials", verify_opts.trials, "Random coupling draws per size");
    verify_cmd->add_option("--seed", verify_opts.seed, "Seed for the coupling draws");
    verify_cmd->add_option("--tolerance", verify_opts.tolerance, "Relative tolerance on ln Z");
    verify_cmd->add_option("--tamper-bits", verify_opts.tamper_bits,
                           "Offset the dual normalization by this many bits (harness self-test)");

    std::string figure_name;
    std::string out_dir = ".";
    std::size_t rep_threads = 1;
    std::uint64_t rep_samples = 100000;
    bool rep_check = false;
    auto* rep = app.add_subcommand("reproduce", "Run a figure preset (fig6 .. fig11)");
    rep->add_option("figure", figure_name, "fig6, fig7, fig8, fig9, fig10 or fig11")->required();
    rep->add_option("--out", out_dir, "Output directory");
    rep->add_option("--threads", rep_threads, "Worker threads")->check(CLI::PositiveNumber);
    rep->add_option("--samples", rep_samples, "Samples per chain")->check(CLI::PositiveNumber);
    rep->add_flag("--check-constraints", rep_check, "Assert the dual parity constraints");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (*exact)
            return run_configured(exact_args, true);
        if (*estimate)
            return run_configured(est_args, false);
        if (*verify_cmd) {
            const VerifyReport report = verify(verify_opts);
            std::printf("%zu comparisons, worst relative discrepancy %.3e (%s)\n", report.comparisons,
                        report.worst_relative, report.worst_case.c_str());
            for (const auto& f : report.failures)
                std::printf("MISMATCH %s\n", f.c_str());
            std::printf("%s\n", report.passed ? "verify: PASS" : "verify: FAIL");
            return report.passed ? exit_ok : exit_verification_failure;
        }
        if (*rep) {
            const auto figure = figure_from_string(figure_name);
            if (!figure)
                throw ConfigError("figure", "unknown figure '" + figure_name + "'");
            RunOptions opts;
            opts.threads = rep_threads;
            opts.check_constraints = rep_check;
            const RunManifest manifest = reproduce(*figure, out_dir, opts, rep_samples);
            std::printf("exact reference: per-site log2 Z = %.12g\n",
                        manifest.notes.value("reference_per_site_log2_Z", 0.0));
            print_results(manifest, manifest.config["output"]["path"].get<std::string>());
            return exit_ok;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return exit_config_error;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return exit_io_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config_error;
    }
    return exit_ok;
}
