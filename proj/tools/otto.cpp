// otto: quantum Otto cycle experiments.
//
//   otto sweep    --seed <u64> --out <path.csv> [--config <path>] ...
//   otto reversal --seed <u64> --out <path.csv> [--config <path>] ...
//   otto verify   [--json <path>] [--seed <u64>] [--instances <n>]
//
// Exit codes: 0 success, 1 verification failure, 2 I/O error, 3 config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "otto/experiment.hpp"
#include "otto/verify.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string summary_path;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<double> jitter;
    std::optional<bool> jitter_cold;
};

otto::ExperimentConfig resolve(const CliOverrides& cli) {
    otto::ExperimentConfig config = cli.config_path.empty()
                                        ? otto::ExperimentConfig::defaults()
                                        : otto::ExperimentConfig::from_json_file(cli.config_path);
    if (cli.seed)
        config.master_seed = *cli.seed;
    if (!cli.out_path.empty())
        config.output_path = cli.out_path;
    if (!cli.summary_path.empty())
        config.summary_path = cli.summary_path;
    if (cli.trials)
        config.trials = *cli.trials;
    if (cli.threads)
        config.threads = *cli.threads;
    if (cli.jitter)
        config.jitter_halfwidth = *cli.jitter;
    if (cli.jitter_cold)
        config.jitter_cold = *cli.jitter_cold;
    return config;
}

void add_common_options(CLI::App* cmd, CliOverrides& cli, bool reversal) {
    cmd->add_option("--config", cli.config_path, "JSON config file (all fields optional)");
    auto* seed = cmd->add_option("--seed", cli.seed, "master seed (64-bit)");
    seed->required();
    cmd->add_option("--out", cli.out_path, "output CSV path");
    cmd->add_option("--summary", cli.summary_path, "summary JSON path");
    cmd->add_option("--trials", cli.trials, "number of trials");
    cmd->add_option("--threads", cli.threads, "worker threads (output is identical)");
    if (reversal) {
        cmd->add_option("--jitter", cli.jitter, "hot-bath jitter half-width");
        cmd->add_flag_callback(
            "--jitter-cold", [&cli]() { cli.jitter_cold = true; },
            "also jitter the cold bath");
    }
}

int run_verify_command(const std::string& json_path, std::uint64_t seed, int instances,
                       bool inject_fault) {
    otto::verify::Options opt;
    opt.seed = seed;
    opt.instances = instances;
    opt.inject_fault = inject_fault;
    const std::vector<otto::verify::CheckResult> checks = otto::verify::run_all(opt);
    const bool ok = otto::verify::all_passed(checks);
    for (const auto& c : checks)
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    std::printf("verify: %s\n", ok ? "all checks passed" : "FAILURES present");
    if (!json_path.empty()) {
        nlohmann::json checks_json = nlohmann::json::array();
        for (const auto& c : checks)
            checks_json.push_back(
                {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        const nlohmann::json report{{"schema", "otto-verify-v1"},
                                    {"seed", opt.seed},
                                    {"instances", opt.instances},
                                    {"all_passed", ok},
                                    {"checks", checks_json}};
        std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::fprintf(stderr, "otto: cannot write %s\n", json_path.c_str());
            return 2;
        }
        out << report.dump(2) << "\n";
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum Otto cycle models: weak/strong coupling experiments"};
    app.require_subcommand(1);

    CliOverrides sweep_cli, reversal_cli;
    CLI::App* sweep = app.add_subcommand("sweep", "interaction-strength sweep (CSV + JSON)");
    add_common_options(sweep, sweep_cli, false);
    CLI::App* reversal =
        app.add_subcommand("reversal", "designed-interaction reversal experiment");
    add_common_options(reversal, reversal_cli, true);

    std::string verify_json;
    std::uint64_t verify_seed = otto::verify::Options{}.seed;
    int verify_instances = otto::verify::Options{}.instances;
    bool inject_fault = false;
    CLI::App* verify = app.add_subcommand("verify", "run the identity/property suites");
    verify->add_option("--json", verify_json, "write a machine-readable report");
    verify->add_option("--seed", verify_seed, "base seed for the randomized suites");
    verify->add_option("--instances", verify_instances, "instances per property");
    verify->add_flag("--inject-fault", inject_fault,
                     "self-test: corrupt one interaction so the suite must fail")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return 3;
    }

    try {
        if (sweep->parsed()) {
            const otto::SweepResult result = run_sweep(resolve(sweep_cli));
            std::printf("sweep: %d trials x %zu theta points, eta_weak = %.12g\n",
                        result.trials, result.per_theta.size(), result.eta_weak);
            return 0;
        }
        if (reversal->parsed()) {
            const otto::ReversalResult result = run_reversal(resolve(reversal_cli));
            std::printf("reversal: %d trials, valid %d, fraction(eta_str > eta_weak) = %.4f\n",
                        result.trials, result.valid, result.fraction_above);
            return 0;
        }
        return run_verify_command(verify_json, verify_seed, verify_instances, inject_fault);
    } catch (const otto::IoError& e) {
        std::fprintf(stderr, "otto: %s\n", e.what());
        return 2;
    } catch (const otto::ConfigError& e) {
        std::fprintf(stderr, "otto: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "otto: %s\n", e.what());
        return 3;
    }
}
