// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Each criterion pins its tolerance in code; the experiment criteria run
// the same drivers as the CLI at desk scale.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "otto/experiment.hpp"
#include "otto/verify.hpp"

using namespace otto;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool passed, const std::string& what,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", passed ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!passed)
        ++failures;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << v;
    return os.str();
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

SystemSpec reference_spec() {
    return ExperimentConfig::defaults().system_spec();
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    const fs::path workdir =
        fs::temp_directory_path() / ("otto-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(workdir);

    const SystemSpec spec = reference_spec();
    const WeakReport weak = weak_cycle(spec);

    // ---- 1. weak-model golden value --------------------------------------
    {
        const bool ok = weak.engine_valid && std::abs(*weak.eta_ratio - 0.5) < 1e-12 &&
                        std::abs(eta_weak_entropy_form(spec) - 0.5) < 1e-12;
        report(1, ok, "weak model gives eta = 0.5 within 1e-12",
               "eta_ratio - 0.5 = " + fmt(*weak.eta_ratio - 0.5));
    }

    // ---- 2. Carnot limit (value; experiment rows checked after 4 and 5) ---
    const double eta_carnot = 1.0 - spec.beta_h.value() / spec.beta_c.value();
    {
        const bool ok = std::abs(eta_carnot - 0.75) < 1e-15;
        report(2, ok, "eta_C = 0.75 for the default temperatures",
               "eta_C = " + fmt(eta_carnot));
    }

    // ---- 3. weak-coupling limit ------------------------------------------
    {
        const StrongReport id = strong_cycle(spec, ComplexMatrix::Identity(32, 32),
                                             ComplexMatrix::Identity(32, 32));
        double worst = 0.0;
        const auto dev = [&worst](double a, double b) {
            worst = std::max(worst, std::abs(a - b));
        };
        dev(id.q_in, weak.q_in);
        dev(id.q_out, weak.q_out);
        dev(id.w_out, weak.w_out);
        dev(id.w_com, weak.w_com);
        dev(id.w_exp, weak.w_exp);
        dev(id.q_th_h, weak.q_in);
        dev(id.q_d_h, 0.0);
        dev(id.w_d_h, 0.0);
        dev(id.w_d_c, 0.0);
        dev(*id.eta_ratio, *weak.eta_ratio);
        const bool identity_ok = id.engine_valid && worst < 1e-9;

        double worst_theta = 0.0;
        for (const std::uint64_t seed : {11ull, 22ull, 33ull}) {
            RandomStream rng(seed);
            const ThetaFamily hot(haar_unitary(32, rng));
            const ThetaFamily cold(haar_unitary(32, rng));
            const StrongReport r =
                strong_cycle(spec, hot.unitary(1e-4), cold.unitary(1e-4));
            worst_theta = std::max(worst_theta, std::abs(*r.eta_ratio - 0.5));
        }
        const bool theta_ok = worst_theta < 1e-6;
        report(3, identity_ok && theta_ok,
               "strong cycle reproduces the weak limit (identity within 1e-9, "
               "theta = 1e-4 within 1e-6)",
               "identity dev " + fmt(worst) + ", theta dev " + fmt(worst_theta));
    }

    // ---- 4. interaction-strength sweep (statistical) ----------------------
    std::vector<TrialRecord> all_rows;
    {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig config = ExperimentConfig::defaults();
        config.trials = 50;
        config.threads = 1;
        config.master_seed = 1001;
        config.output_path = (workdir / "sweep.csv").string();
        const SweepResult sweep = run_sweep(config);
        const double elapsed = seconds_since(t0);
        all_rows.insert(all_rows.end(), sweep.rows.begin(), sweep.rows.end());

        bool means_below = true;
        for (const ThetaStat& s : sweep.per_theta)
            if (s.theta >= 0.005 && !(s.valid > 0 && s.mean < sweep.eta_weak))
                means_below = false;
        int within = 0, total = 0;
        for (const TrialRecord& row : sweep.rows) {
            if (!row.eta_str)
                continue;
            ++total;
            within += *row.eta_str <= sweep.eta_weak + 1e-9;
        }
        const double frac = total > 0 ? double(within) / total : 0.0;
        const bool ok = means_below && frac >= 0.95 && elapsed < 120.0;
        report(4, ok,
               "sweep: mean eta below weak for theta >= 0.005 and >= 95% of "
               "points at or below it",
               "fraction " + fmt(frac) + ", " + fmt(elapsed) + " s single-threaded");
    }

    // ---- 5. designed-interaction reversal (statistical) -------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig config = ExperimentConfig::defaults();
        config.trials = 1000;
        config.master_seed = 2002;
        config.output_path = (workdir / "reversal.csv").string();
        const ReversalResult reversal = run_reversal(config);
        const double elapsed = seconds_since(t0);
        all_rows.insert(all_rows.end(), reversal.rows.begin(), reversal.rows.end());
        const bool ok = reversal.valid > 0 && reversal.fraction_above > 0.5 &&
                        reversal.fraction_above >= 0.8 && elapsed < 300.0;
        report(5, ok, "reversal: fraction(eta_str > eta_weak) >= 0.8 over 1000 trials",
               "fraction " + fmt(reversal.fraction_above) + ", excluded " +
                   std::to_string(reversal.excluded) + ", " + fmt(elapsed) + " s");
    }

    // ---- 2 (continued): every valid eta < 0.75 strictly --------------------
    {
        bool ok = true;
        for (const TrialRecord& row : all_rows)
            if (row.eta_str && !(*row.eta_str < eta_carnot && row.carnot_ok))
                ok = false;
        report(2, ok, "every valid eta in every experiment is < 0.75 strictly",
               std::to_string(all_rows.size()) + " rows checked");
    }

    // ---- 6 and 7. identity and majorization suites ------------------------
    {
        verify::Options opt;
        opt.instances = 1000;
        const std::vector<verify::CheckResult> checks = verify::run_all(opt);
        const std::vector<std::string> identity_names = {
            "weak-cycle-identities",    "conjugation-identity",
            "thermalization-heat-forms", "bath-reduction-identity",
            "strong-first-law-and-eta-forms", "unitary-restriction",
            "decoupling-cost-identities", "entropy-invariances",
        };
        const std::vector<std::string> majorization_names = {
            "majorization-properties", "optimal-unitary-exhaustive", "d-value-agreement"};
        const auto suite_ok = [&](const std::vector<std::string>& names,
                                  std::string& failed) {
            bool ok = true;
            for (const auto& name : names) {
                bool found = false;
                for (const auto& c : checks)
                    if (c.name == name) {
                        found = true;
                        if (!c.passed) {
                            ok = false;
                            failed = name + ": " + c.detail;
                        }
                    }
                if (!found) {
                    ok = false;
                    failed = name + " missing";
                }
            }
            return ok;
        };
        std::string detail6 = "1000 randomized instances per identity";
        const bool ok6 = suite_ok(identity_names, detail6);
        report(6, ok6, "identity suite at 1e3 randomized instances", detail6);

        std::string detail7 = "1000 doubly stochastic samples; exhaustive dim <= 8";
        const bool ok7 = suite_ok(majorization_names, detail7);
        report(7, ok7, "majorization theorem suite", detail7);
    }

    // ---- 8. sufficient-condition theorem across all outputs ----------------
    {
        int violations = 0;
        for (const TrialRecord& row : all_rows)
            if (row.eta_str && row.delta_ed_hot >= 0.0 && row.delta_ed_cold >= 0.0 &&
                *row.eta_str > row.eta_weak + 1e-9)
                ++violations;
        report(8, violations == 0,
               "no valid row with nonnegative decoupling costs exceeds eta_weak",
               std::to_string(violations) + " violations in " +
                   std::to_string(all_rows.size()) + " rows");
    }

    // ---- 9. determinism ----------------------------------------------------
    {
        ExperimentConfig config = ExperimentConfig::defaults();
        config.trials = 6;
        config.theta_grid = {0.0, 0.005, 0.01, 0.015, 0.02};
        config.master_seed = 3003;
        config.output_path = (workdir / "det_a.csv").string();
        run_sweep(config);
        config.output_path = (workdir / "det_b.csv").string();
        run_sweep(config);
        config.output_path = (workdir / "det_c.csv").string();
        config.threads = 4;
        run_sweep(config);
        const std::string a = slurp((workdir / "det_a.csv").string());
        const bool sweep_ok = !a.empty() &&
                              a == slurp((workdir / "det_b.csv").string()) &&
                              a == slurp((workdir / "det_c.csv").string());

        ExperimentConfig rconfig = ExperimentConfig::defaults();
        rconfig.trials = 40;
        rconfig.master_seed = 4004;
        rconfig.output_path = (workdir / "det_ra.csv").string();
        run_reversal(rconfig);
        rconfig.output_path = (workdir / "det_rb.csv").string();
        rconfig.threads = 4;
        run_reversal(rconfig);
        const std::string ra = slurp((workdir / "det_ra.csv").string());
        const bool reversal_ok =
            !ra.empty() && ra == slurp((workdir / "det_rb.csv").string());
        report(9, sweep_ok && reversal_ok,
               "identical seeds give byte-identical CSVs, serial == parallel",
               sweep_ok && reversal_ok ? "byte-identical" : "MISMATCH");
    }

    std::error_code ec;
    fs::remove_all(workdir, ec);

    std::printf("acceptance: %d criterion check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
