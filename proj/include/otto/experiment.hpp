#ifndef OTTO_EXPERIMENT_HPP
#define OTTO_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "otto/strong_cycle.hpp"

namespace otto {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment configuration. Every field is optional in the JSON config
// file; the defaults below are the reference two-level instance. The
// resolved configuration is echoed into the summary JSON.
struct ExperimentConfig {
    double beta_c = 2.0;
    double beta_h = 0.5;
    std::vector<double> e_cold = {0.6, 1.4};
    double hot_scale = 2.0;
    std::vector<double> e_hot;     // empty: hot_scale * e_cold
    std::vector<double> bath_cold; // default 0.5, 1.5, ..., 15.5
    std::vector<double> bath_hot;  // default 2.0, 3.0, ..., 17.0
    std::vector<double> theta_grid; // default 41 points on [0, 0.02]
    int trials = 0;                 // 0: per-command default (sweep 50, reversal 1000)
    double jitter_halfwidth = 0.3;
    bool jitter_cold = false; // jitter is applied to the hot bath; opt-in for cold
    int threads = 1;
    std::uint64_t master_seed = 0;
    std::string output_path;
    std::string summary_path; // empty: output_path with a .summary.json suffix

    static ExperimentConfig defaults();
    // Parses a JSON object with any subset of the fields above; unknown
    // keys are rejected. Throws ConfigError / IoError.
    static ExperimentConfig from_json_file(const std::string& path);

    SystemSpec system_spec() const;
    std::vector<double> resolved_e_hot() const;
    std::string resolved_summary_path() const;
    void validate(bool needs_theta_grid) const; // throws ConfigError
};

// One evaluated cycle, as serialized into the CSV artifacts. eta_str is
// empty for parameter draws that do not run as an engine.
struct TrialRecord {
    int trial_id = 0;
    double theta = 0.0; // sweep only
    std::optional<double> eta_str;
    double eta_weak = 0.0;
    double d_hot = 0.0, d_cold = 0.0;
    double delta_ed_hot = 0.0, delta_ed_cold = 0.0;
    bool engine_valid = false;
    bool sufficient_condition = false;
    bool carnot_ok = false;
};

struct ThetaStat {
    double theta = 0.0;
    int valid = 0, invalid = 0;
    double mean = 0.0, min = 0.0, max = 0.0;
};

struct SweepResult {
    std::vector<TrialRecord> rows;
    std::vector<ThetaStat> per_theta;
    double eta_weak = 0.0;
    int trials = 0;
    double duration_seconds = 0.0;
};

struct ReversalResult {
    std::vector<TrialRecord> rows;
    double eta_weak = 0.0;
    int trials = 0;
    int valid = 0;
    int excluded = 0;  // rows without a running engine
    int resampled = 0; // jitter draws rejected by the spectral-gap guard
    int above_weak = 0;
    double fraction_above = 0.0; // above_weak / valid
    double hist_lo = 0.40, hist_hi = 0.75, hist_width = 0.005;
    std::vector<int> histogram; // valid rows only
    int below_range = 0, above_range = 0;
    double duration_seconds = 0.0;
};

// Runs the theta sweep / the designed-interaction reversal experiment and
// writes the CSV artifact plus the summary JSON. Fully deterministic in
// (config, master_seed) apart from the recorded wall-clock duration.
SweepResult run_sweep(const ExperimentConfig& config);
ReversalResult run_reversal(const ExperimentConfig& config);

// One CSV line (with trailing newline). Doubles are %.17g; a record
// without a running engine serializes eta_str as an empty field next to a
// false engine_valid flag.
std::string trial_csv_row(const TrialRecord& record, bool with_theta);

} // namespace otto

#endif
