#include "otto/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace otto {

namespace {

using nlohmann::json;

std::vector<double> arange(double first, double last, double step) {
    std::vector<double> out;
    for (double v = first; v <= last + 1e-9; v += step)
        out.push_back(v);
    return out;
}

std::vector<double> theta_default() {
    std::vector<double> out(41);
    for (int i = 0; i < 41; ++i)
        out[static_cast<std::size_t>(i)] = 0.02 * i / 40.0;
    return out;
}

RealVector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const RealVector>(v.data(), static_cast<Index>(v.size()));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << contents;
    out.flush();
    if (!out)
        throw IoError("write failed: " + path);
}

// Rows are produced into preassigned slots, so scheduling cannot reorder
// or change the artifact.
void parallel_trials(int trial_count, int threads,
                     const std::function<void(int)>& body) {
    if (threads <= 1) {
        for (int t = 0; t < trial_count; ++t)
            body(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trial_count)
                return;
            try {
                body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min(threads, trial_count);
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace

std::string trial_csv_row(const TrialRecord& r, bool with_theta) {
    std::string line = std::to_string(r.trial_id);
    if (with_theta)
        line += "," + format_double(r.theta);
    line += "," + format_double(r.eta_weak);
    line += ",";
    if (r.eta_str)
        line += format_double(*r.eta_str);
    line += "," + format_double(r.d_hot);
    line += "," + format_double(r.d_cold);
    line += "," + format_double(r.delta_ed_hot);
    line += "," + format_double(r.delta_ed_cold);
    line += r.engine_valid ? ",true" : ",false";
    line += r.sufficient_condition ? ",true" : ",false";
    line += "\n";
    return line;
}

namespace {

json config_json(const ExperimentConfig& c) {
    return json{{"beta_c", c.beta_c},
                {"beta_h", c.beta_h},
                {"e_cold", c.e_cold},
                {"hot_scale", c.hot_scale},
                {"e_hot", c.resolved_e_hot()},
                {"bath_cold", c.bath_cold},
                {"bath_hot", c.bath_hot},
                {"theta_grid", c.theta_grid},
                {"trials", c.trials},
                {"jitter_halfwidth", c.jitter_halfwidth},
                {"jitter_cold", c.jitter_cold},
                {"threads", c.threads},
                {"master_seed", c.master_seed},
                {"output_path", c.output_path},
                {"summary_path", c.resolved_summary_path()}};
}

TrialRecord make_record(int trial_id, double theta, const WeakReport& weak,
                        const StrongReport& strong) {
    TrialRecord rec;
    rec.trial_id = trial_id;
    rec.theta = theta;
    rec.eta_weak = weak.eta_ratio.value();
    if (strong.engine_valid)
        rec.eta_str = strong.eta_ratio;
    rec.d_hot = strong.d_joint_h - weak.d_hot;
    rec.d_cold = strong.d_joint_c - weak.d_cold;
    rec.delta_ed_hot = strong.delta_e_d_h;
    rec.delta_ed_cold = strong.delta_e_d_c;
    rec.engine_valid = strong.engine_valid;
    rec.sufficient_condition = strong.sufficient_condition;
    rec.carnot_ok = strong.carnot_ok;
    return rec;
}

} // namespace

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig c;
    c.bath_cold = arange(0.5, 15.5, 1.0);
    c.bath_hot = arange(2.0, 17.0, 1.0);
    c.theta_grid = theta_default();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object())
        throw ConfigError("config root must be a JSON object");

    ExperimentConfig c = defaults();
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "beta_c")
                c.beta_c = value.get<double>();
            else if (key == "beta_h")
                c.beta_h = value.get<double>();
            else if (key == "e_cold")
                c.e_cold = value.get<std::vector<double>>();
            else if (key == "hot_scale")
                c.hot_scale = value.get<double>();
            else if (key == "e_hot")
                c.e_hot = value.get<std::vector<double>>();
            else if (key == "bath_cold")
                c.bath_cold = value.get<std::vector<double>>();
            else if (key == "bath_hot")
                c.bath_hot = value.get<std::vector<double>>();
            else if (key == "theta_grid")
                c.theta_grid = value.get<std::vector<double>>();
            else if (key == "trials")
                c.trials = value.get<int>();
            else if (key == "jitter_halfwidth")
                c.jitter_halfwidth = value.get<double>();
            else if (key == "jitter_cold")
                c.jitter_cold = value.get<bool>();
            else if (key == "threads")
                c.threads = value.get<int>();
            else if (key == "master_seed")
                c.master_seed = value.get<std::uint64_t>();
            else if (key == "output_path")
                c.output_path = value.get<std::string>();
            else if (key == "summary_path")
                c.summary_path = value.get<std::string>();
            else
                throw ConfigError("unknown config key: " + key);
        }
    } catch (const json::exception& e) {
        throw ConfigError("bad config value: " + std::string(e.what()));
    }
    return c;
}

std::vector<double> ExperimentConfig::resolved_e_hot() const {
    if (!e_hot.empty())
        return e_hot;
    std::vector<double> out = e_cold;
    for (double& v : out)
        v *= hot_scale;
    return out;
}

std::string ExperimentConfig::resolved_summary_path() const {
    if (!summary_path.empty())
        return summary_path;
    std::string base = output_path;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
        base.resize(base.size() - 4);
    return base + ".summary.json";
}

SystemSpec ExperimentConfig::system_spec() const {
    return SystemSpec{to_vector(e_cold),      to_vector(resolved_e_hot()),
                      to_vector(bath_cold),   to_vector(bath_hot),
                      InverseTemperature(beta_c), InverseTemperature(beta_h)};
}

void ExperimentConfig::validate(bool needs_theta_grid) const {
    try {
        system_spec().validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (needs_theta_grid) {
        if (theta_grid.empty())
            throw ConfigError("theta_grid must not be empty");
        for (double t : theta_grid)
            if (!(t >= 0.0 && t <= 1.0))
                throw ConfigError("theta values must lie in [0, 1]");
    }
    if (trials < 0)
        throw ConfigError("trials must be >= 1 (or 0 for the command default)");
    if (!(jitter_halfwidth >= 0.0))
        throw ConfigError("jitter_halfwidth must be >= 0");
    if (threads < 1)
        throw ConfigError("threads must be >= 1");
    if (output_path.empty())
        throw ConfigError("output path is required");
}

SweepResult run_sweep(const ExperimentConfig& config_in) {
    ExperimentConfig config = config_in;
    if (config.trials == 0)
        config.trials = 50;
    config.validate(true);
    const auto t0 = std::chrono::steady_clock::now();

    const SystemSpec spec = config.system_spec();
    const WeakReport weak = weak_cycle(spec);
    if (!weak.engine_valid)
        throw ConfigError("configured system is not an engine in the weak model");

    const Index dim_hot = spec.e_hot.size() * spec.bath_hot.size();
    const Index dim_cold = spec.e_cold.size() * spec.bath_cold.size();
    const int n_theta = static_cast<int>(config.theta_grid.size());

    SweepResult result;
    result.trials = config.trials;
    result.eta_weak = weak.eta_ratio.value();
    result.rows.resize(static_cast<std::size_t>(config.trials) *
                       static_cast<std::size_t>(n_theta));

    parallel_trials(config.trials, config.threads, [&](int t) {
        RandomStream rng(substream_seed(config.master_seed, "sweep",
                                        static_cast<std::uint64_t>(t)));
        const ThetaFamily family_hot(haar_unitary(dim_hot, rng));
        const ThetaFamily family_cold(haar_unitary(dim_cold, rng));
        for (int k = 0; k < n_theta; ++k) {
            const double theta = config.theta_grid[static_cast<std::size_t>(k)];
            const StrongReport strong =
                strong_cycle(spec, family_hot.unitary(theta), family_cold.unitary(theta));
            result.rows[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_theta) +
                        static_cast<std::size_t>(k)] = make_record(t, theta, weak, strong);
        }
    });

    // Per-theta statistics over valid rows.
    result.per_theta.resize(static_cast<std::size_t>(n_theta));
    for (int k = 0; k < n_theta; ++k) {
        ThetaStat stat;
        stat.theta = config.theta_grid[static_cast<std::size_t>(k)];
        double sum = 0.0;
        stat.min = std::numeric_limits<double>::infinity();
        stat.max = -std::numeric_limits<double>::infinity();
        for (int t = 0; t < config.trials; ++t) {
            const TrialRecord& r =
                result.rows[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_theta) +
                            static_cast<std::size_t>(k)];
            if (r.eta_str) {
                ++stat.valid;
                sum += *r.eta_str;
                stat.min = std::min(stat.min, *r.eta_str);
                stat.max = std::max(stat.max, *r.eta_str);
            } else {
                ++stat.invalid;
            }
        }
        if (stat.valid > 0)
            stat.mean = sum / stat.valid;
        result.per_theta[static_cast<std::size_t>(k)] = stat;
    }

    std::string csv = "# otto sweep csv v1\n";
    csv += "trial_id,theta,eta_weak,eta_str,d_hot,d_cold,delta_Ed_hot,delta_Ed_cold,"
           "engine_valid,sufficient_condition\n";
    for (const TrialRecord& r : result.rows)
        csv += trial_csv_row(r, true);
    write_file(config.output_path, csv);

    result.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json per_theta = json::array();
    for (const ThetaStat& s : result.per_theta) {
        per_theta.push_back(json{{"theta", s.theta},
                                 {"valid", s.valid},
                                 {"invalid", s.invalid},
                                 {"mean_eta_str", s.mean},
                                 {"min_eta_str", s.min},
                                 {"max_eta_str", s.max}});
    }
    const json summary{{"schema", "otto-sweep-summary-v1"},
                       {"config", config_json(config)},
                       {"eta_weak", result.eta_weak},
                       {"per_theta", per_theta},
                       {"duration_seconds", result.duration_seconds}};
    write_file(config.resolved_summary_path(), summary.dump(2) + "\n");
    return result;
}

ReversalResult run_reversal(const ExperimentConfig& config_in) {
    ExperimentConfig config = config_in;
    if (config.trials == 0)
        config.trials = 1000;
    config.validate(false);
    const auto t0 = std::chrono::steady_clock::now();

    const SystemSpec base = config.system_spec();
    const WeakReport weak = weak_cycle(base);
    if (!weak.engine_valid)
        throw ConfigError("configured system is not an engine in the weak model");

    ReversalResult result;
    result.trials = config.trials;
    result.eta_weak = weak.eta_ratio.value();
    result.rows.resize(static_cast<std::size_t>(config.trials));
    std::atomic<int> resampled{0};

    parallel_trials(config.trials, config.threads, [&](int t) {
        RandomStream rng(substream_seed(config.master_seed, "reversal",
                                        static_cast<std::uint64_t>(t)));
        const auto jitter = [&](const RealVector& spectrum) {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                RealVector jittered = spectrum;
                for (Index i = 0; i < jittered.size(); ++i)
                    jittered(i) +=
                        rng.uniform(-config.jitter_halfwidth, config.jitter_halfwidth);
                std::sort(jittered.data(), jittered.data() + jittered.size());
                bool gap_ok = true;
                for (Index i = 0; i + 1 < jittered.size(); ++i)
                    gap_ok &= jittered(i + 1) - jittered(i) > tol::min_gap;
                if (gap_ok)
                    return jittered;
                resampled.fetch_add(1);
            }
            throw std::runtime_error("otto::run_reversal: jitter kept producing degenerate spectra");
        };

        SystemSpec spec = base;
        spec.bath_hot = jitter(base.bath_hot);
        if (config.jitter_cold)
            spec.bath_cold = jitter(base.bath_cold);

        const RealVector p = gibbs_populations(spec.e_cold, spec.beta_c);
        const RealVector q = gibbs_populations(spec.e_hot, spec.beta_h);
        const ComplexMatrix u_hot =
            optimal_unitary(p, gibbs_populations(spec.bath_hot, spec.beta_h), spec.e_hot,
                            spec.bath_hot);
        const ComplexMatrix u_cold =
            optimal_unitary(q, gibbs_populations(spec.bath_cold, spec.beta_c), spec.e_cold,
                            spec.bath_cold);
        const StrongReport strong = strong_cycle(spec, u_hot, u_cold);
        result.rows[static_cast<std::size_t>(t)] = make_record(t, 0.0, weak, strong);
    });
    result.resampled = resampled.load();

    const int n_bins =
        static_cast<int>(std::lround((result.hist_hi - result.hist_lo) / result.hist_width));
    result.histogram.assign(static_cast<std::size_t>(n_bins), 0);
    for (const TrialRecord& r : result.rows) {
        if (!r.eta_str) {
            ++result.excluded;
            continue;
        }
        ++result.valid;
        if (*r.eta_str > result.eta_weak)
            ++result.above_weak;
        const double eta = *r.eta_str;
        if (eta < result.hist_lo) {
            ++result.below_range;
        } else if (eta >= result.hist_hi) {
            ++result.above_range;
        } else {
            const int bin = static_cast<int>((eta - result.hist_lo) / result.hist_width);
            ++result.histogram[static_cast<std::size_t>(bin)];
        }
    }
    result.fraction_above =
        result.valid > 0 ? static_cast<double>(result.above_weak) / result.valid : 0.0;

    std::string csv = "# otto reversal csv v1\n";
    csv += "trial_id,eta_weak,eta_str,d_hot,d_cold,delta_Ed_hot,delta_Ed_cold,"
           "engine_valid,sufficient_condition\n";
    for (const TrialRecord& r : result.rows)
        csv += trial_csv_row(r, false);
    write_file(config.output_path, csv);

    result.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const json summary{{"schema", "otto-reversal-summary-v1"},
                       {"config", config_json(config)},
                       {"eta_weak", result.eta_weak},
                       {"trials", result.trials},
                       {"valid", result.valid},
                       {"excluded", result.excluded},
                       {"resampled", result.resampled},
                       {"above_weak", result.above_weak},
                       {"fraction_above", result.fraction_above},
                       {"histogram", json{{"lo", result.hist_lo},
                                          {"hi", result.hist_hi},
                                          {"width", result.hist_width},
                                          {"counts", result.histogram},
                                          {"below_range", result.below_range},
                                          {"above_range", result.above_range}}},
                       {"duration_seconds", result.duration_seconds}};
    write_file(config.resolved_summary_path(), summary.dump(2) + "\n");
    return result;
}

} // namespace otto
