#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfh/forecaster.hpp"
#include "mfh/eval_stats.hpp"

namespace mfh::cli {

struct SimulateSettings {
    int T = 120;
    int K = 5;
    int relevant = 1;                // first `relevant` LF variables carry the alpha profile
    std::vector<double> alpha{0.8, 0.5, 0.3};
    std::vector<double> beta{0.35, 0.2, 0.1};
    double lf_ar = 0.5;
    double lf_scale = 1.0;
    double noise = 1.0;
    std::string start = "2000-01";
    bool weekday_calendar = true;    // Monday-Friday calendar; otherwise the first m days of each month
    std::vector<int> lf_tcodes;      // raw LF columns are integrated so these codes undo it
    std::vector<std::string> labels;
};

/// Effective configuration after defaults, config file and command-line flags
/// (in increasing precedence).
struct RunConfig {
    // [data]
    std::filesystem::path hf_path;
    std::filesystem::path lf_path;
    std::filesystem::path dataset_path;  // default: <out>/align/dataset.csv
    int m = 20;
    bool log_hf = false;
    int sanity_bound = 5;
    std::map<std::string, int> tcode_overrides;

    // [models]
    bool har = true;
    std::vector<std::string> pooled_hier;
    std::vector<std::string> pooled_ols;
    std::vector<std::string> dwm_hier;
    std::vector<std::string> dwm_ols;
    std::vector<std::string> rumidas_hier;
    std::vector<std::string> rumidas_ols;
    int q_lf = 1;
    int p_hf = 0;

    // [backtest]
    int window = 1200;
    std::vector<int> horizons{1, 5, 20, 40, 60, 120};
    int step = 1;
    int refit_every = 1;
    int threads = 1;

    // [solver]
    HierOptions hier;

    // [evaluate]
    double alpha = 0.25;
    int replications = 5000;
    int block_length = 0;
    std::optional<std::uint64_t> seed;
    LossKind loss = LossKind::Mafe;
    bool harvey = false;

    // [simulate]
    SimulateSettings simulate;

    // [output]
    std::filesystem::path out_dir = "out";

    /// Parses an INI file with sections. Relative paths resolve against the file's directory.
    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig defaults() { return RunConfig{}; }

    /// Canonical key=value dump used for the config hash.
    std::string canonical() const;

    std::filesystem::path dataset_or_default() const;
    /// Model list for the backtest; LF variable names are checked against `labels`.
    std::vector<ModelEntry> model_entries(const std::vector<std::string>& labels) const;
    BacktestSpec backtest_spec(const std::vector<std::string>& labels) const;
    MCSOptions mcs_options() const;
    std::uint64_t require_seed() const;
};

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::string> parse_string_list(const std::string& text);

}  // namespace mfh::cli
