#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mfh {

struct DMResult {
    double statistic = 0.0;
    double p_value = 1.0;  // two-sided
    std::size_t n = 0;
    int hac_lag = 0;
    bool variance_fallback = false;  // long-run variance was <= 0; lag-0 variance used
    bool degenerate = false;         // zero variance with a nonzero mean differential
};

struct DMOptions {
    bool harvey_correction = false;  // small-sample factor with Student-t(n-1) p-values
};

/// Diebold-Mariano test on d_t = loss1_t - loss2_t with a Bartlett-kernel
/// Newey-West variance truncated at lag h-1. Positive statistics mean model 1
/// has the larger loss.
DMResult dm_test(std::span<const double> loss1, std::span<const double> loss2, int horizon,
                 const DMOptions& options = {});

/// Bartlett-weighted long-run variance of d with truncation lag `lag`.
double newey_west_variance(std::span<const double> d, int lag);

struct MCSOptions {
    double alpha = 0.25;
    int replications = 5000;
    int block_length = 0;  // 0 means ceil(n^(1/3))
    std::uint64_t seed = 1;
};

struct MCSResult {
    double alpha = 0.25;
    int replications = 0;
    int block_length = 0;
    std::string statistic = "T_max";
    std::vector<int> survivors;            // model indices, ascending
    std::vector<double> p_values;          // MCS p-value per model
    std::vector<int> elimination_order;    // models in order of removal
    bool tie_in_elimination = false;

    bool contains(int model) const;
};

/// Model Confidence Set with the range statistic and a moving-block bootstrap.
/// `losses` is n x M (rows = periods). The elimination sequence is computed to
/// the end, so the set at any level alpha is {i : p_i >= alpha}.
MCSResult mcs(const Eigen::MatrixXd& losses, const MCSOptions& options = {});

/// Moving-block bootstrap resample of {0..n-1}; deterministic in (seed, replication).
std::vector<int> block_bootstrap_indices(int n, int block_length, std::uint64_t seed, int replication);

double normal_two_sided_p(double z);

/// CSV `model1,model2,statistic,p_value` for every ordered pair.
std::string dm_matrix_to_csv(const std::vector<std::string>& models, const Eigen::MatrixXd& losses,
                             int horizon, const DMOptions& options = {});

/// JSON `{alpha, B, survivors, p_values}` with model names.
std::string mcs_to_json(const MCSResult& result, const std::vector<std::string>& models);

}  // namespace mfh
