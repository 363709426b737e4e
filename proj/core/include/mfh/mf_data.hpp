#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mfh/date.hpp"

namespace mfh {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return v != v; }

/// A univariate calendar-indexed series. Missing observations are NaN.
struct RawSeries {
    std::vector<Date> timestamps;
    std::vector<double> values;
    std::string label;

    std::size_t size() const { return values.size(); }
    /// Throws DataError unless timestamps are strictly increasing, sizes agree,
    /// length >= 2 and every value is finite or missing.
    void validate() const;
};

/// FRED-MD stationarity transformation code, restricted to 1..6.
class TCode {
public:
    explicit TCode(int code);
    int value() const { return code_; }
    /// Number of leading observations lost to differencing.
    int lost_observations() const;
    bool uses_log() const { return code_ >= 4; }

private:
    int code_;
};

RawSeries apply_tcode(const RawSeries& series, TCode code);

struct PeriodPosition {
    int period;    // 1-based LF period
    int position;  // 1-based position within the period
};

/// Aligned mixed-frequency sample: T low-frequency periods, m high-frequency
/// observations per period. Dense and complete.
class MFDataset {
public:
    MFDataset() = default;
    MFDataset(Eigen::VectorXd hf, Eigen::MatrixXd lf, int m, std::vector<std::string> labels,
              std::vector<std::string> period_labels = {});

    const Eigen::VectorXd& hf() const { return hf_; }
    const Eigen::MatrixXd& lf() const { return lf_; }
    int m() const { return m_; }
    int periods() const { return static_cast<int>(lf_.rows()); }
    int hf_length() const { return static_cast<int>(hf_.size()); }
    int lf_count() const { return static_cast<int>(lf_.cols()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::string>& period_labels() const { return period_labels_; }

    PeriodPosition period_index(int hf_index) const {
        return {hf_index / m_ + 1, hf_index % m_ + 1};
    }
    int label_index(const std::string& label) const;

    /// Copy restricted to the listed LF variables (in the given order).
    MFDataset select_lf(const std::vector<std::string>& labels) const;

    // Mutable access for perturbation experiments; re-checks nothing.
    Eigen::VectorXd& mutable_hf() { return hf_; }
    Eigen::MatrixXd& mutable_lf() { return lf_; }

private:
    Eigen::VectorXd hf_;
    Eigen::MatrixXd lf_;
    int m_ = 0;
    std::vector<std::string> labels_;
    std::vector<std::string> period_labels_;
};

// ---------------------------------------------------------------------------
// Fixed-m calendar alignment

enum class AlignAction { Insert, Delete, Pad };

struct AlignmentRecord {
    std::string period;
    AlignAction action;
    int position;  // 1-based within the period
    double value;
};

struct AlignedPanel {
    int m = 0;
    std::vector<std::string> periods;
    Eigen::VectorXd values;  // periods.size() * m
    std::vector<AlignmentRecord> log;
    int original_length = 0;
};

/// Brings every period to exactly m observations. `period_of[k]` names the
/// low-frequency period of observation k; equal keys must be contiguous.
/// Excess observations are dropped from the start of a period; a shortfall is
/// filled at the start of the period by linear interpolation between the last
/// value of the previous period and the first value of this one.
AlignedPanel align_fixed_m(const RawSeries& hf, int m, std::span<const std::string> period_of,
                           int sanity_bound = 5);

/// Month calendar: `YYYY-MM` for every timestamp.
std::vector<std::string> month_calendar(const RawSeries& series);

using PeriodKeyFn = std::function<std::string(const Date&)>;

/// Intersects the aligned HF panel with the LF series (dropping periods with
/// missing LF values at either end) and builds the dataset.
MFDataset assemble(const AlignedPanel& hf, std::span<const RawSeries> lf, int m,
                   const PeriodKeyFn& period_key = [](const Date& d) { return d.month_key(); });

// ---------------------------------------------------------------------------
// Synthetic pooled data generator

struct SimulationConfig {
    int m = 20;
    int T = 120;
    Eigen::MatrixXd alpha;  // K x m, row k holds alpha_1..alpha_m for LF variable k
    Eigen::VectorXd beta;   // HF lag coefficients beta_1..beta_p
    double lf_ar = 0.5;
    double lf_scale = 1.0;
    double noise_scale = 1.0;
    std::uint64_t seed = 1;
    int burn_in_periods = 50;
    std::vector<std::string> labels;  // defaults to y1..yK
    Date start{2000, 1, 1};           // label of the first returned period
};

struct SimulationResult {
    MFDataset dataset;
    Eigen::MatrixXd alpha;
    Eigen::VectorXd beta;
    Eigen::VectorXd noise;  // innovations aligned with dataset.hf()
};

/// y follows an AR(1) at the low frequency; x is generated from the pooled
/// model x_s = sum_k alpha_{k,i(s)} y_k(prev period) + sum_j beta_j x_{s-j} + e_s.
SimulationResult simulate_pooled_rumidas(const SimulationConfig& config);

}  // namespace mfh
